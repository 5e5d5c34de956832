#include "svmver/svm_model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "svmver/error.hpp"

namespace svmver {
namespace {

using nlohmann::json;

double Dot(std::span<const double> u, std::span<const double> v) {
  double acc = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) acc += u[k] * v[k];
  return acc;
}

void RequireFinite(double value, const std::string& field) {
  if (!std::isfinite(value)) Fail(ErrorCode::kConstraint, field + " must be finite");
}

const json& Field(const json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end()) Fail(ErrorCode::kParse, std::string("missing field '") + name + "'");
  return *it;
}

double Number(const json& value, const std::string& field) {
  if (!value.is_number()) Fail(ErrorCode::kParse, "field '" + field + "' must be a number");
  return value.get<double>();
}

double OptionalNumber(const json& obj, const char* name, double fallback) {
  auto it = obj.find(name);
  return it == obj.end() ? fallback : Number(*it, name);
}

std::string FormatDouble(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace

const char* KernelName(KernelType type) {
  switch (type) {
    case KernelType::kLinear: return "linear";
    case KernelType::kPolynomial: return "poly";
    case KernelType::kSigmoid: return "sigmoid";
    case KernelType::kRbf: return "rbf";
  }
  return "unknown";
}

void KernelSpec::Validate() const {
  RequireFinite(offset, "kernel.coef0");
  RequireFinite(scale, "kernel.gamma");
  RequireFinite(gamma, "kernel.gamma");
  switch (type) {
    case KernelType::kLinear:
      break;
    case KernelType::kPolynomial:
      if (degree < 1) Fail(ErrorCode::kConstraint, "kernel.degree must be >= 1");
      break;
    case KernelType::kSigmoid:
      if (!(scale > 0.0)) Fail(ErrorCode::kConstraint, "kernel.gamma (beta) must be > 0");
      if (!(offset < 0.0)) Fail(ErrorCode::kConstraint, "kernel.coef0 (theta) must be < 0");
      break;
    case KernelType::kRbf:
      if (!(gamma > 0.0)) Fail(ErrorCode::kConstraint, "kernel.gamma must be > 0");
      break;
  }
}

double KernelEval(const KernelSpec& kernel, std::span<const double> u, std::span<const double> v) {
  RequireWidth(v.size(), u.size(), "kernel argument");
  switch (kernel.type) {
    case KernelType::kLinear:
      return Dot(u, v);
    case KernelType::kPolynomial:
      return std::pow(kernel.scale * Dot(u, v) + kernel.offset, kernel.degree);
    case KernelType::kSigmoid:
      return std::tanh(kernel.scale * Dot(u, v) + kernel.offset);
    case KernelType::kRbf: {
      double dist2 = 0.0;
      for (std::size_t k = 0; k < u.size(); ++k) {
        const double d = u[k] - v[k];
        dist2 += d * d;
      }
      return std::exp(-kernel.gamma * dist2);
    }
  }
  return 0.0;
}

SvmModel::SvmModel(KernelSpec kernel, std::size_t n_features, std::vector<double> support_vectors,
                   std::vector<double> coef, double bias)
    : kernel_(kernel),
      n_features_(n_features),
      support_vectors_(std::move(support_vectors)),
      coef_(std::move(coef)),
      bias_(bias) {
  kernel_.Validate();
  if (n_features_ == 0) Fail(ErrorCode::kDimension, "n_features must be >= 1");
  if (coef_.empty()) Fail(ErrorCode::kDimension, "model needs at least one support vector");
  if (support_vectors_.size() != coef_.size() * n_features_) {
    Fail(ErrorCode::kDimension, "support_vectors holds " + std::to_string(support_vectors_.size()) +
                                    " values, expected m*n = " +
                                    std::to_string(coef_.size() * n_features_));
  }
  for (double v : support_vectors_) RequireFinite(v, "support_vectors");
  for (double v : coef_) RequireFinite(v, "dual_coef");
  RequireFinite(bias_, "bias");
}

double SvmModel::DecisionValue(std::span<const double> x) const {
  RequireWidth(x.size(), n_features_, "decision_value input");
  double acc = 0.0;
  for (std::size_t i = 0; i < coef_.size(); ++i) {
    acc += coef_[i] * KernelEval(kernel_, x, support_vector(i));
  }
  return acc + bias_;
}

int SvmModel::Classify(std::span<const double> x) const { return DecisionValue(x) >= 0.0 ? 1 : -1; }

SvmModel ParseModelJson(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kParse, std::string("model JSON: ") + e.what());
  }
  if (!doc.is_object()) Fail(ErrorCode::kParse, "model file must hold a JSON object");

  const json& version = Field(doc, "format_version");
  if (!version.is_number_integer() || version.get<int>() != 1) {
    Fail(ErrorCode::kParse, "format_version must be the integer 1");
  }

  const json& kj = Field(doc, "kernel");
  if (!kj.is_object()) Fail(ErrorCode::kParse, "field 'kernel' must be an object");
  const json& type_field = Field(kj, "type");
  if (!type_field.is_string()) Fail(ErrorCode::kParse, "kernel.type must be a string");
  const std::string type = type_field.get<std::string>();

  KernelSpec kernel;
  if (type == "linear") {
    kernel = KernelSpec::Linear();
  } else if (type == "poly") {
    const json& degree = Field(kj, "degree");
    if (!degree.is_number_integer()) Fail(ErrorCode::kParse, "kernel.degree must be an integer");
    kernel = KernelSpec::Polynomial(degree.get<int>(), OptionalNumber(kj, "coef0", 0.0),
                                    OptionalNumber(kj, "gamma", 1.0));
  } else if (type == "sigmoid") {
    kernel = KernelSpec::Sigmoid(Number(Field(kj, "gamma"), "kernel.gamma"),
                                 Number(Field(kj, "coef0"), "kernel.coef0"));
  } else if (type == "rbf") {
    kernel = KernelSpec::Rbf(Number(Field(kj, "gamma"), "kernel.gamma"));
  } else {
    Fail(ErrorCode::kParse, "unknown kernel.type '" + type + "'");
  }

  const json& nf = Field(doc, "n_features");
  if (!nf.is_number_integer() || nf.get<long long>() < 1) {
    Fail(ErrorCode::kParse, "n_features must be a positive integer");
  }
  const auto n = static_cast<std::size_t>(nf.get<long long>());

  const json& svs = Field(doc, "support_vectors");
  if (!svs.is_array()) Fail(ErrorCode::kParse, "support_vectors must be an array");
  std::vector<double> flat;
  flat.reserve(svs.size() * n);
  for (std::size_t i = 0; i < svs.size(); ++i) {
    const json& row = svs[i];
    if (!row.is_array()) Fail(ErrorCode::kParse, "support_vectors rows must be arrays");
    if (row.size() != n) {
      Fail(ErrorCode::kDimension, "support_vectors[" + std::to_string(i) + "] has width " +
                                      std::to_string(row.size()) + ", expected n_features = " +
                                      std::to_string(n));
    }
    for (const json& v : row) flat.push_back(Number(v, "support_vectors"));
  }

  const json& dc = Field(doc, "dual_coef");
  if (!dc.is_array()) Fail(ErrorCode::kParse, "dual_coef must be an array");
  std::vector<double> coef;
  coef.reserve(dc.size());
  for (const json& v : dc) coef.push_back(Number(v, "dual_coef"));
  if (coef.size() != svs.size()) {
    Fail(ErrorCode::kDimension, "dual_coef has length " + std::to_string(coef.size()) +
                                    ", expected m = " + std::to_string(svs.size()));
  }

  const double bias = Number(Field(doc, "bias"), "bias");
  return SvmModel(kernel, n, std::move(flat), std::move(coef), bias);
}

SvmModel LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseModelJson(buf.str());
}

std::string ModelToJson(const SvmModel& model) {
  const KernelSpec& k = model.kernel();
  std::ostringstream out;
  out << "{\n  \"format_version\": 1,\n  \"kernel\": {\"type\": \"" << KernelName(k.type) << "\"";
  switch (k.type) {
    case KernelType::kLinear:
      break;
    case KernelType::kPolynomial:
      out << ", \"degree\": " << k.degree << ", \"coef0\": " << FormatDouble(k.offset)
          << ", \"gamma\": " << FormatDouble(k.scale);
      break;
    case KernelType::kSigmoid:
      out << ", \"coef0\": " << FormatDouble(k.offset) << ", \"gamma\": " << FormatDouble(k.scale);
      break;
    case KernelType::kRbf:
      out << ", \"gamma\": " << FormatDouble(k.gamma);
      break;
  }
  out << "},\n  \"n_features\": " << model.n_features() << ",\n  \"support_vectors\": [";
  for (std::size_t i = 0; i < model.n_support(); ++i) {
    out << (i ? ",\n    [" : "\n    [");
    auto row = model.support_vector(i);
    for (std::size_t k2 = 0; k2 < row.size(); ++k2) out << (k2 ? ", " : "") << FormatDouble(row[k2]);
    out << "]";
  }
  out << "\n  ],\n  \"dual_coef\": [";
  for (std::size_t i = 0; i < model.n_support(); ++i) {
    out << (i ? ", " : "") << FormatDouble(model.coef()[i]);
  }
  out << "],\n  \"bias\": " << FormatDouble(model.bias()) << "\n}\n";
  return out.str();
}

}  // namespace svmver
