#include "svmver/network.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "svmver/error.hpp"

namespace svmver {

LinearMap::LinearMap(Kind kind, std::size_t in, std::size_t out, std::size_t blocks,
                     std::size_t dim, std::vector<double> weights)
    : kind_(kind), in_(in), out_(out), blocks_(blocks), dim_(dim), weights_(std::move(weights)) {
  if (in_ == 0 || out_ == 0) Fail(ErrorCode::kDimension, "linear map widths must be positive");
}

LinearMap LinearMap::Dense(std::size_t n_in, std::size_t n_out, std::vector<double> columns) {
  if (columns.size() != n_in * n_out) {
    Fail(ErrorCode::kDimension, "dense map needs n_in*n_out weights");
  }
  return LinearMap(Kind::kDense, n_in, n_out, 0, 0, std::move(columns));
}

LinearMap LinearMap::StackedIdentity(std::size_t copies, std::size_t dim) {
  return LinearMap(Kind::kStackedIdentity, dim, copies * dim, copies, dim, {});
}

LinearMap LinearMap::BlockSum(std::size_t blocks, std::size_t dim) {
  return LinearMap(Kind::kBlockSum, blocks * dim, blocks, blocks, dim, {});
}

LinearMap LinearMap::Readout(std::vector<double> weights) {
  const std::size_t n = weights.size();
  return LinearMap(Kind::kReadout, n, 1, 0, 0, std::move(weights));
}

bool LinearMap::nonnegative() const {
  return std::all_of(weights_.begin(), weights_.end(), [](double w) { return w >= 0.0; });
}

void LinearMap::Forward(std::span<const double> x, std::span<double> out) const {
  RequireWidth(x.size(), in_, "map_forward input");
  RequireWidth(out.size(), out_, "map_forward output");
  switch (kind_) {
    case Kind::kDense:
    case Kind::kReadout:
      for (std::size_t j = 0; j < out_; ++j) {
        const double* col = weights_.data() + j * in_;
        double acc = 0.0;
        for (std::size_t i = 0; i < in_; ++i) acc += col[i] * x[i];
        out[j] = acc;
      }
      break;
    case Kind::kStackedIdentity:
      for (std::size_t c = 0; c < blocks_; ++c) std::copy(x.begin(), x.end(), out.begin() + c * dim_);
      break;
    case Kind::kBlockSum:
      for (std::size_t b = 0; b < blocks_; ++b) {
        double acc = 0.0;
        for (std::size_t k = 0; k < dim_; ++k) acc += x[b * dim_ + k];
        out[b] = acc;
      }
      break;
  }
}

std::vector<double> LinearMap::Forward(std::span<const double> x) const {
  std::vector<double> out(out_);
  Forward(x, out);
  return out;
}

void LinearMap::Adjoint(std::span<const double> v, std::span<double> out) const {
  RequireWidth(v.size(), out_, "map_adjoint input");
  RequireWidth(out.size(), in_, "map_adjoint output");
  switch (kind_) {
    case Kind::kDense:
    case Kind::kReadout:
      std::fill(out.begin(), out.end(), 0.0);
      for (std::size_t j = 0; j < out_; ++j) {
        const double* col = weights_.data() + j * in_;
        const double vj = v[j];
        if (vj == 0.0) continue;
        for (std::size_t i = 0; i < in_; ++i) out[i] += col[i] * vj;
      }
      break;
    case Kind::kStackedIdentity:
      std::fill(out.begin(), out.end(), 0.0);
      for (std::size_t c = 0; c < blocks_; ++c) {
        for (std::size_t k = 0; k < dim_; ++k) out[k] += v[c * dim_ + k];
      }
      break;
    case Kind::kBlockSum:
      for (std::size_t b = 0; b < blocks_; ++b) {
        std::fill(out.begin() + b * dim_, out.begin() + (b + 1) * dim_, v[b]);
      }
      break;
  }
}

std::vector<double> LinearMap::Adjoint(std::span<const double> v) const {
  std::vector<double> out(in_);
  Adjoint(v, out);
  return out;
}

double LinearMap::Entry(std::size_t i, std::size_t j) const {
  if (i >= in_ || j >= out_) Fail(ErrorCode::kDimension, "map entry out of range");
  switch (kind_) {
    case Kind::kDense:
    case Kind::kReadout:
      return weights_[j * in_ + i];
    case Kind::kStackedIdentity:
      return j % dim_ == i ? 1.0 : 0.0;
    case Kind::kBlockSum:
      return i / dim_ == j ? 1.0 : 0.0;
  }
  return 0.0;
}

const char* MapKindName(LinearMap::Kind kind) {
  switch (kind) {
    case LinearMap::Kind::kDense: return "dense";
    case LinearMap::Kind::kStackedIdentity: return "stacked_identity";
    case LinearMap::Kind::kBlockSum: return "block_sum";
    case LinearMap::Kind::kReadout: return "readout";
  }
  return "unknown";
}

double ActivationSpec::Apply(double z) const {
  switch (kind) {
    case Kind::kIdentity: return z;
    case Kind::kPower: {
      double r = 1.0;
      for (int k = 0; k < degree; ++k) r *= z;
      return r;
    }
    case Kind::kTanh: return std::tanh(z);
    case Kind::kExpNeg: return std::exp(-gamma * z);
  }
  return z;
}

void ActivationSpec::Validate() const {
  if (kind == Kind::kPower && degree < 1) Fail(ErrorCode::kConstraint, "power degree must be >= 1");
  if (kind == Kind::kExpNeg && !(gamma > 0.0 && std::isfinite(gamma))) {
    Fail(ErrorCode::kConstraint, "exp_neg gamma must be finite and > 0");
  }
}

const char* ActivationName(ActivationSpec::Kind kind) {
  switch (kind) {
    case ActivationSpec::Kind::kIdentity: return "identity";
    case ActivationSpec::Kind::kPower: return "power";
    case ActivationSpec::Kind::kTanh: return "tanh";
    case ActivationSpec::Kind::kExpNeg: return "exp_neg";
  }
  return "unknown";
}

LayeredNetwork::LayeredNetwork(std::vector<Layer> layers, std::vector<ActivationSpec> activations)
    : layers_(std::move(layers)), activations_(std::move(activations)) {
  if (layers_.size() != activations_.size() + 1) {
    Fail(ErrorCode::kDimension, "network needs one more affine layer than activations");
  }
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    RequireWidth(layers_[l].bias.size(), layers_[l].map.out_width(), "layer bias");
    if (l > 0) RequireWidth(layers_[l].map.in_width(), layers_[l - 1].map.out_width(), "layer input");
  }
  for (const auto& act : activations_) act.Validate();
  RequireWidth(layers_.back().map.out_width(), 1, "network output");
}

NetworkStates LayeredNetwork::Forward(std::span<const double> x0) const {
  RequireWidth(x0.size(), input_width(), "network input");
  const std::size_t depth_l = depth();
  NetworkStates s;
  s.x.resize(depth_l + 1);
  s.z.resize(depth_l + 1);
  s.x[0].assign(x0.begin(), x0.end());
  for (std::size_t l = 0; l <= depth_l; ++l) {
    const Layer& layer = layers_[l];
    s.z[l] = layer.map.Forward(s.x[l]);
    for (std::size_t k = 0; k < s.z[l].size(); ++k) s.z[l][k] += layer.bias[k];
    if (l < depth_l) {
      s.x[l + 1].resize(s.z[l].size());
      for (std::size_t k = 0; k < s.z[l].size(); ++k) s.x[l + 1][k] = activations_[l].Apply(s.z[l][k]);
    }
  }
  return s;
}

std::string LayeredNetwork::DumpShape() const {
  std::ostringstream out;
  out << "{\"depth\": " << depth() << ", \"widths\": [";
  for (std::size_t l = 0; l <= depth(); ++l) out << x_width(l) << ", ";
  out << 1 << "], \"layers\": [";
  for (std::size_t l = 0; l <= depth(); ++l) {
    const Layer& layer = layers_[l];
    out << (l ? ", " : "") << "{\"map\": \"" << MapKindName(layer.map.kind())
        << "\", \"in\": " << layer.map.in_width() << ", \"out\": " << layer.map.out_width();
    if (l < depth()) {
      const ActivationSpec& act = activations_[l];
      out << ", \"activation\": \"" << ActivationName(act.kind) << "\"";
      if (act.kind == ActivationSpec::Kind::kPower) out << ", \"degree\": " << act.degree;
      if (act.kind == ActivationSpec::Kind::kExpNeg) out << ", \"gamma\": " << act.gamma;
    }
    out << "}";
  }
  out << "]}";
  return out.str();
}

LayeredNetwork CompileNetwork(const SvmModel& model) {
  const std::size_t n = model.n_features();
  const std::size_t m = model.n_support();
  const KernelSpec& k = model.kernel();
  const auto& svs = model.support_vectors();

  std::vector<Layer> layers;
  std::vector<ActivationSpec> acts;

  if (k.type == KernelType::kRbf) {
    std::vector<double> shift(m * n);
    for (std::size_t i = 0; i < m * n; ++i) shift[i] = -svs[i];
    layers.push_back({LinearMap::StackedIdentity(m, n), std::move(shift)});
    acts.push_back(ActivationSpec::Power(2));
    layers.push_back({LinearMap::BlockSum(m, n), std::vector<double>(m, 0.0)});
    acts.push_back(ActivationSpec::ExpNeg(k.gamma));
  } else {
    // Support vectors are stored row-major, which is exactly W^0's column layout.
    std::vector<double> columns = svs;
    double first_bias = 0.0;
    ActivationSpec act = ActivationSpec::Identity();
    if (k.type == KernelType::kPolynomial) {
      for (double& w : columns) w *= k.scale;
      first_bias = k.offset;
      act = ActivationSpec::Power(k.degree);
    } else if (k.type == KernelType::kSigmoid) {
      for (double& w : columns) w *= k.scale;
      first_bias = k.offset;
      act = ActivationSpec::Tanh();
    }
    layers.push_back({LinearMap::Dense(n, m, std::move(columns)), std::vector<double>(m, first_bias)});
    acts.push_back(act);
  }
  layers.push_back({LinearMap::Readout(model.coef()), std::vector<double>{model.bias()}});
  return LayeredNetwork(std::move(layers), std::move(acts));
}

}  // namespace svmver
