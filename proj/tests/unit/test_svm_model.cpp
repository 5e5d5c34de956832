#include <doctest.h>

#include <cmath>
#include <random>

#include "svmver/error.hpp"
#include "svmver/svm_model.hpp"
#include "test_util.hpp"

using namespace svmver;
using svmver::testing::RandomModel;

namespace {

const char* kMinimal = R"({"format_version": 1, "kernel": {"type": "linear"}, "n_features": 2,
  "support_vectors": [[0.5, -1.0]], "dual_coef": [1.0], "bias": 0.25})";

ErrorCode CodeOf(const std::string& text) {
  try {
    ParseModelJson(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kIo;
}

// Independent oracle: the kernel formulas recomputed in long double.
long double KernelLong(const KernelSpec& k, std::span<const double> u, std::span<const double> v) {
  long double dot = 0, dist = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += static_cast<long double>(u[i]) * v[i];
    const long double d = static_cast<long double>(u[i]) - v[i];
    dist += d * d;
  }
  switch (k.type) {
    case KernelType::kLinear: return dot;
    case KernelType::kPolynomial: return std::pow(k.scale * dot + k.offset, static_cast<long double>(k.degree));
    case KernelType::kSigmoid: return std::tanh(k.scale * dot + k.offset);
    case KernelType::kRbf: return std::exp(-k.gamma * dist);
  }
  return 0;
}

}  // namespace

TEST_CASE("load_model parses a minimal linear model") {
  const SvmModel m = ParseModelJson(kMinimal);
  CHECK(m.n_support() == 1);
  CHECK(m.n_features() == 2);
  CHECK(m.coef() == std::vector<double>{1.0});
  CHECK(m.bias() == 0.25);
  CHECK(m.kernel().type == KernelType::kLinear);
}

TEST_CASE("load_model rejects malformed files with field names") {
  CHECK(CodeOf(R"({"format_version": 1, "kernel": {"type": "linear"}, "n_features": 2,
    "support_vectors": [[0, 0], [1, 1]], "dual_coef": [1.0], "bias": 0})") == ErrorCode::kDimension);
  CHECK(CodeOf(R"({"format_version": 1, "kernel": {"type": "rbf", "gamma": -1}, "n_features": 1,
    "support_vectors": [[0]], "dual_coef": [1.0], "bias": 0})") == ErrorCode::kConstraint);
  CHECK(CodeOf(R"({"format_version": 1, "kernel": {"type": "sigmoid", "gamma": 1, "coef0": 0.5},
    "n_features": 1, "support_vectors": [[0]], "dual_coef": [1.0], "bias": 0})") == ErrorCode::kConstraint);
  CHECK(CodeOf(R"({"format_version": 1, "kernel": {"type": "poly", "degree": 0}, "n_features": 1,
    "support_vectors": [[0]], "dual_coef": [1.0], "bias": 0})") == ErrorCode::kConstraint);
  CHECK(CodeOf(R"({"format_version": 2, "kernel": {"type": "linear"}, "n_features": 1,
    "support_vectors": [[0]], "dual_coef": [1.0], "bias": 0})") == ErrorCode::kParse);
  CHECK(CodeOf(R"({"format_version": 1, "kernel": {"type": "linear"}, "n_features": 2,
    "support_vectors": [[0, 1, 2]], "dual_coef": [1.0], "bias": 0})") == ErrorCode::kDimension);
  CHECK(CodeOf("{not json") == ErrorCode::kParse);
  CHECK(CodeOf(R"({"format_version": 1, "kernel": {"type": "cubic"}})") == ErrorCode::kParse);

  try {
    ParseModelJson(R"({"format_version": 1, "kernel": {"type": "rbf", "gamma": -1}, "n_features": 1,
      "support_vectors": [[0]], "dual_coef": [1.0], "bias": 0})");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("kernel.gamma") != std::string::npos);
  }
}

TEST_CASE("load_model reports unreadable files as I/O errors") {
  try {
    LoadModel("/nonexistent/model.json");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIo);
  }
}

TEST_CASE("kernel_eval examples") {
  const std::vector<double> u{1, 2}, v{3, 4}, e{1, 0};
  CHECK(KernelEval(KernelSpec::Linear(), u, v) == 11.0);
  CHECK(KernelEval(KernelSpec::Polynomial(2, 1.0, 1.0), e, e) == 4.0);
  CHECK(KernelEval(KernelSpec::Rbf(0.5), u, u) == 1.0);
  CHECK(KernelEval(KernelSpec::Sigmoid(1.0, -1.0), e, e) == doctest::Approx(0.0));
}

TEST_CASE("decision_value examples") {
  const SvmModel one(KernelSpec::Linear(), 2, {0, 0}, {1}, 0.5);
  CHECK(one.DecisionValue(std::vector<double>{1, 1}) == 0.5);
  const SvmModel two(KernelSpec::Linear(), 2, {1, 0, 0, 1}, {1, -1}, 0.0);
  CHECK(two.DecisionValue(std::vector<double>{1, 1}) == 0.0);
  CHECK_THROWS_AS(two.DecisionValue(std::vector<double>{1, 1, 1}), Error);
}

TEST_CASE("decision_value agrees with an extended-precision summation") {
  std::mt19937_64 rng(11);
  for (KernelType type : svmver::testing::kAllKernels) {
    for (int trial = 0; trial < 50; ++trial) {
      const SvmModel m = RandomModel(type, 1 + trial % 10, 1 + trial % 8, rng);
      const auto x = svmver::testing::Uniform(rng, m.n_features(), -1.0, 1.0);
      long double acc = m.bias();
      for (std::size_t i = 0; i < m.n_support(); ++i) acc += m.coef()[i] * KernelLong(m.kernel(), x, m.support_vector(i));
      CHECK(std::fabs(m.DecisionValue(x) - static_cast<double>(acc)) <= 1e-12);
    }
  }
}

TEST_CASE("classify resolves sign(0) to +1") {
  const SvmModel pos(KernelSpec::Linear(), 1, {0}, {1}, 0.5);
  const SvmModel neg(KernelSpec::Linear(), 1, {0}, {1}, -0.5);
  const SvmModel zero(KernelSpec::Linear(), 1, {0}, {1}, 0.0);
  const std::vector<double> x{3};
  CHECK(pos.Classify(x) == 1);
  CHECK(neg.Classify(x) == -1);
  CHECK(zero.Classify(x) == 1);
}

TEST_CASE("kernel properties on random inputs") {
  std::mt19937_64 rng(5);
  for (KernelType type : svmver::testing::kAllKernels) {
    for (int trial = 0; trial < 200; ++trial) {
      const SvmModel m = RandomModel(type, 3, 4, rng);
      const auto u = svmver::testing::Uniform(rng, 4, -2.0, 2.0);
      const auto v = svmver::testing::Uniform(rng, 4, -2.0, 2.0);
      CHECK(KernelEval(m.kernel(), u, v) == KernelEval(m.kernel(), v, u));
      CHECK(m.Classify(u) * m.DecisionValue(u) >= 0.0);
      if (type == KernelType::kRbf) {
        const double k = KernelEval(m.kernel(), u, v);
        CHECK(k > 0.0);
        CHECK(k < 1.0);
        CHECK(std::fabs(KernelEval(m.kernel(), u, u) - 1.0) <= 1e-12);
      }
    }
  }
}

TEST_CASE("model JSON round-trips exactly") {
  std::mt19937_64 rng(9);
  for (KernelType type : svmver::testing::kAllKernels) {
    const SvmModel m = RandomModel(type, 4, 3, rng);
    const SvmModel back = ParseModelJson(ModelToJson(m));
    CHECK(back.support_vectors() == m.support_vectors());
    CHECK(back.coef() == m.coef());
    CHECK(back.bias() == m.bias());
    CHECK(back.kernel().type == m.kernel().type);
    CHECK(back.kernel().degree == m.kernel().degree);
    CHECK(back.kernel().offset == m.kernel().offset);
    CHECK(back.kernel().scale == m.kernel().scale);
    CHECK(back.kernel().gamma == m.kernel().gamma);
  }
}

TEST_CASE("checked-in fixture models load") {
  const SvmModel rbf = LoadModel(svmver::testing::FixturePath("mnist01_rbf.json"));
  CHECK(rbf.n_features() == 784);
  CHECK(rbf.n_support() <= 200);
  CHECK(rbf.kernel().type == KernelType::kRbf);
}
