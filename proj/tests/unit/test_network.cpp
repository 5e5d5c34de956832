#include <doctest.h>

#include <cmath>
#include <random>

#include "svmver/error.hpp"
#include "svmver/network.hpp"
#include "test_util.hpp"

using namespace svmver;
using svmver::testing::Materialize;
using svmver::testing::RandomModel;
using svmver::testing::Uniform;

namespace {

double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<LinearMap> SampleMaps(std::mt19937_64& rng) {
  std::vector<LinearMap> maps;
  maps.push_back(LinearMap::Dense(4, 3, Uniform(rng, 12, -1, 1)));
  maps.push_back(LinearMap::StackedIdentity(3, 4));
  maps.push_back(LinearMap::BlockSum(3, 4));
  maps.push_back(LinearMap::Readout(Uniform(rng, 5, -1, 1)));
  return maps;
}

}  // namespace

TEST_CASE("map_forward examples") {
  const std::vector<double> x{3, 4};
  CHECK(LinearMap::StackedIdentity(2, 2).Forward(x) == std::vector<double>{3, 4, 3, 4});
  const std::vector<double> y{1, 2, 3, 4};
  CHECK(LinearMap::BlockSum(2, 2).Forward(y) == std::vector<double>{3, 7});
  CHECK_THROWS_AS(LinearMap::BlockSum(2, 2).Forward(x), Error);
}

TEST_CASE("map_adjoint examples") {
  const std::vector<double> v{1, 2, 3, 4};
  CHECK(LinearMap::StackedIdentity(2, 2).Adjoint(v) == std::vector<double>{4, 6});
  const std::vector<double> w{5, 7};
  CHECK(LinearMap::BlockSum(2, 2).Adjoint(w) == std::vector<double>{5, 5, 7, 7});
  CHECK_THROWS_AS(LinearMap::StackedIdentity(2, 2).Adjoint(w), Error);
}

TEST_CASE("dense and structured maps match their materialized matrices") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    for (const LinearMap& map : SampleMaps(rng)) {
      const auto w = Materialize(map);
      const auto x = Uniform(rng, map.in_width(), -2, 2);
      const auto v = Uniform(rng, map.out_width(), -2, 2);
      const auto fx = map.Forward(x);
      const auto av = map.Adjoint(v);
      for (std::size_t j = 0; j < map.out_width(); ++j) {
        double ref = 0;
        for (std::size_t i = 0; i < map.in_width(); ++i) ref += w[i][j] * x[i];
        CHECK(std::fabs(fx[j] - ref) <= 1e-12);
      }
      for (std::size_t i = 0; i < map.in_width(); ++i) {
        double ref = 0;
        for (std::size_t j = 0; j < map.out_width(); ++j) ref += w[i][j] * v[j];
        CHECK(std::fabs(av[i] - ref) <= 1e-12);
      }
      // adjoint identity <W^T x, v> = <x, W v>
      CHECK(std::fabs(Dot(fx, v) - Dot(x, av)) <= 1e-10);
    }
  }
}

TEST_CASE("structured maps materialize to 0/1 entries") {
  for (const LinearMap& map : {LinearMap::StackedIdentity(3, 2), LinearMap::BlockSum(2, 3)}) {
    for (const auto& row : Materialize(map)) {
      for (double e : row) CHECK((e == 0.0 || e == 1.0));
    }
    CHECK(map.nonnegative());
  }
}

TEST_CASE("compile produces the expected layer shapes") {
  std::mt19937_64 rng(7);
  const LayeredNetwork rbf = CompileNetwork(RandomModel(KernelType::kRbf, 3, 4, rng));
  CHECK(rbf.depth() == 2);
  CHECK(rbf.x_width(0) == 4);
  CHECK(rbf.x_width(1) == 12);
  CHECK(rbf.x_width(2) == 3);
  CHECK(rbf.z_width(2) == 1);
  CHECK(rbf.layer(0).map.kind() == LinearMap::Kind::kStackedIdentity);
  CHECK(rbf.layer(1).map.kind() == LinearMap::Kind::kBlockSum);
  CHECK(rbf.activation(0).kind == ActivationSpec::Kind::kPower);
  CHECK(rbf.activation(0).degree == 2);
  CHECK(rbf.activation(1).kind == ActivationSpec::Kind::kExpNeg);

  const LayeredNetwork lin = CompileNetwork(RandomModel(KernelType::kLinear, 3, 4, rng));
  CHECK(lin.depth() == 1);
  CHECK(lin.activation(0).kind == ActivationSpec::Kind::kIdentity);
  CHECK(lin.layer(0).map.kind() == LinearMap::Kind::kDense);
  CHECK(lin.layer(1).map.kind() == LinearMap::Kind::kReadout);

  const SvmModel poly_model = RandomModel(KernelType::kPolynomial, 2, 3, rng);
  const LayeredNetwork poly = CompileNetwork(poly_model);
  CHECK(poly.activation(0).kind == ActivationSpec::Kind::kPower);
  CHECK(poly.activation(0).degree == poly_model.kernel().degree);
  CHECK(poly.layer(0).bias == std::vector<double>(2, poly_model.kernel().offset));

  CHECK(CompileNetwork(RandomModel(KernelType::kSigmoid, 2, 3, rng)).activation(0).kind ==
        ActivationSpec::Kind::kTanh);
}

TEST_CASE("compiled networks evaluate the decision function") {
  std::mt19937_64 rng(21);
  for (KernelType type : svmver::testing::kAllKernels) {
    for (int trial = 0; trial < 100; ++trial) {
      const SvmModel m = RandomModel(type, 1 + trial % 10, 1 + trial % 8, rng);
      const LayeredNetwork net = CompileNetwork(m);
      const auto x = Uniform(rng, m.n_features(), -1.5, 1.5);
      CHECK(std::fabs(net.Evaluate(x) - m.DecisionValue(x)) <= 1e-9);
    }
  }
}

TEST_CASE("forward states satisfy the layer equations") {
  std::mt19937_64 rng(2);
  for (KernelType type : svmver::testing::kAllKernels) {
    const SvmModel m = RandomModel(type, 4, 3, rng);
    const LayeredNetwork net = CompileNetwork(m);
    const auto x = Uniform(rng, 3, -1, 1);
    const NetworkStates s = net.Forward(x);
    REQUIRE(s.x.size() == net.depth() + 1);
    for (std::size_t l = 0; l <= net.depth(); ++l) {
      const auto w = Materialize(net.layer(l).map);
      for (std::size_t j = 0; j < net.z_width(l); ++j) {
        double ref = net.layer(l).bias[j];
        for (std::size_t i = 0; i < net.x_width(l); ++i) ref += w[i][j] * s.x[l][i];
        CHECK(std::fabs(s.z[l][j] - ref) <= 1e-12);
        if (l < net.depth()) CHECK(s.x[l + 1][j] == net.activation(l).Apply(s.z[l][j]));
      }
    }
  }
}

TEST_CASE("identity-activation network is affine") {
  std::mt19937_64 rng(4);
  const LayeredNetwork net = CompileNetwork(RandomModel(KernelType::kLinear, 3, 2, rng));
  const std::vector<double> a{0.1, -0.4}, b{0.7, 0.2}, mid{0.4, -0.1};
  CHECK(net.Evaluate(mid) == doctest::Approx(0.5 * (net.Evaluate(a) + net.Evaluate(b))).epsilon(1e-12));
}

TEST_CASE("compiled RBF net at a support vector has unit kernel coordinate") {
  std::mt19937_64 rng(8);
  const SvmModel m = RandomModel(KernelType::kRbf, 4, 3, rng);
  const LayeredNetwork net = CompileNetwork(m);
  const auto sv = m.support_vector(2);
  const NetworkStates s = net.Forward(std::vector<double>(sv.begin(), sv.end()));
  CHECK(s.x[2][2] == 1.0);
}

TEST_CASE("network dump lists widths and variants") {
  std::mt19937_64 rng(8);
  const std::string dump = CompileNetwork(RandomModel(KernelType::kRbf, 3, 4, rng)).DumpShape();
  CHECK(dump.find("\"widths\": [4, 12, 3, 1]") != std::string::npos);
  CHECK(dump.find("stacked_identity") != std::string::npos);
  CHECK(dump.find("exp_neg") != std::string::npos);
}
