#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "svmver/bounds.hpp"
#include "svmver/dual.hpp"
#include "svmver/error.hpp"
#include "test_util.hpp"

using namespace svmver;
using svmver::testing::RandomModel;
using svmver::testing::Uniform;
using svmver::testing::UniformScalar;

namespace {

DualVars RandomDuals(const LayeredNetwork& net, std::mt19937_64& rng, double scale) {
  DualVars d = DualVars::Zeros(net);
  std::normal_distribution<double> g(0.0, scale);
  for (double& v : d.values()) v = g(rng);
  return d;
}

std::vector<double> SampleInRegion(std::mt19937_64& rng, const Region& r) {
  const auto lo = r.Lower(), hi = r.Upper();
  std::vector<double> x(lo.size());
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = UniformScalar(rng, lo[k], hi[k]);
  return x;
}

// Dense grid oracle: min of g over n points and the largest jump between neighbours.
struct GridOracle {
  double min;
  double max_step;
};

GridOracle GridMinimum(const ActivationSpec& act, double mu, double lambda, double lo, double hi, int n) {
  GridOracle o{std::numeric_limits<double>::infinity(), 0.0};
  double prev = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
    const double g = mu * z - lambda * act.Apply(z);
    o.min = std::min(o.min, g);
    if (i > 0) o.max_step = std::max(o.max_step, std::fabs(g - prev));
    prev = g;
  }
  return o;
}

}  // namespace

TEST_CASE("box_linear_min examples") {
  BoxMin r = BoxLinearMin(std::vector<double>{2, -3}, std::vector<double>{0, 0}, std::vector<double>{1, 1});
  CHECK(r.value == -3.0);
  CHECK(r.argmin == std::vector<double>{0, 1});
  r = BoxLinearMin(std::vector<double>{0, 0}, std::vector<double>{-1, 2}, std::vector<double>{1, 3});
  CHECK(r.value == 0.0);
  CHECK(r.argmin == std::vector<double>{-1, 2});
  CHECK_THROWS_AS(BoxLinearMin(std::vector<double>{1}, std::vector<double>{0, 0}, std::vector<double>{1, 1}),
                  Error);
}

TEST_CASE("box_linear_min matches vertex enumeration") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 1 + trial % 10;
    const auto c = Uniform(rng, dim, -1, 1);
    const auto lo = Uniform(rng, dim, -2, 0);
    const auto hi = Uniform(rng, dim, 0, 2);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t mask = 0; mask < (std::size_t{1} << dim); ++mask) {
      double v = 0;
      for (std::size_t k = 0; k < dim; ++k) v += c[k] * ((mask >> k) & 1 ? hi[k] : lo[k]);
      best = std::min(best, v);
    }
    CHECK(std::fabs(BoxLinearMin(c, lo, hi).value - best) <= 1e-12);
  }
}

TEST_CASE("one_dim_min examples") {
  ScalarMin s = OneDimMin(ActivationSpec::Identity(), 2.0, 1.0, -1.0, 3.0);
  CHECK(s.value == -1.0);
  CHECK(s.argmin == -1.0);
  s = OneDimMin(ActivationSpec::Power(2), 0.0, 1.0, -1.0, 2.0);
  CHECK(s.value == -4.0);
  CHECK(s.argmin == 2.0);
  // convex case: interior stationary point of z^2 - 2z at z = 1
  s = OneDimMin(ActivationSpec::Power(2), -2.0, -1.0, -3.0, 3.0);
  CHECK(s.argmin == doctest::Approx(1.0));
  CHECK(s.value == doctest::Approx(-1.0));
  s = OneDimMin(ActivationSpec::Tanh(), 1.0, 1.0, 0.5, 0.5);
  CHECK(s.argmin == 0.5);
  // lambda = 0 reduces to the linear problem
  s = OneDimMin(ActivationSpec::ExpNeg(1.0), -1.0, 0.0, 0.0, 2.0);
  CHECK(s.argmin == 2.0);
}

TEST_CASE("one_dim_min agrees with a dense grid and never exceeds its endpoints") {
  std::mt19937_64 rng(43);
  const ActivationSpec acts[] = {ActivationSpec::Identity(), ActivationSpec::Power(2), ActivationSpec::Power(3),
                                 ActivationSpec::Power(4),   ActivationSpec::Tanh(),   ActivationSpec::ExpNeg(0.7)};
  for (const ActivationSpec& act : acts) {
    for (int trial = 0; trial < 500; ++trial) {
      const double mu = UniformScalar(rng, -2, 2);
      const double lambda = UniformScalar(rng, -2, 2);
      const double lo = UniformScalar(rng, -2, 1);
      const double hi = lo + UniformScalar(rng, 0, 2);
      const ScalarMin s = OneDimMin(act, mu, lambda, lo, hi);
      const GridOracle o = GridMinimum(act, mu, lambda, lo, hi, 2000);
      CHECK(s.value <= o.min + 1e-6);
      CHECK(s.value >= o.min - o.max_step - 1e-9);
      CHECK(s.argmin >= lo);
      CHECK(s.argmin <= hi);
      CHECK(s.value <= mu * lo - lambda * act.Apply(lo));
      CHECK(s.value <= mu * hi - lambda * act.Apply(hi));
    }
  }
}

TEST_CASE("zero duals leave only the pinned readout term") {
  std::mt19937_64 rng(47);
  const SvmModel m = RandomModel(KernelType::kLinear, 4, 3, rng);
  const LayeredNetwork net = CompileNetwork(m);
  const Region region = Region::Ball(Uniform(rng, 3, -1, 1), 0.2);
  const LayerBounds b = PropagateBounds(net, region);
  for (int y : {1, -1}) {
    const InnerSolution sol = DualValue(net, y, b, DualVars::Zeros(net));
    double expect = y * m.bias();
    for (std::size_t k = 0; k < m.n_support(); ++k) {
      const double c = y * m.coef()[k];
      expect += c > 0 ? c * b.x_lo[1][k] : c * b.x_hi[1][k];
    }
    CHECK(sol.total == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("point regions give exactly y_hat f(x) for any duals") {
  std::mt19937_64 rng(53);
  for (KernelType type : svmver::testing::kAllKernels) {
    const SvmModel m = RandomModel(type, 5, 3, rng);
    const LayeredNetwork net = CompileNetwork(m);
    const auto x = Uniform(rng, 3, -1, 1);
    const LayerBounds b = PropagateBounds(net, Region::Ball(x, 0.0));
    const int y = m.Classify(x);
    CHECK(DualValue(net, y, b, DualVars::Zeros(net)).total == doctest::Approx(y * m.DecisionValue(x)).epsilon(1e-12));
    const DualVars d = RandomDuals(net, rng, 1.0);
    CHECK(std::fabs(DualValue(net, y, b, d).total - y * m.DecisionValue(x)) <= 1e-9);
  }
}

TEST_CASE("closed-form linear certificate") {
  const SvmModel m(KernelSpec::Linear(), 2, {1, 0}, {1}, 0.0);
  const LayeredNetwork net = CompileNetwork(m);
  const LayerBounds b = PropagateBounds(net, Region::Ball({1, 0}, 0.5));
  DualVars d = DualVars::Zeros(net);
  d.lambda(0)[0] = -1.0;
  d.mu(0)[0] = -1.0;
  const InnerSolution sol = DualValue(net, 1, b, d);
  CHECK(sol.total == doctest::Approx(0.5).epsilon(1e-15));
  double parts = 0;
  for (double v : sol.f_linear) parts += v;
  for (const auto& layer : sol.f_act) {
    for (double v : layer) parts += v;
  }
  CHECK(std::fabs(parts - sol.total) <= 1e-10);
}

TEST_CASE("subgradients are the constraint residuals") {
  std::mt19937_64 rng(59);
  const SvmModel m = RandomModel(KernelType::kRbf, 3, 2, rng);
  const LayeredNetwork net = CompileNetwork(m);
  const auto x = Uniform(rng, 2, -1, 1);
  const LayerBounds b = PropagateBounds(net, Region::Ball(x, 0.0));
  const DualVars d = DualVars::Zeros(net);
  InnerSolution sol = DualValue(net, 1, b, d);
  DualVars g = Subgradients(net, sol, d);
  for (double v : g.values()) CHECK(std::fabs(v) <= 1e-12);

  sol.z[0][1] += 0.3;
  g = Subgradients(net, sol, d);
  CHECK(g.mu(0)[1] == doctest::Approx(0.3));
  CHECK(g.mu(0)[0] == doctest::Approx(0.0));
}

TEST_CASE("subgradients match finite differences of the dual") {
  std::mt19937_64 rng(61);
  for (KernelType type : svmver::testing::kAllKernels) {
    const SvmModel m = RandomModel(type, 3, 2, rng);
    const LayeredNetwork net = CompileNetwork(m);
    const Region region = Region::Ball(Uniform(rng, 2, -1, 1), 0.3);
    const LayerBounds b = PropagateBounds(net, region);
    for (int trial = 0; trial < 20; ++trial) {
      const DualVars d = RandomDuals(net, rng, 0.5);
      const InnerSolution sol = DualValue(net, 1, b, d);
      const DualVars g = Subgradients(net, sol, d);
      DualVars e = RandomDuals(net, rng, 1.0);
      double ge = 0;
      for (std::size_t i = 0; i < e.size(); ++i) ge += g.values()[i] * e.values()[i];
      for (double eps : {1e-7, 1e-3, 1e-1}) {
        DualVars moved = d;
        for (std::size_t i = 0; i < e.size(); ++i) moved.values()[i] += eps * e.values()[i];
        const double fd = (DualValue(net, 1, b, moved).total - sol.total) / eps;
        // supergradient inequality of a concave function
        CHECK(fd <= ge + 1e-6);
        if (eps == 1e-7) CHECK(fd >= ge - 1e-4);
      }
    }
  }
}

TEST_CASE("dual value is a lower bound, concave, and reproducible") {
  std::mt19937_64 rng(67);
  for (KernelType type : svmver::testing::kAllKernels) {
    const SvmModel m = RandomModel(type, 4, 3, rng);
    const LayeredNetwork net = CompileNetwork(m);
    const Region region = Region::Ball(Uniform(rng, 3, -1, 1), 0.25);
    const LayerBounds b = PropagateBounds(net, region);
    for (int trial = 0; trial < 10; ++trial) {
      const int y = trial % 2 ? 1 : -1;
      const DualVars a = RandomDuals(net, rng, 1.0);
      const DualVars c = RandomDuals(net, rng, 1.0);
      const double la = DualValue(net, y, b, a).total;
      const double lc = DualValue(net, y, b, c).total;
      CHECK(DualValue(net, y, b, a).total == la);
      for (int s = 0; s < 100; ++s) {
        CHECK(la <= y * m.DecisionValue(SampleInRegion(rng, region)));
      }
      const double t = UniformScalar(rng, 0, 1);
      DualVars mix = a;
      for (std::size_t i = 0; i < mix.size(); ++i) mix.values()[i] = t * a.values()[i] + (1 - t) * c.values()[i];
      CHECK(DualValue(net, y, b, mix).total >= t * la + (1 - t) * lc - 1e-9);
    }
  }
}

TEST_CASE("dual_value validates shapes") {
  std::mt19937_64 rng(71);
  const LayeredNetwork lin = CompileNetwork(RandomModel(KernelType::kLinear, 2, 2, rng));
  const LayeredNetwork rbf = CompileNetwork(RandomModel(KernelType::kRbf, 2, 2, rng));
  const LayerBounds b = PropagateBounds(lin, Region::Ball({0, 0}, 0.1));
  CHECK_THROWS_AS(DualValue(lin, 1, b, DualVars::Zeros(rbf)), Error);
}
