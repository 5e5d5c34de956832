#include "svmver/verifier.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "svmver/error.hpp"

namespace svmver {

Region VerificationInstance::ToRegion() const {
  Region r = Region::Ball(x, delta);
  r.clamp_lo = clamp_lo;
  r.clamp_hi = clamp_hi;
  return r;
}

int VerificationInstance::ResolveLabel(const SvmModel& model) const {
  if (mode == LabelMode::kPredicted) return model.Classify(x);
  if (given_label != 1 && given_label != -1) Fail(ErrorCode::kInvalidArgument, "given label must be +1 or -1");
  return given_label;
}

const char* VerdictName(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::kRobust: return "robust";
    case VerdictKind::kFalsified: return "falsified";
    case VerdictKind::kUnknown: return "unknown";
  }
  return "unknown";
}

Verdict Verify(const SvmModel& model, const VerificationInstance& instance,
               const OptimizerConfig& config) {
  return Verify(model, CompileNetwork(model), instance, config);
}

Verdict Verify(const SvmModel& model, const LayeredNetwork& net, const VerificationInstance& instance,
               const OptimizerConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  RequireWidth(instance.x.size(), model.n_features(), "verification instance");
  RequireWidth(net.input_width(), model.n_features(), "compiled network");
  const Region region = instance.ToRegion();
  region.Validate();

  Verdict v;
  v.y_hat = instance.ResolveLabel(model);
  const LayerBounds bounds = PropagateBounds(net, region);
  DualResult dr = MaximizeDual(net, v.y_hat, region, bounds, config);

  v.lower = dr.best_lower;
  v.reason = dr.reason;
  v.iterations = dr.iterations;
  // Re-evaluate the witness on the kernel side.
  v.upper = v.y_hat * model.DecisionValue(dr.witness);
  v.witness = std::move(dr.witness);
  if (v.lower > 0.0) {
    v.kind = VerdictKind::kRobust;
  } else if (v.upper <= 0.0 && region.Contains(v.witness)) {
    v.kind = VerdictKind::kFalsified;
  } else {
    v.kind = VerdictKind::kUnknown;
  }
  v.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return v;
}

GridMin BruteForceMin(const SvmModel& model, int y_hat, const Region& region, int subdivisions) {
  region.Validate();
  const std::size_t n = model.n_features();
  RequireWidth(region.center.size(), n, "grid region");
  if (n > 4) Fail(ErrorCode::kInvalidArgument, "brute_force_min supports at most 4 features");
  if (subdivisions < 1) Fail(ErrorCode::kInvalidArgument, "subdivisions must be >= 1");

  const auto lo = region.Lower();
  const auto hi = region.Upper();
  GridMin best{y_hat * model.DecisionValue(region.center), region.center};

  std::vector<int> idx(n, 0);
  std::vector<double> p(n);
  for (;;) {
    for (std::size_t k = 0; k < n; ++k) {
      p[k] = idx[k] == subdivisions ? hi[k] : lo[k] + (hi[k] - lo[k]) * idx[k] / subdivisions;
    }
    const double v = y_hat * model.DecisionValue(p);
    if (v < best.value) best = {v, p};
    std::size_t k = 0;
    while (k < n && ++idx[k] > subdivisions) idx[k++] = 0;
    if (k == n) break;
  }
  return best;
}

std::optional<std::vector<double>> RandomAttack(const SvmModel& model, int y_hat,
                                                const Region& region, std::size_t samples,
                                                std::uint64_t seed) {
  region.Validate();
  const std::size_t n = model.n_features();
  RequireWidth(region.center.size(), n, "attack region");
  if (samples < 1) Fail(ErrorCode::kInvalidArgument, "random_attack needs samples >= 1");
  const auto lo = region.Lower();
  const auto hi = region.Upper();
  auto hit = [&](const std::vector<double>& p) { return y_hat * model.DecisionValue(p) <= 0.0; };

  std::vector<double> p = region.center;
  for (std::size_t k = 0; k < n; ++k) {
    for (double end : {lo[k], hi[k]}) {
      p[k] = end;
      if (hit(p)) return p;
    }
    p[k] = region.center[k];
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t s = 0; s < samples; ++s) {
    const bool vertex = s % 2 == 0;
    for (std::size_t k = 0; k < n; ++k) {
      p[k] = vertex ? (coin(rng) ? hi[k] : lo[k]) : lo[k] + (hi[k] - lo[k]) * unit(rng);
    }
    if (hit(p)) return p;
  }
  return std::nullopt;
}

}  // namespace svmver
