#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "svmver/bounds.hpp"
#include "svmver/dual.hpp"
#include "svmver/network.hpp"

namespace svmver {

struct OptimizerConfig {
  double lr_init = 1e-3;   // step size at k = 0
  double lr_final = 1e-7;  // step size at k = K-1
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double theta = 1e-3;     // gap threshold |L - y_hat f(x0)|
  std::uint64_t max_iters = 2000;
  // Stop as soon as the sign is decided (L > 0, or a point with y_hat f <= 0).
  bool stop_on_verdict = true;

  void Validate() const;
};

// Linearly interpolated step size for iteration k of max_iters.
double LrSchedule(const OptimizerConfig& config, std::uint64_t k);

/// Adam moment accumulators, one pair per dual coordinate.
class AdamState {
 public:
  explicit AdamState(std::size_t size) : m_(size, 0.0), v_(size, 0.0) {}

  std::uint64_t step() const { return step_; }
  std::span<const double> first_moment() const { return m_; }
  std::span<const double> second_moment() const { return v_; }
  // m / (1 - beta1^k) after k updates.
  double BiasCorrectedFirst(std::size_t i, double beta1) const;

  // Moves params along +m_hat / (sqrt(v_hat) + eps), i.e. ascent.
  void Step(std::span<double> params, std::span<const double> grad, double lr,
            const OptimizerConfig& config);

 private:
  std::vector<double> m_;
  std::vector<double> v_;
  std::uint64_t step_ = 0;
};

enum class Termination {
  kPositiveBound,
  kGapClosed,
  kZeroSubgradient,
  kFalsified,
  kBudgetExhausted,
};

const char* TerminationName(Termination t);

struct DualResult {
  double best_lower;
  double best_upper;
  std::uint64_t iterations;
  Termination reason;
  std::vector<double> witness;  // the point achieving best_upper
  DualVars duals;               // final multipliers
};

/// Subgradient ascent on the Lagrangian dual with Adam moments, starting from
/// zero multipliers. Every inner argmin x^0 is a point of the region, so the
/// primal value at it is tracked as an upper bound.
struct IterationInfo {
  std::uint64_t k;
  double lower;       // L at this iterate
  double upper;       // y_hat f at this iterate's candidate
  double best_lower;
  double best_upper;
};

DualResult MaximizeDual(const LayeredNetwork& net, int y_hat, const Region& region,
                        const LayerBounds& bounds, const OptimizerConfig& config,
                        const std::function<void(const IterationInfo&)>& observer = {});

}  // namespace svmver
