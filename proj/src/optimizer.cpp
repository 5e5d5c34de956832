#include "svmver/optimizer.hpp"

#include <cmath>
#include <limits>

#include "svmver/error.hpp"

namespace svmver {

void OptimizerConfig::Validate() const {
  auto bad = [](const char* what) { Fail(ErrorCode::kInvalidArgument, what); };
  if (!(lr_init >= 0.0) || !std::isfinite(lr_init)) bad("lr_init must be finite and >= 0");
  if (!(lr_final >= 0.0) || !(lr_final <= lr_init)) bad("lr_final must satisfy 0 <= lr_final <= lr_init");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) bad("beta1 must lie in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) bad("beta2 must lie in [0, 1)");
  if (!(epsilon > 0.0)) bad("epsilon must be > 0");
  if (!(theta > 0.0)) bad("theta must be > 0");
  if (max_iters < 1) bad("max_iters must be >= 1");
}

double LrSchedule(const OptimizerConfig& config, std::uint64_t k) {
  if (config.max_iters <= 1) return config.lr_init;
  const double t = static_cast<double>(k) / static_cast<double>(config.max_iters - 1);
  return config.lr_init + (config.lr_final - config.lr_init) * t;
}

double AdamState::BiasCorrectedFirst(std::size_t i, double beta1) const {
  if (step_ == 0) return 0.0;
  return m_[i] / (1.0 - std::pow(beta1, static_cast<double>(step_)));
}

void AdamState::Step(std::span<double> params, std::span<const double> grad, double lr,
                     const OptimizerConfig& config) {
  RequireWidth(params.size(), m_.size(), "adam params");
  RequireWidth(grad.size(), m_.size(), "adam gradient");
  const double t = static_cast<double>(step_ + 1);
  const double c1 = 1.0 - std::pow(config.beta1, t);
  const double c2 = 1.0 - std::pow(config.beta2, t);
  const double b1 = config.beta1, b2 = config.beta2;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grad[i];
    m_[i] = b1 * m_[i] + (1.0 - b1) * g;
    v_[i] = b2 * v_[i] + (1.0 - b2) * g * g;
    const double m_hat = m_[i] / c1;
    const double v_hat = v_[i] / c2;
    params[i] += lr * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
  ++step_;
}

const char* TerminationName(Termination t) {
  switch (t) {
    case Termination::kPositiveBound: return "positive-bound";
    case Termination::kGapClosed: return "gap-closed";
    case Termination::kZeroSubgradient: return "zero-subgradient";
    case Termination::kFalsified: return "falsified";
    case Termination::kBudgetExhausted: return "budget-exhausted";
  }
  return "unknown";
}

DualResult MaximizeDual(const LayeredNetwork& net, int y_hat, const Region& region,
                        const LayerBounds& bounds, const OptimizerConfig& config,
                        const std::function<void(const IterationInfo&)>& observer) {
  config.Validate();
  RequireWidth(region.center.size(), net.input_width(), "region");
  const double y = static_cast<double>(y_hat);

  DualResult r{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 0,
               Termination::kBudgetExhausted, region.center, DualVars::Zeros(net)};
  AdamState adam(r.duals.size());
  InnerSolution sol;
  DualVars grad = DualVars::Zeros(net);
  const bool frozen = config.lr_init == 0.0 && config.lr_final == 0.0;

  for (std::uint64_t k = 0; k < config.max_iters; ++k) {
    DualValue(net, y_hat, bounds, r.duals, sol);
    r.iterations = k + 1;
    const double lower = sol.total;
    const double upper = y * net.Evaluate(sol.candidate());
    if (lower > r.best_lower) r.best_lower = lower;
    if (upper < r.best_upper) {
      r.best_upper = upper;
      r.witness.assign(sol.x.front().begin(), sol.x.front().end());
    }
    if (observer) observer({k, lower, upper, r.best_lower, r.best_upper});

    if (config.stop_on_verdict && lower > 0.0) {
      r.reason = Termination::kPositiveBound;
      return r;
    }
    if (config.stop_on_verdict && r.best_upper <= 0.0) {
      r.reason = Termination::kFalsified;
      return r;
    }
    if (std::fabs(lower - upper) < config.theta) {
      r.reason = Termination::kGapClosed;
      return r;
    }

    Subgradients(net, sol, grad);
    bool all_zero = true;
    for (double g : grad.values()) {
      if (g != 0.0) {
        all_zero = false;
        break;
      }
    }
    if (all_zero) {
      r.reason = Termination::kZeroSubgradient;
      return r;
    }
    if (frozen) return r;
    adam.Step(r.duals.values(), grad.values(), LrSchedule(config, k), config);
  }
  return r;
}

}  // namespace svmver
