#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "svmver/bounds.hpp"
#include "svmver/network.hpp"
#include "svmver/optimizer.hpp"
#include "svmver/svm_model.hpp"

namespace svmver {

enum class LabelMode { kPredicted, kGiven };

struct VerificationInstance {
  std::vector<double> x;
  double delta = 0.0;
  LabelMode mode = LabelMode::kPredicted;
  int given_label = 1;  // used in kGiven mode
  std::optional<std::vector<double>> clamp_lo;
  std::optional<std::vector<double>> clamp_hi;

  Region ToRegion() const;
  int ResolveLabel(const SvmModel& model) const;
};

enum class VerdictKind { kRobust, kFalsified, kUnknown };

const char* VerdictName(VerdictKind kind);

struct Verdict {
  VerdictKind kind = VerdictKind::kUnknown;
  int y_hat = 1;
  double lower = 0.0;          // certified lower bound on y_hat f over the region
  double upper = 0.0;          // y_hat f at the best point found
  std::vector<double> witness;
  Termination reason = Termination::kBudgetExhausted;
  std::uint64_t iterations = 0;
  double millis = 0.0;
};

// compile -> propagate_bounds -> maximize_dual. Falsified verdicts carry a
// witness whose value was recomputed with the kernel-side decision function.
Verdict Verify(const SvmModel& model, const VerificationInstance& instance,
               const OptimizerConfig& config);
// Same, reusing a network compiled from `model`.
Verdict Verify(const SvmModel& model, const LayeredNetwork& net, const VerificationInstance& instance,
               const OptimizerConfig& config);

struct GridMin {
  double value;
  std::vector<double> argmin;
};

// Minimum of y_hat f over a uniform grid with `subdivisions` cells per
// dimension (both corners included) plus the center. Requires n <= 4.
GridMin BruteForceMin(const SvmModel& model, int y_hat, const Region& region, int subdivisions);

// Candidates: the 2n axis extremes center +- delta e_k, then `samples` seeded
// draws (alternating random vertices and uniform interior points). Returns
// the first candidate with y_hat f <= 0.
std::optional<std::vector<double>> RandomAttack(const SvmModel& model, int y_hat,
                                                const Region& region, std::size_t samples,
                                                std::uint64_t seed);

}  // namespace svmver
