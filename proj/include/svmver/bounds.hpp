#pragma once

#include <optional>
#include <span>
#include <vector>

#include "svmver/network.hpp"

namespace svmver {

struct Interval {
  double lo;
  double hi;
};

// The l-infinity ball of radius delta around center, optionally intersected
// with a per-feature clamp box.
struct Region {
  std::vector<double> center;
  double delta = 0.0;
  std::optional<std::vector<double>> clamp_lo;
  std::optional<std::vector<double>> clamp_hi;

  static Region Ball(std::vector<double> center, double delta);

  void Validate() const;
  std::vector<double> Lower() const;
  std::vector<double> Upper() const;
  bool Contains(std::span<const double> x, double slack = 0.0) const;
};

// Boxes for every network state; entries indexed like NetworkStates.
struct LayerBounds {
  std::vector<std::vector<double>> x_lo, x_hi;  // l = 0..L
  std::vector<std::vector<double>> z_lo, z_hi;  // l = 0..L
};

// z = W^T x + b over the box [x_lo, x_hi], split by the sign of W.
void IntervalAffine(const LinearMap& map, std::span<const double> bias, std::span<const double> x_lo,
                    std::span<const double> x_hi, std::span<double> z_lo, std::span<double> z_hi);

// Increasing activations map endpoints; exp_neg swaps them; even powers
// bottom out at 0 on an interval straddling the origin.
Interval ActivationInterval(const ActivationSpec& act, double z_lo, double z_hi);

LayerBounds PropagateBounds(const LayeredNetwork& net, const Region& region);

}  // namespace svmver
