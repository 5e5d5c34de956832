#pragma once

#include <span>
#include <vector>

#include "svmver/bounds.hpp"
#include "svmver/network.hpp"

namespace svmver {

/// Lagrange multipliers of the layered network, stored flat so the optimizer
/// can treat them as one vector. mu(l) relaxes z^l = W_l^T x^l + b_l and has
/// width(z^l); lambda(l) relaxes x^{l+1} = h_l(z^l) and has width(x^{l+1}),
/// for l = 0..L-1. The output-layer multiplier is pinned to -y_hat and is not
/// stored.
class DualVars {
 public:
  static DualVars Zeros(const LayeredNetwork& net);

  std::size_t depth() const { return mu_offset_.size(); }
  std::size_t size() const { return values_.size(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  std::span<double> mu(std::size_t l) { return {values_.data() + mu_offset_[l], width_[l]}; }
  std::span<const double> mu(std::size_t l) const { return {values_.data() + mu_offset_[l], width_[l]}; }
  std::span<double> lambda(std::size_t l) { return {values_.data() + lambda_offset_[l], width_[l]}; }
  std::span<const double> lambda(std::size_t l) const {
    return {values_.data() + lambda_offset_[l], width_[l]};
  }

  bool SameShape(const DualVars& other) const { return width_ == other.width_; }

 private:
  std::vector<double> values_;
  std::vector<std::size_t> mu_offset_, lambda_offset_, width_;
};

struct BoxMin {
  double value;
  std::vector<double> argmin;
};

struct ScalarMin {
  double value;
  double argmin;
};

/// Minimum of <c, x> over lo <= x <= hi. Coordinates with c_k = 0 sit at lo_k.
BoxMin BoxLinearMin(std::span<const double> c, std::span<const double> lo, std::span<const double> hi);
// Writes the argmin into `argmin` and returns the value.
double BoxLinearMin(std::span<const double> c, std::span<const double> lo, std::span<const double> hi,
                    std::span<double> argmin);

/// Exact minimum of g(z) = mu*z - lambda*h(z) on [z_lo, z_hi], taken over the
/// endpoints and the real stationary points of g inside the interval.
ScalarMin OneDimMin(const ActivationSpec& act, double mu, double lambda, double z_lo, double z_hi);

/// Inner minimizers and the decomposed value of L(mu, lambda).
struct InnerSolution {
  std::vector<std::vector<double>> x;      // argmin x^l, l = 0..L
  std::vector<std::vector<double>> z;      // argmin z^l, l = 0..L-1
  std::vector<double> f_linear;            // f_0 (region term), f_1 .. f_L
  std::vector<std::vector<double>> f_act;  // per-coordinate activation terms, l = 0..L-1
  double total = 0.0;

  std::span<const double> candidate() const { return x.front(); }

  std::vector<double> scratch;
};

InnerSolution DualValue(const LayeredNetwork& net, int y_hat, const LayerBounds& bounds,
                        const DualVars& duals);
// Same, reusing the storage of `sol`.
void DualValue(const LayeredNetwork& net, int y_hat, const LayerBounds& bounds, const DualVars& duals,
               InnerSolution& sol);

/// Constraint residuals at the inner argmins; these are supergradients of the
/// concave dual. Returned in the same layout as the multipliers.
DualVars Subgradients(const LayeredNetwork& net, const InnerSolution& sol, const DualVars& duals);
void Subgradients(const LayeredNetwork& net, const InnerSolution& sol, DualVars& out);

}  // namespace svmver
