#include "svmver/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "svmver/error.hpp"

namespace svmver {

Region Region::Ball(std::vector<double> center, double delta) {
  Region r;
  r.center = std::move(center);
  r.delta = delta;
  return r;
}

void Region::Validate() const {
  if (!(delta >= 0.0) || !std::isfinite(delta)) Fail(ErrorCode::kInvalidArgument, "delta must be finite and >= 0");
  if (clamp_lo.has_value() != clamp_hi.has_value()) {
    Fail(ErrorCode::kInvalidArgument, "clamp needs both lower and upper limits");
  }
  if (clamp_lo) {
    RequireWidth(clamp_lo->size(), center.size(), "clamp lower");
    RequireWidth(clamp_hi->size(), center.size(), "clamp upper");
    for (std::size_t k = 0; k < center.size(); ++k) {
      if ((*clamp_lo)[k] > (*clamp_hi)[k]) Fail(ErrorCode::kInvalidArgument, "clamp lo > hi");
      if (std::max(center[k] - delta, (*clamp_lo)[k]) > std::min(center[k] + delta, (*clamp_hi)[k])) {
        Fail(ErrorCode::kInvalidArgument, "clamped region is empty");
      }
    }
  }
}

std::vector<double> Region::Lower() const {
  std::vector<double> lo(center.size());
  for (std::size_t k = 0; k < lo.size(); ++k) {
    lo[k] = center[k] - delta;
    if (clamp_lo) lo[k] = std::max(lo[k], (*clamp_lo)[k]);
  }
  return lo;
}

std::vector<double> Region::Upper() const {
  std::vector<double> hi(center.size());
  for (std::size_t k = 0; k < hi.size(); ++k) {
    hi[k] = center[k] + delta;
    if (clamp_hi) hi[k] = std::min(hi[k], (*clamp_hi)[k]);
  }
  return hi;
}

bool Region::Contains(std::span<const double> x, double slack) const {
  if (x.size() != center.size()) return false;
  const auto lo = Lower();
  const auto hi = Upper();
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] < lo[k] - slack || x[k] > hi[k] + slack) return false;
  }
  return true;
}

void IntervalAffine(const LinearMap& map, std::span<const double> bias, std::span<const double> x_lo,
                    std::span<const double> x_hi, std::span<double> z_lo, std::span<double> z_hi) {
  RequireWidth(x_lo.size(), map.in_width(), "interval_affine lower");
  RequireWidth(x_hi.size(), map.in_width(), "interval_affine upper");
  RequireWidth(bias.size(), map.out_width(), "interval_affine bias");
  RequireWidth(z_lo.size(), map.out_width(), "interval_affine output");
  RequireWidth(z_hi.size(), map.out_width(), "interval_affine output");

  if (map.kind() == LinearMap::Kind::kStackedIdentity || map.kind() == LinearMap::Kind::kBlockSum) {
    // 0/1 maps: the negative part vanishes.
    map.Forward(x_lo, z_lo);
    map.Forward(x_hi, z_hi);
  } else {
    const std::size_t n_in = map.in_width();
    const double* w = map.weights().data();
    for (std::size_t j = 0; j < map.out_width(); ++j) {
      const double* col = w + j * n_in;
      double lo = 0.0, hi = 0.0;
      for (std::size_t i = 0; i < n_in; ++i) {
        const double wij = col[i];
        if (wij >= 0.0) {
          lo += wij * x_lo[i];
          hi += wij * x_hi[i];
        } else {
          lo += wij * x_hi[i];
          hi += wij * x_lo[i];
        }
      }
      z_lo[j] = lo;
      z_hi[j] = hi;
    }
  }
  for (std::size_t j = 0; j < bias.size(); ++j) {
    z_lo[j] += bias[j];
    z_hi[j] += bias[j];
  }
}

Interval ActivationInterval(const ActivationSpec& act, double z_lo, double z_hi) {
  const double a = act.Apply(z_lo);
  const double b = act.Apply(z_hi);
  switch (act.kind) {
    case ActivationSpec::Kind::kExpNeg:
      return {b, a};
    case ActivationSpec::Kind::kPower:
      if (act.degree % 2 == 0) {
        const double lo = (z_lo <= 0.0 && 0.0 <= z_hi) ? 0.0 : std::min(a, b);
        return {lo, std::max(a, b)};
      }
      return {a, b};
    case ActivationSpec::Kind::kIdentity:
    case ActivationSpec::Kind::kTanh:
      return {a, b};
  }
  return {a, b};
}

LayerBounds PropagateBounds(const LayeredNetwork& net, const Region& region) {
  region.Validate();
  RequireWidth(region.center.size(), net.input_width(), "region");
  const std::size_t depth = net.depth();
  LayerBounds b;
  b.x_lo.resize(depth + 1);
  b.x_hi.resize(depth + 1);
  b.z_lo.resize(depth + 1);
  b.z_hi.resize(depth + 1);
  b.x_lo[0] = region.Lower();
  b.x_hi[0] = region.Upper();
  for (std::size_t l = 0; l <= depth; ++l) {
    const Layer& layer = net.layer(l);
    const std::size_t w = layer.map.out_width();
    b.z_lo[l].resize(w);
    b.z_hi[l].resize(w);
    IntervalAffine(layer.map, layer.bias, b.x_lo[l], b.x_hi[l], b.z_lo[l], b.z_hi[l]);
    if (l == depth) break;
    b.x_lo[l + 1].resize(w);
    b.x_hi[l + 1].resize(w);
    const ActivationSpec& act = net.activation(l);
    for (std::size_t k = 0; k < w; ++k) {
      const Interval iv = ActivationInterval(act, b.z_lo[l][k], b.z_hi[l][k]);
      b.x_lo[l + 1][k] = iv.lo;
      b.x_hi[l + 1][k] = iv.hi;
    }
  }
  return b;
}

}  // namespace svmver
