#include "svmver/dual.hpp"

#include <cmath>

#include "svmver/error.hpp"

namespace svmver {
namespace {

double Dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

// Real roots of z^p = r, p >= 1.
void AppendRoots(double r, int p, double out[2], int& count) {
  if (p == 1) {
    out[count++] = r;
  } else if (p % 2 == 1) {
    out[count++] = std::copysign(std::pow(std::fabs(r), 1.0 / p), r);
  } else if (r >= 0.0) {
    const double root = std::pow(r, 1.0 / p);
    out[count++] = root;
    out[count++] = -root;
  }
}

}  // namespace

DualVars DualVars::Zeros(const LayeredNetwork& net) {
  DualVars d;
  std::size_t offset = 0;
  for (std::size_t l = 0; l < net.depth(); ++l) {
    const std::size_t w = net.z_width(l);
    d.width_.push_back(w);
    d.mu_offset_.push_back(offset);
    offset += w;
    d.lambda_offset_.push_back(offset);
    offset += w;
  }
  d.values_.assign(offset, 0.0);
  return d;
}

double BoxLinearMin(std::span<const double> c, std::span<const double> lo, std::span<const double> hi,
                    std::span<double> argmin) {
  RequireWidth(lo.size(), c.size(), "box_linear_min lower");
  RequireWidth(hi.size(), c.size(), "box_linear_min upper");
  RequireWidth(argmin.size(), c.size(), "box_linear_min argmin");
  double value = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double xk = c[k] < 0.0 ? hi[k] : lo[k];
    argmin[k] = xk;
    if (c[k] != 0.0) value += c[k] * xk;
  }
  return value;
}

BoxMin BoxLinearMin(std::span<const double> c, std::span<const double> lo, std::span<const double> hi) {
  BoxMin r{0.0, std::vector<double>(c.size())};
  r.value = BoxLinearMin(c, lo, hi, r.argmin);
  return r;
}

namespace {

// Candidates for each activation are the endpoints and the stationary points
// of g(z) = mu z - lambda h(z) inside the interval. `Act` supplies h and the
// stationary points so the per-coordinate loop has no dispatch.
template <typename Act>
inline ScalarMin MinimizeScalar(const Act& act, double mu, double lambda, double z_lo, double z_hi) {
  auto g = [&](double z) { return mu * z - lambda * act.h(z); };
  ScalarMin best{g(z_lo), z_lo};
  if (!(z_hi > z_lo)) return best;
  const double at_hi = g(z_hi);
  if (at_hi < best.value) best = {at_hi, z_hi};
  if (lambda == 0.0) return best;
  double cand[2];
  const int count = act.Stationary(mu, lambda, cand);
  for (int i = 0; i < count; ++i) {
    const double z = cand[i];
    if (!(z > z_lo && z < z_hi)) continue;
    const double v = g(z);
    if (v < best.value) best = {v, z};
  }
  return best;
}

struct IdentityAct {
  double h(double z) const { return z; }
  int Stationary(double, double, double*) const { return 0; }
};

struct PowerAct {
  int degree;
  double h(double z) const {
    double r = 1.0;
    for (int k = 0; k < degree; ++k) r *= z;
    return r;
  }
  // g' = mu - d lambda z^(d-1)
  int Stationary(double mu, double lambda, double* out) const {
    int count = 0;
    if (degree >= 2) AppendRoots(mu / (degree * lambda), degree - 1, out, count);
    return count;
  }
};

struct SquareAct {
  double h(double z) const { return z * z; }
  int Stationary(double mu, double lambda, double* out) const {
    out[0] = mu / (2.0 * lambda);
    return 1;
  }
};

struct TanhAct {
  double h(double z) const { return std::tanh(z); }
  // g' = mu - lambda (1 - tanh^2 z)
  int Stationary(double mu, double lambda, double* out) const {
    const double s = 1.0 - mu / lambda;
    if (!(s >= 0.0 && s < 1.0)) return 0;
    const double z = std::atanh(std::sqrt(s));
    out[0] = z;
    out[1] = -z;
    return 2;
  }
};

struct ExpNegAct {
  double gamma;
  double h(double z) const { return std::exp(-gamma * z); }
  // g' = mu + lambda gamma exp(-gamma z)
  int Stationary(double mu, double lambda, double* out) const {
    const double q = -mu / (lambda * gamma);
    if (!(q > 0.0)) return 0;
    out[0] = -std::log(q) / gamma;
    return 1;
  }
};

template <typename F>
decltype(auto) WithActivation(const ActivationSpec& act, F&& f) {
  switch (act.kind) {
    case ActivationSpec::Kind::kPower:
      if (act.degree == 2) return f(SquareAct{});
      return f(PowerAct{act.degree});
    case ActivationSpec::Kind::kTanh:
      return f(TanhAct{});
    case ActivationSpec::Kind::kExpNeg:
      return f(ExpNegAct{act.gamma});
    case ActivationSpec::Kind::kIdentity:
      break;
  }
  return f(IdentityAct{});
}

void OneDimMinLayer(const ActivationSpec& act, std::span<const double> mu, std::span<const double> lambda,
                    std::span<const double> z_lo, std::span<const double> z_hi, std::span<double> argmin,
                    std::span<double> value) {
  WithActivation(act, [&](const auto& a) {
    for (std::size_t k = 0; k < mu.size(); ++k) {
      const ScalarMin s = MinimizeScalar(a, mu[k], lambda[k], z_lo[k], z_hi[k]);
      argmin[k] = s.argmin;
      value[k] = s.value;
    }
  });
}

}  // namespace

ScalarMin OneDimMin(const ActivationSpec& act, double mu, double lambda, double z_lo, double z_hi) {
  return WithActivation(act, [&](const auto& a) { return MinimizeScalar(a, mu, lambda, z_lo, z_hi); });
}

InnerSolution DualValue(const LayeredNetwork& net, int y_hat, const LayerBounds& bounds,
                        const DualVars& duals) {
  InnerSolution sol;
  DualValue(net, y_hat, bounds, duals, sol);
  return sol;
}

void DualValue(const LayeredNetwork& net, int y_hat, const LayerBounds& bounds, const DualVars& duals,
               InnerSolution& sol) {
  const std::size_t depth = net.depth();
  if (depth == 0) Fail(ErrorCode::kDimension, "network has no hidden layer");
  if (duals.depth() != depth) Fail(ErrorCode::kDimension, "dual variables do not match network depth");
  if (bounds.x_lo.size() != depth + 1 || bounds.z_lo.size() != depth + 1) {
    Fail(ErrorCode::kDimension, "layer bounds do not match network depth");
  }
  for (std::size_t l = 0; l < depth; ++l) {
    RequireWidth(duals.mu(l).size(), net.z_width(l), "mu");
    RequireWidth(bounds.z_lo[l].size(), net.z_width(l), "z bounds");
  }

  sol.x.resize(depth + 1);
  sol.z.resize(depth);
  sol.f_linear.resize(depth + 1);
  sol.f_act.resize(depth);
  std::vector<double>& c = sol.scratch;

  const double top_mu = -static_cast<double>(y_hat);

  // Region term: min over x^0 of <-W_0 mu_0, x> - <b_0, mu_0>.
  {
    const Layer& layer = net.layer(0);
    c.resize(net.x_width(0));
    layer.map.Adjoint(duals.mu(0), c);
    for (double& ck : c) ck = -ck;
    sol.x[0].resize(c.size());
    sol.f_linear[0] = BoxLinearMin(c, bounds.x_lo[0], bounds.x_hi[0], sol.x[0]) - Dot(layer.bias, duals.mu(0));
  }

  // Hidden and readout terms: min over x^l of <lambda_{l-1} - W_l mu_l, x> - <b_l, mu_l>,
  // with the readout multiplier pinned to -y_hat.
  for (std::size_t l = 1; l <= depth; ++l) {
    const Layer& layer = net.layer(l);
    c.resize(net.x_width(l));
    double mb;
    if (l == depth) {
      layer.map.Adjoint(std::span<const double>(&top_mu, 1), c);
      mb = top_mu * layer.bias[0];
    } else {
      layer.map.Adjoint(duals.mu(l), c);
      mb = Dot(layer.bias, duals.mu(l));
    }
    auto lam = duals.lambda(l - 1);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = lam[k] - c[k];
    sol.x[l].resize(c.size());
    sol.f_linear[l] = BoxLinearMin(c, bounds.x_lo[l], bounds.x_hi[l], sol.x[l]) - mb;
  }

  // Activation terms, one scalar problem per coordinate.
  for (std::size_t l = 0; l < depth; ++l) {
    const std::size_t w = net.z_width(l);
    sol.z[l].resize(w);
    sol.f_act[l].resize(w);
    OneDimMinLayer(net.activation(l), duals.mu(l), duals.lambda(l), bounds.z_lo[l], bounds.z_hi[l],
                   sol.z[l], sol.f_act[l]);
  }

  double total = 0.0;
  for (double v : sol.f_linear) total += v;
  for (const auto& layer_terms : sol.f_act) {
    for (double v : layer_terms) total += v;
  }
  sol.total = total;
}

DualVars Subgradients(const LayeredNetwork& net, const InnerSolution& sol, const DualVars& duals) {
  DualVars g = DualVars::Zeros(net);
  if (!g.SameShape(duals)) Fail(ErrorCode::kDimension, "dual variables do not match network");
  Subgradients(net, sol, g);
  return g;
}

void Subgradients(const LayeredNetwork& net, const InnerSolution& sol, DualVars& out) {
  if (out.depth() != net.depth()) Fail(ErrorCode::kDimension, "dual variables do not match network");
  for (std::size_t l = 0; l < net.depth(); ++l) {
    const Layer& layer = net.layer(l);
    const ActivationSpec& act = net.activation(l);
    auto gm = out.mu(l);
    auto gl = out.lambda(l);
    layer.map.Forward(sol.x[l], gm);
    for (std::size_t k = 0; k < gm.size(); ++k) {
      gm[k] = sol.z[l][k] - (gm[k] + layer.bias[k]);
      gl[k] = sol.x[l + 1][k] - act.Apply(sol.z[l][k]);
    }
  }
}

}  // namespace svmver
