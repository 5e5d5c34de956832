#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "svmver/svm_model.hpp"

namespace svmver {

// A linear map W (n_in x n_out) applied as z = W^T x. Only Dense carries a
// weight matrix; the RBF construction uses the two structured variants so the
// m*n-wide hidden layer never materializes its 0/1 matrices.
class LinearMap {
 public:
  enum class Kind { kDense, kStackedIdentity, kBlockSum, kReadout };

  // `columns` is n_out contiguous columns of length n_in (column j = W[:, j]).
  static LinearMap Dense(std::size_t n_in, std::size_t n_out, std::vector<double> columns);
  // R^dim -> R^(copies*dim), input tiled `copies` times.
  static LinearMap StackedIdentity(std::size_t copies, std::size_t dim);
  // R^(blocks*dim) -> R^blocks, sums each contiguous block of `dim`.
  static LinearMap BlockSum(std::size_t blocks, std::size_t dim);
  // R^n_in -> R, z = <weights, x>.
  static LinearMap Readout(std::vector<double> weights);

  Kind kind() const { return kind_; }
  std::size_t in_width() const { return in_; }
  std::size_t out_width() const { return out_; }
  const std::vector<double>& weights() const { return weights_; }
  // True when every materialized entry is >= 0.
  bool nonnegative() const;

  // W^T x
  void Forward(std::span<const double> x, std::span<double> out) const;
  std::vector<double> Forward(std::span<const double> x) const;
  // W v
  void Adjoint(std::span<const double> v, std::span<double> out) const;
  std::vector<double> Adjoint(std::span<const double> v) const;

  // W[i][j], i < in_width, j < out_width.
  double Entry(std::size_t i, std::size_t j) const;

 private:
  LinearMap(Kind kind, std::size_t in, std::size_t out, std::size_t blocks, std::size_t dim,
            std::vector<double> weights);

  Kind kind_;
  std::size_t in_;
  std::size_t out_;
  std::size_t blocks_;
  std::size_t dim_;
  std::vector<double> weights_;
};

const char* MapKindName(LinearMap::Kind kind);

struct ActivationSpec {
  enum class Kind { kIdentity, kPower, kTanh, kExpNeg };
  Kind kind = Kind::kIdentity;
  int degree = 1;      // kPower
  double gamma = 1.0;  // kExpNeg: h(z) = exp(-gamma z)

  static ActivationSpec Identity() { return {}; }
  static ActivationSpec Power(int degree) { return {Kind::kPower, degree, 1.0}; }
  static ActivationSpec Tanh() { return {Kind::kTanh, 1, 1.0}; }
  static ActivationSpec ExpNeg(double gamma) { return {Kind::kExpNeg, 1, gamma}; }

  double Apply(double z) const;
  void Validate() const;
};

const char* ActivationName(ActivationSpec::Kind kind);

struct Layer {
  LinearMap map;
  std::vector<double> bias;
};

// Per-layer states of one forward pass: z[l] = W_l^T x[l] + b_l for l = 0..L,
// x[l+1] = h_l(z[l]) for l = 0..L-1. x has L+1 entries, z has L+1 entries.
struct NetworkStates {
  std::vector<std::vector<double>> x;
  std::vector<std::vector<double>> z;
  double output() const { return z.back().front(); }
};

/// Feedforward network alternating affine layers with elementwise activations,
/// ending in a width-1 affine readout.
class LayeredNetwork {
 public:
  LayeredNetwork(std::vector<Layer> layers, std::vector<ActivationSpec> activations);

  // L: the number of activations; there are L+1 affine layers.
  std::size_t depth() const { return activations_.size(); }
  const Layer& layer(std::size_t l) const { return layers_[l]; }
  const ActivationSpec& activation(std::size_t l) const { return activations_[l]; }
  // Width of x^l, l = 0..L.
  std::size_t x_width(std::size_t l) const { return layers_[l].map.in_width(); }
  // Width of z^l, l = 0..L (the last is 1).
  std::size_t z_width(std::size_t l) const { return layers_[l].map.out_width(); }
  std::size_t input_width() const { return x_width(0); }

  NetworkStates Forward(std::span<const double> x0) const;
  double Evaluate(std::span<const double> x0) const { return Forward(x0).output(); }

  // Shape summary as JSON: widths, activation tags, map variants.
  std::string DumpShape() const;

 private:
  std::vector<Layer> layers_;
  std::vector<ActivationSpec> activations_;
};

// Linear/poly/sigmoid: one hidden layer; RBF: two hidden layers.
LayeredNetwork CompileNetwork(const SvmModel& model);

}  // namespace svmver
