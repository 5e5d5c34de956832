#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace svmver {

enum class KernelType { kLinear, kPolynomial, kSigmoid, kRbf };

/// Kernel function parameters.
///
/// Polynomial: (scale * <u,v> + offset)^degree.
/// Sigmoid:    tanh(scale * <u,v> + offset), scale > 0, offset < 0.
/// Rbf:        exp(-gamma * |u - v|^2), gamma > 0.
struct KernelSpec {
  KernelType type = KernelType::kLinear;
  int degree = 1;
  double offset = 0.0;
  double scale = 1.0;
  double gamma = 1.0;

  static KernelSpec Linear() { return {}; }
  static KernelSpec Polynomial(int degree, double offset, double scale = 1.0) {
    return {KernelType::kPolynomial, degree, offset, scale, 1.0};
  }
  static KernelSpec Sigmoid(double scale, double offset) {
    return {KernelType::kSigmoid, 1, offset, scale, 1.0};
  }
  static KernelSpec Rbf(double gamma) { return {KernelType::kRbf, 1, 0.0, 1.0, gamma}; }

  // Throws Error(kConstraint) naming the offending field.
  void Validate() const;
};

const char* KernelName(KernelType type);

double KernelEval(const KernelSpec& kernel, std::span<const double> u, std::span<const double> v);

/// A trained binary SVM: f(x) = sum_i coef_i * k(x, sv_i) + bias, coef_i = alpha_i * y_i.
class SvmModel {
 public:
  SvmModel(KernelSpec kernel, std::size_t n_features, std::vector<double> support_vectors,
           std::vector<double> coef, double bias);

  const KernelSpec& kernel() const { return kernel_; }
  std::size_t n_features() const { return n_features_; }
  std::size_t n_support() const { return coef_.size(); }
  std::span<const double> support_vector(std::size_t i) const {
    return {support_vectors_.data() + i * n_features_, n_features_};
  }
  // Row-major m x n.
  const std::vector<double>& support_vectors() const { return support_vectors_; }
  const std::vector<double>& coef() const { return coef_; }
  double bias() const { return bias_; }

  double DecisionValue(std::span<const double> x) const;
  // sign(f(x)) with sign(0) = +1.
  int Classify(std::span<const double> x) const;

 private:
  KernelSpec kernel_;
  std::size_t n_features_;
  std::vector<double> support_vectors_;
  std::vector<double> coef_;
  double bias_;
};

SvmModel ParseModelJson(const std::string& text);
SvmModel LoadModel(const std::string& path);
// 17 significant digits, format_version 1.
std::string ModelToJson(const SvmModel& model);

}  // namespace svmver
