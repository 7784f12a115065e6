#pragma once

// Closed-form scalar function families with exact derivatives and exact
// Fourier transforms:
//   gaussian    sum_j c_j (x-b_j)^{k_j} exp(-a_j (x-b_j)^2),  a_j > 0
//   rational    sum_j c_j (z_j - x)^{-m_j},                   Im z_j != 0
//   polynomial  real coefficients (test family; not Schwartz)
//
// Fourier convention:  (Ff)(t) = (1/2pi) int f(x) e^{-itx} dx,  so that
// f(x) = int_R (Ff)(t) e^{itx} dt.  Derivatives of gaussians stay in the
// family via the recurrence p -> p' - 2a u p on the polynomial factor, which
// keeps everything exact to machine precision without a symbolic engine.

#include <complex>
#include <memory>
#include <vector>

#include "error.hpp"

namespace specshift {

using cx = std::complex<double>;

class ScalarFunction {
 public:
  enum class Kind { gaussian, rational, polynomial };

  struct GaussianTerm {
    cx coef;
    double width = 1.0;   // a > 0
    double center = 0.0;  // b
    int degree = 0;       // k >= 0
  };
  struct RationalTerm {
    cx coef;
    cx pole;        // Im != 0
    int order = 1;  // m >= 1
  };

  static constexpr int kMaxDerivative = 12;
  static constexpr int kMaxAlpha = 8;  // decay certificates (1+|t|)^{-alpha}

  static ScalarFunction gaussian(std::vector<GaussianTerm> terms);
  static ScalarFunction rational(std::vector<RationalTerm> terms);
  static ScalarFunction polynomial(std::vector<double> coeffs);

  Kind kind() const;
  bool real_valued() const;
  bool schwartz() const { return kind() == Kind::gaussian; }

  cx eval(double x) const { return derivative(x, 0); }
  cx derivative(double x, int k) const;

  // Certified upper bound on sup_x |f^{(k)}(x)|; overestimates by at most a
  // few percent. +inf for polynomials of degree > k.
  double sup_derivative(int k) const;

  // Hermitian split f = real_part + i * imag_part (both real-valued).
  ScalarFunction real_part() const;
  ScalarFunction imag_part() const;

  // Fourier data; gaussian variant only, everything else throws unsupported.
  cx fourier(double t) const;
  cx fourier_derivative(double t) const;
  double fourier_decay_constant(int alpha) const;           // |Ff(t)| (1+|t|)^a <= C
  double fourier_derivative_decay_constant(int alpha) const;  // |Ff'(t)| (1+|t|)^a <= C

  const std::vector<GaussianTerm>& gaussian_terms() const;
  const std::vector<RationalTerm>& rational_terms() const;
  const std::vector<double>& polynomial_coeffs() const;

  std::string describe() const;

 private:
  struct Impl;
  explicit ScalarFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

}  // namespace specshift
