#pragma once

// Dense complex square matrices, row-major storage. Everything here runs at
// desk scale (dim <= ~200), so the O(d^3) naive kernels are intentional.

#include <complex>
#include <span>
#include <vector>

#include "error.hpp"

namespace specshift {

using cx = std::complex<double>;

class CMat {
 public:
  CMat() = default;
  explicit CMat(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {
    require(dim >= 1, Errc::invalid_argument, "matrix dim must be >= 1");
  }
  CMat(int dim, std::vector<cx> entries) : dim_(dim), a_(std::move(entries)) {
    require(dim >= 1, Errc::invalid_argument, "matrix dim must be >= 1");
    require(a_.size() == static_cast<size_t>(dim) * dim, Errc::invalid_argument,
            "entry count does not match dim*dim");
  }

  static CMat identity(int dim) {
    CMat m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }
  static CMat zero(int dim) { return CMat(dim); }

  int dim() const { return dim_; }
  cx& operator()(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }
  const cx& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }
  std::span<const cx> data() const { return a_; }
  std::span<cx> data() { return a_; }

  CMat& operator+=(const CMat& o);
  CMat& operator-=(const CMat& o);
  CMat& operator*=(cx s);
  friend CMat operator+(CMat a, const CMat& b) { return a += b; }
  friend CMat operator-(CMat a, const CMat& b) { return a -= b; }
  friend CMat operator*(CMat a, cx s) { return a *= s; }
  friend CMat operator*(cx s, CMat a) { return a *= s; }
  friend CMat operator*(const CMat& a, const CMat& b);

  CMat adjoint() const;
  cx trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  // max_ij |a_ij - conj(a_ji)|
  double hermitian_asymmetry() const;
  // (A + A*)/2
  CMat hermitian_part() const;
  CMat antihermitian_part() const;  // (A - A*)/(2i), hermitian for any A

 private:
  int dim_ = 0;
  std::vector<cx> a_;
};

// Self-adjoint input matrix. Construction rejects anything whose asymmetry
// exceeds tau_herm = 1e-12 * max|entry| and symmetrizes the rest.
class HermitianMatrix {
 public:
  static constexpr double kHermTolFactor = 1e-12;

  static HermitianMatrix from(const CMat& a);
  static HermitianMatrix from(const CMat& a, double tolerance);
  // For matrices that are hermitian by construction; symmetrizes without the
  // asymmetry gate.
  static HermitianMatrix trusted(const CMat& a) { return HermitianMatrix(a.hermitian_part()); }

  int dim() const { return m_.dim(); }
  const CMat& mat() const { return m_; }

 private:
  explicit HermitianMatrix(CMat m) : m_(std::move(m)) {}
  CMat m_;
};

double relative_error(const CMat& got, const CMat& want, double floor = 0.0);

}  // namespace specshift
