#include "cmat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace specshift {

CMat& CMat::operator+=(const CMat& o) {
  require(dim_ == o.dim_, Errc::invalid_argument, "dimension mismatch in +");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

CMat& CMat::operator-=(const CMat& o) {
  require(dim_ == o.dim_, Errc::invalid_argument, "dimension mismatch in -");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

CMat& CMat::operator*=(cx s) {
  for (auto& v : a_) v *= s;
  return *this;
}

CMat operator*(const CMat& a, const CMat& b) {
  require(a.dim_ == b.dim_, Errc::invalid_argument, "dimension mismatch in *");
  const int d = a.dim_;
  CMat c(d);
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      const cx aik = a(i, k);
      if (aik == cx{}) continue;
      for (int j = 0; j < d; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

CMat CMat::adjoint() const {
  CMat r(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

cx CMat::trace() const {
  cx t = 0;
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double CMat::frobenius_norm() const {
  double s = 0;
  for (const auto& v : a_) s += std::norm(v);
  return std::sqrt(s);
}

double CMat::max_abs() const {
  double s = 0;
  for (const auto& v : a_) s = std::max(s, std::abs(v));
  return s;
}

double CMat::hermitian_asymmetry() const {
  double s = 0;
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j)
      s = std::max(s, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return s;
}

CMat CMat::hermitian_part() const {
  CMat r(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) r(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
  return r;
}

CMat CMat::antihermitian_part() const {
  const cx half_over_i(0.0, -0.5);  // 1/(2i)
  CMat r(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      r(i, j) = half_over_i * ((*this)(i, j) - std::conj((*this)(j, i)));
  return r;
}

HermitianMatrix HermitianMatrix::from(const CMat& a) {
  return from(a, kHermTolFactor * a.max_abs());
}

HermitianMatrix HermitianMatrix::from(const CMat& a, double tolerance) {
  const double asym = a.hermitian_asymmetry();
  if (asym > tolerance) {
    std::ostringstream os;
    os << "matrix is not hermitian: max asymmetry " << asym << " exceeds tolerance " << tolerance;
    fail(Errc::not_hermitian, os.str());
  }
  return HermitianMatrix(a.hermitian_part());
}

double relative_error(const CMat& got, const CMat& want, double floor) {
  const double scale = std::max({want.frobenius_norm(), got.frobenius_norm(), floor, 1e-300});
  return (got - want).frobenius_norm() / scale;
}

}  // namespace specshift
