#include "rng.hpp"

#include <cmath>

namespace specshift {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller on two uniforms; u clamped away from 0.
  double u = uniform();
  if (u < 0x1.0p-60) u = 0x1.0p-60;
  const double v = uniform();
  const double r = std::sqrt(-2.0 * std::log(u));
  const double angle = 2.0 * 3.14159265358979323846 * v;
  spare_ = r * std::sin(angle);
  has_spare_ = true;
  return r * std::cos(angle);
}

HermitianMatrix random_gue(int dim, Rng& rng) {
  CMat a(dim);
  const double s = 1.0 / std::sqrt(2.0 * dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = s * rng.complex_normal();
  return HermitianMatrix::trusted(a + a.adjoint());
}

CMat random_ginibre(int dim, Rng& rng) {
  CMat a(dim);
  const double s = 1.0 / std::sqrt(2.0 * dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = s * rng.complex_normal();
  return a;
}

CMat random_haar_unitary(int dim, Rng& rng) {
  CMat g(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.complex_normal();
  // modified Gram-Schmidt on columns
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < j; ++k) {
      cx proj = 0;
      for (int i = 0; i < dim; ++i) proj += std::conj(g(i, k)) * g(i, j);
      for (int i = 0; i < dim; ++i) g(i, j) -= proj * g(i, k);
    }
    double nrm = 0;
    for (int i = 0; i < dim; ++i) nrm += std::norm(g(i, j));
    nrm = std::sqrt(nrm);
    if (nrm < 1e-14) {  // astronomically unlikely; re-seed the column
      for (int i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();
      --j;
      continue;
    }
    for (int i = 0; i < dim; ++i) g(i, j) /= nrm;
  }
  return g;
}

HermitianMatrix random_weak_profile(int dim, double p, Rng& rng) {
  CMat q = random_haar_unitary(dim, rng);
  CMat d(dim);
  for (int k = 0; k < dim; ++k) {
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    d(k, k) = sign * std::pow(static_cast<double>(k + 1), -1.0 / p);
  }
  return HermitianMatrix::trusted(q * d * q.adjoint());
}

}  // namespace specshift
