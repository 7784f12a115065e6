#pragma once

// Spectral decomposition with eigenvalue clustering, plus the functional
// calculus built on it: f(H), resolvent powers, unitary exponentials.
// Degenerate spectra are first-class: eigenvalues closer than cluster_tol
// share one projection of rank = multiplicity.

#include <functional>
#include <vector>

#include "cmat.hpp"
#include "eigh.hpp"
#include "scalar_function.hpp"

namespace specshift {

struct SpectralDecomposition {
  int dim = 0;
  std::vector<double> eigenvalues;      // cluster representatives, ascending
  std::vector<int> multiplicities;      // per cluster
  std::vector<CMat> projections;        // per cluster, rank = multiplicity
  std::vector<double> raw_eigenvalues;  // all dim values, ascending
  std::vector<int> cluster_of;          // raw index -> cluster id
  CMat vectors;                         // eigenvector columns, raw order

  int cluster_count() const { return static_cast<int>(eigenvalues.size()); }
  double operator_norm() const {
    double m = 0;
    for (double v : raw_eigenvalues) m = std::max(m, std::abs(v));
    return m;
  }
  // basis-change helpers (columns of `vectors` are orthonormal)
  CMat to_eigenbasis(const CMat& x) const;    // U* x U
  CMat from_eigenbasis(const CMat& x) const;  // U x U*
};

inline constexpr double kDefaultClusterTolFactor = 1e-9;

// cluster_tol < 0 selects the default 1e-9 * ||H||.
SpectralDecomposition eigh(const HermitianMatrix& h, double cluster_tol = -1.0);

// f(H) for real-valued f; rejects complex-valued f and rational f whose pole
// comes too close to the spectrum.
HermitianMatrix apply_function(const ScalarFunction& f, const HermitianMatrix& h);
HermitianMatrix apply_function(const ScalarFunction& f, const SpectralDecomposition& d);

// sum phi(lambda_c) P_c for an arbitrary complex scalar map.
CMat apply_complex_spectral(const SpectralDecomposition& d, const std::function<cx(double)>& phi);

// (zI - H)^{-m}; Im z != 0.
CMat resolvent_power(const HermitianMatrix& h, cx z, int m);
CMat resolvent_power(const SpectralDecomposition& d, cx z, int m);

// e^{itH}
CMat unitary_exp(const HermitianMatrix& h, double t);
CMat unitary_exp(const SpectralDecomposition& d, double t);

}  // namespace specshift
