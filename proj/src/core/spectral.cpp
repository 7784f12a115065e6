#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace specshift {

CMat SpectralDecomposition::to_eigenbasis(const CMat& x) const {
  return vectors.adjoint() * x * vectors;
}

CMat SpectralDecomposition::from_eigenbasis(const CMat& x) const {
  return vectors * x * vectors.adjoint();
}

SpectralDecomposition eigh(const HermitianMatrix& h, double cluster_tol) {
  const int d = h.dim();
  EighRaw raw = hermitian_eigh(h.mat());

  double scale = 0;
  for (double v : raw.values) scale = std::max(scale, std::abs(v));
  if (cluster_tol < 0) cluster_tol = kDefaultClusterTolFactor * scale;

  SpectralDecomposition out;
  out.dim = d;
  out.raw_eigenvalues = raw.values;
  out.vectors = raw.vectors;
  out.cluster_of.resize(d);

  int start = 0;
  while (start < d) {
    int end = start + 1;
    while (end < d && raw.values[end] - raw.values[end - 1] <= cluster_tol) ++end;
    double mean = 0;
    for (int i = start; i < end; ++i) mean += raw.values[i];
    mean /= (end - start);
    CMat p(d);
    for (int i = start; i < end; ++i) {
      for (int r = 0; r < d; ++r) {
        const cx vr = raw.vectors(r, i);
        if (vr == cx{}) continue;
        for (int c = 0; c < d; ++c) p(r, c) += vr * std::conj(raw.vectors(c, i));
      }
    }
    const int id = out.cluster_count();
    for (int i = start; i < end; ++i) out.cluster_of[i] = id;
    out.eigenvalues.push_back(mean);
    out.multiplicities.push_back(end - start);
    out.projections.push_back(std::move(p));
    start = end;
  }
  return out;
}

namespace {

void check_rational_poles(const ScalarFunction& f, const SpectralDecomposition& d) {
  if (f.kind() != ScalarFunction::Kind::rational) return;
  double scale = 1.0 + d.operator_norm();
  for (const auto& t : f.rational_terms()) {
    for (double lam : d.raw_eigenvalues) {
      if (std::abs(t.pole - lam) < 1e-10 * scale) {
        std::ostringstream os;
        os << "rational pole " << t.pole.real() << (t.pole.imag() < 0 ? "-" : "+")
           << std::abs(t.pole.imag()) << "i too close to eigenvalue " << lam;
        fail(Errc::pole_proximity, os.str());
      }
    }
  }
}

}  // namespace

HermitianMatrix apply_function(const ScalarFunction& f, const HermitianMatrix& h) {
  return apply_function(f, eigh(h));
}

HermitianMatrix apply_function(const ScalarFunction& f, const SpectralDecomposition& d) {
  require(f.real_valued(), Errc::invalid_argument,
          "apply_function requires a real-valued function");
  check_rational_poles(f, d);
  CMat acc(d.dim);
  for (int c = 0; c < d.cluster_count(); ++c) {
    const cx fv = f.eval(d.eigenvalues[c]).real();
    acc += fv * d.projections[c];
  }
  return HermitianMatrix::trusted(acc);
}

CMat apply_complex_spectral(const SpectralDecomposition& d, const std::function<cx(double)>& phi) {
  CMat acc(d.dim);
  for (int c = 0; c < d.cluster_count(); ++c) acc += phi(d.eigenvalues[c]) * d.projections[c];
  return acc;
}

CMat resolvent_power(const HermitianMatrix& h, cx z, int m) {
  return resolvent_power(eigh(h), z, m);
}

CMat resolvent_power(const SpectralDecomposition& d, cx z, int m) {
  require(z.imag() != 0.0, Errc::invalid_argument, "resolvent requires Im z != 0");
  require(m >= 1, Errc::invalid_argument, "resolvent power must be >= 1");
  return apply_complex_spectral(d, [&](double lam) {
    cx w = 1.0 / (z - lam);
    cx r = 1;
    for (int i = 0; i < m; ++i) r *= w;
    return r;
  });
}

CMat unitary_exp(const HermitianMatrix& h, double t) { return unitary_exp(eigh(h), t); }

CMat unitary_exp(const SpectralDecomposition& d, double t) {
  return apply_complex_spectral(d, [&](double lam) { return std::polar(1.0, t * lam); });
}

}  // namespace specshift
