#include "eigh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace specshift {

namespace {

double off_diagonal_norm(const CMat& a) {
  double s = 0;
  const int d = a.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

EighRaw hermitian_eigh(const CMat& input) {
  const int d = input.dim();
  CMat a = input.hermitian_part();
  CMat v = CMat::identity(d);
  const double scale = std::max(a.max_abs(), 1e-300);
  const double stop = 1e-15 * scale * d;
  constexpr int kMaxSweeps = 64;

  int sweep = 0;
  double off = off_diagonal_norm(a);
  for (; sweep < kMaxSweeps && off > stop; ++sweep) {
    for (int p = 0; p < d - 1; ++p) {
      for (int q = p + 1; q < d; ++q) {
        const cx apq = a(p, q);
        const double r = std::abs(apq);
        if (r <= 1e-300) continue;
        // Absorb the phase, then a real Jacobi rotation on the 2x2 pivot.
        const cx phase = apq / r;  // a_pq = r * phase
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Unitary update U: U_pp = c, U_pq = s, U_qp = -s*conj(phase),
        // U_qq = c*conj(phase).  A <- U* A U, V <- V U.
        const cx uqp = -s * std::conj(phase);
        const cx uqq = c * std::conj(phase);
        for (int i = 0; i < d; ++i) {  // columns: B = A U
          const cx aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip + uqp * aiq;
          a(i, q) = s * aip + uqq * aiq;
        }
        for (int j = 0; j < d; ++j) {  // rows: A = U* B
          const cx apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj + std::conj(uqp) * aqj;
          a(q, j) = s * apj + std::conj(uqq) * aqj;
        }
        for (int i = 0; i < d; ++i) {
          const cx vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip + uqp * viq;
          v(i, q) = s * vip + uqq * viq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
    off = off_diagonal_norm(a);
  }

  EighRaw out;
  out.sweeps = sweep;
  out.off_diagonal_final = off;
  out.values.resize(d);
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(d);
  for (int i = 0; i < d; ++i) diag[i] = a(i, i).real();
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return diag[x] < diag[y]; });
  out.vectors = CMat(d);
  for (int j = 0; j < d; ++j) {
    out.values[j] = diag[order[j]];
    for (int i = 0; i < d; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

std::vector<double> singular_values_jacobi(const CMat& input) {
  const int d = input.dim();
  CMat a = input;  // columns get rotated in place
  constexpr int kMaxSweeps = 64;
  const double tol = 1e-15;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < d - 1; ++p) {
      for (int q = p + 1; q < d; ++q) {
        double app = 0, aqq = 0;
        cx apq = 0;
        for (int i = 0; i < d; ++i) {
          app += std::norm(a(i, p));
          aqq += std::norm(a(i, q));
          apq += std::conj(a(i, p)) * a(i, q);
        }
        const double r = std::abs(apq);
        if (r <= tol * std::sqrt(app * aqq) || r <= 1e-300) continue;
        rotated = true;
        const cx phase = apq / r;
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cx uqp = -s * std::conj(phase);
        const cx uqq = c * std::conj(phase);
        for (int i = 0; i < d; ++i) {
          const cx aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip + uqp * aiq;
          a(i, q) = s * aip + uqq * aiq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sv(d);
  for (int j = 0; j < d; ++j) {
    double s = 0;
    for (int i = 0; i < d; ++i) s += std::norm(a(i, j));
    sv[j] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  return sv;
}

}  // namespace specshift
