#pragma once

// Dyadic lattice integration on the positive cone R_+^{n+1}:
//
//   S_m = 2^{-m(n+1)} sum_{k >= 0} u(k / 2^m)
//
// truncated to a box [0,T]^{n+1} with a certified tail bound from the decay
// certificate of the scalar density.  Two evaluation strategies:
//
//  * dyadic_box_sum: direct enumeration of the box lattice with a pairwise
//    tree reduction in linear-index order (deterministic, documented).
//  * scalar_cone_sum: for densities that depend on t only through sum(t),
//    the lattice sum collapses by total degree l = sum(k) to
//    sum_l psi(l h) * h_l(r_0..r_n), where h_l is the complete homogeneous
//    symmetric polynomial in r_j = e^{i lambda_j h}, computed by an O(n L)
//    recurrence.  This is an exact regrouping of the same sum, truncated by
//    total degree instead of the box (the two differ only far in the tail).
//
// Boundary weighting: lattice points with zero coordinates can carry either
// full weight (the literal sum above) or weight (1/2)^{#zero coords}.  The
// half-face variant changes the integrand only on a Lebesgue-null set, so it
// defines the same integral, but it removes the O(2^-m) face bias and
// converges at O(4^-m).

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cmat.hpp"

namespace specshift {

enum class BoundaryWeighting { lattice, half_face };

// sum_{j>=0} (1+j)^{-2} = pi^2/6, by partial summation plus an
// Euler-Maclaurin remainder; accurate to ~1e-12.
double inverse_square_sum();

// Upper bound for sum_{l > L} C(l+n, n) (1 + l h)^{-alpha} h^{n+1}: the
// count-by-total-degree tail of the lattice outside truncation.
double simplex_count_tail(int n, double h, long l_start, double alpha);

// sum over k in Z_{>=0}^{n+1} of (1 + 2^{-m} sum k_i)^{-(n+2)}, computed by
// total-degree grouping (partial sum + certified remainder).  Used to check
// the 2^{m(n+1)} pi^2/6 scaling bound.
double lattice_density_sum(int n, int level);

// Deterministic pairwise-tree reducer: elements are combined in linear-index
// order with binary-carry partial sums, so the result does not depend on
// chunking or thread count.
template <class T>
class PairwiseReducer {
 public:
  void push(T v) {
    for (size_t lvl = 0;; ++lvl) {
      if (lvl == slots_.size()) {
        slots_.push_back(std::move(v));
        return;
      }
      if (!slots_[lvl]) {
        slots_[lvl] = std::move(v);
        return;
      }
      v = *slots_[lvl] + v;
      slots_[lvl].reset();
    }
  }
  template <class Zero>
  T finish(Zero zero) {
    T acc = zero();
    for (auto& s : slots_)
      if (s) acc = *s + acc;
    slots_.clear();
    return acc;
  }

 private:
  std::vector<std::optional<T>> slots_;
};

// Matrix-valued integrand u(s) = w(s) * v(s) on R_+^{n+1} with sampled
// certificates (weight in Frobenius norm for the tail bound; Lipschitz in
// trace norm per the Hoelder-factorized product bound).
struct LatticeIntegrand {
  int order_n = 1;  // lattice dimension is order_n + 1
  int dim = 1;
  std::function<CMat(std::span<const double>)> weight;
  std::function<cx(std::span<const double>)> density;
  double weight_sup = 1.0;        // sup_s ||w(s)||_F
  double weight_lipschitz = 0.0;  // ||w(s)-w(t)||_1 <= L |s-t|_2
  // |v(s)| <= C (1+sum|s_i|)^{-alpha} for each (alpha, C); the tail bound
  // takes the sharpest entry.  All alphas must exceed order_n + 1.
  std::vector<std::pair<double, double>> density_decay{{3.0, 1.0}};
  double density_grad_c = 1.0;  // |grad v| certificate at grad_alpha
  double grad_alpha = 3.0;
};

// min over the integrand's certificates of C * simplex_count_tail
double integrand_tail_bound(const LatticeIntegrand& u, double h, long k_max);

struct BoxSum {
  CMat value;
  double tail_bound = 0.0;
  long points = 0;
};

// Direct Def-style box sum (full lattice weights), pairwise-tree reduced.
BoxSum dyadic_box_sum(const LatticeIntegrand& u, int level, double truncation);

// Same enumeration, but reduces the scalars Tr(D u(k/2^m)) instead of the
// matrices; used to probe trace/integral swapping.
struct TracedBoxSum {
  cx sum_of_traces;    // sum Tr(D u_k) * 2^{-m(n+1)}
  cx trace_of_sum;     // Tr(D S_m)
  double tail_bound = 0.0;
};
TracedBoxSum dyadic_box_sum_traced(const LatticeIntegrand& u, const CMat& d, int level,
                                   double truncation);

// Scalar cone sum by total-degree regrouping.  Computes
//   S_m = h^{n+1} sum_{k in cone, sum k <= L} weights(k) prod_j r_j^{k_j} psi(sign * h * sum k)
// with r_j = exp(i sign lambda_j h), L = (n+1) * round(T/h), and optional
// per-coordinate k_0 weighting (first_coordinate_weight=true multiplies by
// t_0 = k_0 h, used by the phi symbol).  Tail bounds are computed separately
// (see fourier_cone_tail in divided_difference.hpp).
cx scalar_cone_sum(std::span<const double> lambda, int level, double truncation, double sign,
                   const std::function<cx(double)>& psi, BoundaryWeighting bw,
                   bool first_coordinate_weight = false);

}  // namespace specshift
