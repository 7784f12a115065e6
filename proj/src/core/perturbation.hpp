#pragma once

// The headline objects at desk scale: Gateaux derivatives of f(H+tV) by MOI,
// finite-difference and resolvent-sum routes, Taylor remainders, the Krein
// spectral shift function and its trace-formula residual, the cyclic trace
// reduction, and the estimate-constant ensemble scans.

#include <cstdint>
#include <vector>

#include "ideals.hpp"
#include "moi.hpp"

namespace specshift {

struct PerturbationPair {
  HermitianMatrix H;
  HermitianMatrix V;
  PerturbationPair(HermitianMatrix h, HermitianMatrix v) : H(std::move(h)), V(std::move(v)) {
    require(H.dim() == V.dim(), Errc::invalid_argument, "H and V must share a dimension");
  }
  int dim() const { return H.dim(); }
};

// d^n/dt^n f(H+tV)|_0 = n! T_{f^[n]}(V,..,V); hermitian for real-valued f.
CMat gateaux_derivative_moi(const ScalarFunction& f, const PerturbationPair& pair, int order);

// Order-4 central stencil for the first derivative, composed n times, applied
// to t -> f(H+tV).  step <= 0 selects h = eps^{1/(n+4)} (1+||H||)/(1+||V||).
// Requires real-valued f (split complex f first).  err_estimate, when given,
// receives a Richardson-style estimate; estimates above 1e-3 * scale raise
// step_size.
CMat gateaux_derivative_fd(const ScalarFunction& f, const PerturbationPair& pair, int order,
                           double step = 0.0, double* err_estimate = nullptr);

// Complex-valued f handled by splitting into hermitian components.
CMat gateaux_derivative_fd_complex(const ScalarFunction& f, const PerturbationPair& pair,
                                   int order, double step = 0.0);

// n! * sum over compositions m_0+..+m_n = m+n (1 <= m_i <= m) of
// R^{m_0} V R^{m_1} ... V R^{m_n} with R = (zI-H)^{-1}; equals the n-th
// derivative of t -> (z - (H+tV))^{-m} at 0.
CMat resolvent_derivative(int power_m, cx z, const PerturbationPair& pair, int order);

// f(H+V) - sum_{j<n} (1/j!) d^j/dt^j f(H+tV)|_0
CMat taylor_remainder(const ScalarFunction& f, const PerturbationPair& pair, int order);

struct StepFunction {
  std::vector<double> breakpoints;  // ascending
  std::vector<double> values;       // values[i] on [breakpoints[i], breakpoints[i+1]); 0 outside
  double integral() const;
  double eval(double t) const;
};

// xi(t) = #{eig(H) <= t} - #{eig(H+V) <= t}; integer-valued, compact support,
// integral equal to Tr V.
StepFunction krein_ssf(const PerturbationPair& pair);

struct KreinResidual {
  double residual = 0.0;  // |Tr(f(H+V) - f(H)) - int f' xi|
  double scale = 1.0;     // 1 + |Tr f(H+V)| + |Tr f(H)|
  double lhs = 0.0, rhs = 0.0;
};
KreinResidual krein_residual(const ScalarFunction& f, const PerturbationPair& pair);

// |Tr T_{f^[n]}(V,..,V) - i Tr(T_phi(V,..,V) V)| / scale.  The i compensates
// the -i carried inside phi.
double cyclic_identity_residual(const ScalarFunction& f, const PerturbationPair& pair, int order);

struct EstimateReport {
  int order = 1;
  std::string ideal;
  std::vector<int> dims;
  std::vector<double> max_trace_ratio;       // per dim: |Tr d^n| / (||f^(n)|| ||V||^n)
  std::vector<double> max_tphi_ratio;        // per dim: SSFRemainderKey-style ratio (order >= 2)
  std::vector<double> max_trace_ratio_normalized;  // divided by (1+||H||)^n
  double trace_growth_factor = 1.0;
  double tphi_growth_factor = 1.0;
  double fitted_constant = 0.0;
};

// V drawn with the extremal weak-profile; H GUE-normalized.
EstimateReport estimate_scan(const ScalarFunction& f, int order, const IdealSpec& ideal,
                             std::span<const int> dims, int trials, uint64_t seed);

}  // namespace specshift
