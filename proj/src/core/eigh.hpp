#pragma once

// Deterministic dense eigensolvers: cyclic-by-rows Jacobi for hermitian
// matrices and one-sided Jacobi for singular values. No pivot-order
// heuristics, so results are reproducible bit-for-bit on a given platform.

#include <vector>

#include "cmat.hpp"

namespace specshift {

struct EighRaw {
  std::vector<double> values;  // ascending
  CMat vectors;                // columns, same order as values
  int sweeps = 0;
  double off_diagonal_final = 0.0;
};

EighRaw hermitian_eigh(const CMat& a);

// Singular values by one-sided Jacobi on columns, nonincreasing. Accurate to
// high relative precision even for small singular values.
std::vector<double> singular_values_jacobi(const CMat& a);

}  // namespace specshift
