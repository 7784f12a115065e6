#pragma once

// Self-contained counter-splittable RNG. std::random distributions are not
// pinned across standard libraries, and the reports must hash identically for
// a given seed, so the generator and the normal sampler are spelled out here.

#include <cstdint>
#include <vector>

#include "cmat.hpp"

namespace specshift {

inline uint64_t splitmix64(uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Counter-based split: trial k of master seed s gets an independent stream.
inline uint64_t derive_seed(uint64_t master, uint64_t stream) {
  uint64_t s = master ^ (0xA0761D6478BD642Full * (stream + 1));
  (void)splitmix64(s);
  return splitmix64(s);
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() { return splitmix64(state_); }

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; deterministic given the seed.
  double normal();
  cx complex_normal() { return {normal(), normal()}; }

 private:
  uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// GUE-normalized hermitian matrix: E|H_ij|^2 = 1/dim, spectrum ~ [-2, 2].
HermitianMatrix random_gue(int dim, Rng& rng);

// Haar-distributed unitary via Gram-Schmidt of a complex Gaussian matrix with
// the usual phase fix.
CMat random_haar_unitary(int dim, Rng& rng);

// Complex Ginibre matrix, entries ~ CN(0, 1/dim).
CMat random_ginibre(int dim, Rng& rng);

// Self-adjoint V = Q diag(sign_k * (k+1)^{-1/p}) Q*, Q Haar. The singular
// value profile is exactly (k+1)^{-1/p}, extremal for the weak-p ideal.
HermitianMatrix random_weak_profile(int dim, double p, Rng& rng);

}  // namespace specshift
