#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>

namespace adacat {

using Scalar = double;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// xoshiro256++ (Blackman & Vigna, 2019), seeded through splitmix64.
// Fixed, documented generator so every trace is reproducible bit-for-bit
// across platforms. State is exactly the four 64-bit words.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform variate in [0, 1), 53 mantissa bits.
  double uniform();

  // Standard Gaussian via Box-Muller over uniform(); consumes exactly two
  // uniforms per call (cosine branch only), so the state stays the plain
  // xoshiro words and serializes without a spare slot.
  double gaussian();

  std::array<std::uint64_t, 4> state() const { return s_; }
  void restore(const std::array<std::uint64_t, 4>& s) { s_ = s; }

 private:
  std::array<std::uint64_t, 4> s_;
};

// Random orthogonal matrix: Householder QR of an n-by-n standard Gaussian
// matrix (filled row by row), with the signs of R's diagonal absorbed into
// Q. The sign correction makes S a deterministic function of the seed.
Matrix random_orthogonal(int n, Rng& rng);

// Solve A x = b for symmetric positive definite A via Cholesky (LLT), with
// one iterative refinement pass. Throws NonPositiveDefinite when the
// factorization hits a non-positive pivot.
Vector cholesky_solve(const Matrix& a, const Vector& b);

// Largest eigenvalue of a symmetric PSD operator given only as a matvec.
// Power iteration from a fixed seeded random start, converged when the
// Rayleigh quotient stabilizes well below tol. Throws NoConvergence.
double power_iteration_lmax(const std::function<Vector(const Vector&)>& matvec,
                            int n, double tol = 1e-8, int max_iter = 50000);

}  // namespace adacat
