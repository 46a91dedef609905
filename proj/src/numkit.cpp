#include "adacat/numkit.hpp"

#include "adacat/errors.hpp"

#include <cmath>
#include <limits>

namespace adacat {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& w : s_) w = splitmix64(sm);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  // 1 - u maps [0,1) to (0,1], keeping the log argument positive.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

Matrix random_orthogonal(int n, Rng& rng) {
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.gaussian();

  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

Vector cholesky_solve(const Matrix& a, const Vector& b) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw DimensionMismatch("cholesky_solve: incompatible shapes");
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success)
    throw NonPositiveDefinite("cholesky_solve: non-positive pivot");
  Vector x = llt.solve(b);
  x += llt.solve(b - a * x);  // one refinement pass
  return x;
}

double power_iteration_lmax(const std::function<Vector(const Vector&)>& matvec,
                            int n, double tol, int max_iter) {
  Rng rng(0x5EEDULL);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.gaussian();
  v.normalize();

  // Rayleigh quotients converge at the squared spectral-gap rate; asking
  // for a 100x tighter successive difference keeps the returned value
  // within tol of the true eigenvalue for generic starts.
  const double stab = 0.01 * tol;
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector w = matvec(v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    const double next = v.dot(w);
    w /= nw;
    const bool stable =
        it > 0 && std::abs(next - lambda) <=
                      stab * std::max(std::abs(next),
                                      std::numeric_limits<double>::min());
    lambda = next;
    v = w;
    if (stable) return lambda;
  }
  throw NoConvergence("power_iteration_lmax: Rayleigh quotient did not settle");
}

}  // namespace adacat
