#include "adacat/oracle.hpp"

#include "adacat/errors.hpp"

#include <string>

namespace adacat {

void Oracle::check_dim(const Vector& x, const char* where) const {
  if (x.size() != dim_)
    throw DimensionMismatch(std::string(where) + ": expected dimension " +
                            std::to_string(dim_) + ", got " +
                            std::to_string(x.size()));
}

double Oracle::value(const Vector& x) const {
  check_dim(x, "Oracle::value");
  const double v = value_impl(x);
  note_value();
  return v;
}

Vector Oracle::gradient(const Vector& x) const {
  check_dim(x, "Oracle::gradient");
  Vector g = gradient_impl(x);
  note_gradient();
  return g;
}

double Oracle::partial(int i, const Vector& x) const {
  check_dim(x, "Oracle::partial");
  if (i < 0 || i >= dim_)
    throw IndexOutOfRange("Oracle::partial: index " + std::to_string(i) +
                          " not in [0, " + std::to_string(dim_) + ")");
  const double d = partial_impl(i, x);
  note_partial();
  return d;
}

std::pair<int, int> Oracle::block_span(int) const {
  throw MissingBlockSolver("oracle has no block structure");
}

Vector Oracle::block_argmin(int b, const Vector& x) const {
  check_dim(x, "Oracle::block_argmin");
  if (!has_blocks() || b < 0 || b >= block_count())
    throw MissingBlockSolver("Oracle::block_argmin: no block " +
                             std::to_string(b));
  Vector y = block_argmin_impl(b, x);
  note_block_solve();
  return y;
}

Vector Oracle::block_argmin_prox(int b, const Vector& x, double L,
                                 const Vector& center) const {
  check_dim(x, "Oracle::block_argmin_prox");
  if (!has_blocks() || b < 0 || b >= block_count())
    throw MissingBlockSolver("Oracle::block_argmin_prox: no block " +
                             std::to_string(b));
  Vector y = block_argmin_prox_impl(b, x, L, center);
  note_block_solve();
  return y;
}

Vector Oracle::hessian_apply(const Vector& v) const {
  check_dim(v, "Oracle::hessian_apply");
  Vector w = hessian_apply_impl(v);
  note_gradient();
  return w;
}

Oracle::RayRestriction Oracle::ray_restriction(const Vector& x,
                                               const Vector& d) const {
  check_dim(x, "Oracle::ray_restriction");
  check_dim(d, "Oracle::ray_restriction");
  return ray_restriction_impl(x, d);
}

Oracle::RayRestriction Oracle::ray_restriction_impl(const Vector&,
                                                    const Vector&) const {
  throw std::logic_error("oracle provides no ray restriction");
}

Vector Oracle::block_argmin_impl(int, const Vector&) const {
  throw MissingBlockSolver("oracle provides no block solver");
}

Vector Oracle::block_argmin_prox_impl(int, const Vector&, double,
                                      const Vector&) const {
  throw MissingBlockSolver("oracle provides no regularized block solver");
}

Vector Oracle::hessian_apply_impl(const Vector&) const {
  throw std::logic_error("oracle advertises no quadratic structure");
}

ProxOracle::ProxOracle(const Oracle& inner, double L, Vector center)
    : Oracle(inner.dim()), inner_(inner), L_(L), center_(std::move(center)) {
  if (center_.size() != inner.dim())
    throw DimensionMismatch("ProxOracle: center dimension mismatch");
  if (!(L > 0.0)) throw DimensionMismatch("ProxOracle: L must be positive");
}

double ProxOracle::value_impl(const Vector& y) const {
  return inner_.value(y) + 0.5 * L_ * (y - center_).squaredNorm();
}

Vector ProxOracle::gradient_impl(const Vector& y) const {
  return inner_.gradient(y) + L_ * (y - center_);
}

double ProxOracle::partial_impl(int i, const Vector& y) const {
  return inner_.partial(i, y) + L_ * (y[i] - center_[i]);
}

Vector ProxOracle::block_argmin_impl(int b, const Vector& y) const {
  return inner_.block_argmin_prox(b, y, L_, center_);
}

Vector ProxOracle::hessian_apply_impl(const Vector& v) const {
  return inner_.hessian_apply(v) + L_ * v;
}

Oracle::RayRestriction ProxOracle::ray_restriction_impl(
    const Vector& x, const Vector& d) const {
  auto ray = inner_.ray_restriction(x, d);
  // the regularizer restricts to an exact quadratic in h
  const double c0 = (x - center_).squaredNorm();
  const double c1 = d.dot(x - center_);
  const double c2 = d.squaredNorm();
  const double L = L_;
  return {[ray, L, c0, c1, c2](double h) {
            return ray.value(h) + 0.5 * L * (c0 + 2.0 * h * c1 + h * h * c2);
          },
          [ray, L, c1, c2](double h) {
            return ray.derivative(h) + L * (c1 + h * c2);
          }};
}

}  // namespace adacat
