#pragma once

#include "adacat/numkit.hpp"

#include <utility>

namespace adacat {

// Oracle call totals. The unified budget counts one full gradient as 1,
// a partial derivative as 1/n, an exact block solve as 1/p, and value
// calls at a per-problem weight (0 by default: values are off the
// plotted axis).
struct CallCounter {
  long long full_gradients = 0;
  long long values = 0;
  long long partials = 0;
  long long block_solves = 0;

  double grad_equivalent(int n, int p, double value_weight = 0.0) const {
    return static_cast<double>(full_gradients) +
           static_cast<double>(partials) / static_cast<double>(n) +
           static_cast<double>(block_solves) / static_cast<double>(p) +
           static_cast<double>(values) * value_weight;
  }
};

// First-order problem interface. The public entry points count every call;
// implementations override the *_impl hooks. One run owns one oracle
// instance, so the embedded counter needs no synchronization.
class Oracle {
 public:
  virtual ~Oracle() = default;

  int dim() const { return dim_; }

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  double partial(int i, const Vector& x) const;

  // Block structure for alternating minimization. Blocks are contiguous
  // index ranges partitioning {0..n-1}.
  virtual bool has_blocks() const { return false; }
  virtual int block_count() const { return 1; }
  virtual std::pair<int, int> block_span(int b) const;  // (offset, length)

  // Exact minimizer over block b with the other coordinates fixed;
  // returns the full point with that block replaced.
  Vector block_argmin(int b, const Vector& x) const;

  // Exact block minimizer of f(.) + (L/2)||. - center||^2. Problems that
  // can solve their own blocks in closed form implement the _impl hook so
  // alternating minimization stays usable under a prox wrapper.
  Vector block_argmin_prox(int b, const Vector& x, double L,
                           const Vector& center) const;

  // Quadratic structure: when advertised, hessian_apply(v) returns H v and
  // is charged as one full gradient (for a quadratic both cost one matvec).
  virtual bool is_quadratic() const { return false; }
  Vector hessian_apply(const Vector& v) const;

  // One-dimensional restriction along a ray: phi(h) = f(x + h d) and its
  // derivative, evaluated from per-row inner products precomputed at
  // construction. Linear-model objectives support this; each construction
  // pass and each evaluation costs one data sweep and is charged as a
  // value call.
  struct RayRestriction {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
  };
  virtual bool has_ray_restriction() const { return false; }
  RayRestriction ray_restriction(const Vector& x, const Vector& d) const;

  virtual const CallCounter& counter() const { return counter_; }
  virtual void reset_counter() const { counter_ = CallCounter{}; }

  // Weight of a value call in the gradient-equivalent budget.
  virtual double value_weight() const { return 0.0; }

  double grad_equiv_cost() const {
    return counter().grad_equivalent(dim(), block_count(), value_weight());
  }

 protected:
  explicit Oracle(int dim) : dim_(dim) {}

  virtual double value_impl(const Vector& x) const = 0;
  virtual Vector gradient_impl(const Vector& x) const = 0;
  virtual double partial_impl(int i, const Vector& x) const = 0;
  virtual Vector block_argmin_impl(int b, const Vector& x) const;
  virtual Vector block_argmin_prox_impl(int b, const Vector& x, double L,
                                        const Vector& center) const;
  virtual Vector hessian_apply_impl(const Vector& v) const;
  virtual RayRestriction ray_restriction_impl(const Vector& x,
                                              const Vector& d) const;

  virtual void note_value() const { ++counter_.values; }
  virtual void note_gradient() const { ++counter_.full_gradients; }
  virtual void note_partial() const { ++counter_.partials; }
  virtual void note_block_solve() const { ++counter_.block_solves; }

  void check_dim(const Vector& x, const char* where) const;

  mutable CallCounter counter_;

 private:
  int dim_;
};

// The regularized objective F_{L,x}(y) = f(y) + (L/2)||y - x||^2 handed to
// inner solvers. All oracle traffic is forwarded to (and counted on) the
// wrapped problem oracle, so one counter carries the whole run.
class ProxOracle final : public Oracle {
 public:
  ProxOracle(const Oracle& inner, double L, Vector center);

  double L() const { return L_; }
  const Vector& center() const { return center_; }
  const Oracle& inner() const { return inner_; }

  bool has_blocks() const override { return inner_.has_blocks(); }
  int block_count() const override { return inner_.block_count(); }
  std::pair<int, int> block_span(int b) const override {
    return inner_.block_span(b);
  }
  bool is_quadratic() const override { return inner_.is_quadratic(); }
  bool has_ray_restriction() const override {
    return inner_.has_ray_restriction();
  }

  const CallCounter& counter() const override { return inner_.counter(); }
  void reset_counter() const override { inner_.reset_counter(); }
  double value_weight() const override { return inner_.value_weight(); }

 protected:
  double value_impl(const Vector& y) const override;
  Vector gradient_impl(const Vector& y) const override;
  double partial_impl(int i, const Vector& y) const override;
  Vector block_argmin_impl(int b, const Vector& y) const override;
  Vector hessian_apply_impl(const Vector& v) const override;
  RayRestriction ray_restriction_impl(const Vector& x,
                                      const Vector& d) const override;

  // Forwarded calls already count on the inner oracle.
  void note_value() const override {}
  void note_gradient() const override {}
  void note_partial() const override {}
  void note_block_solve() const override {}

 private:
  const Oracle& inner_;
  double L_;
  Vector center_;
};

}  // namespace adacat
