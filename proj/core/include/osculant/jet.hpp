#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "osculant/multi_index.hpp"

namespace osculant {

/// Coefficient layout shared by every jet with the same variable count and
/// truncation order: the graded list of multi-indices plus reverse lookup.
/// Layouts are cached; jets hold a shared pointer to theirs.
class JetLayout {
 public:
  static std::shared_ptr<const JetLayout> get(int num_vars, int order);

  int num_vars() const { return num_vars_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(indices_.size()); }
  const MultiIndex& index_at(int pos) const {
    return indices_[static_cast<size_t>(pos)];
  }
  const std::vector<MultiIndex>& indices() const { return indices_; }

  /// Position of alpha in this layout, or -1 when its degree exceeds the
  /// truncation order.
  int position(const MultiIndex& alpha) const;

 private:
  JetLayout(int num_vars, int order);

  int num_vars_;
  int order_;
  std::vector<MultiIndex> indices_;
  std::unordered_map<std::uint64_t, int> by_key_;
};

enum class Elementary { sin, cos, exp };

/// Truncated multivariate Taylor expansion of a scalar at a point.
///
/// Coefficients are Taylor-normalized (divided by alpha!), stored densely in
/// the graded order of JetLayout. Multiplication is then a plain truncated
/// convolution. Value semantics throughout; instances are immutable once
/// built apart from the arithmetic that produces new ones.
class Jet {
 public:
  Jet() = default;

  static Jet constant(double value, int num_vars, int order);
  /// Jet of the coordinate u_index expanded at `center`: constant term
  /// `center`, unit linear coefficient in its own slot when order >= 1.
  static Jet variable(int index, double center, int num_vars, int order);

  bool valid() const { return layout_ != nullptr; }
  int num_vars() const { return layout_ ? layout_->num_vars() : 0; }
  int order() const { return layout_ ? layout_->order() : 0; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  const JetLayout& layout() const { return *layout_; }

  /// Constant term (the value at the expansion point).
  double value() const;
  double coeff(const MultiIndex& alpha) const;
  /// Taylor-normalized coefficient by layout position.
  double coeff_at(int pos) const { return coeffs_[static_cast<size_t>(pos)]; }
  /// The true partial derivative at the center: alpha! * coeff(alpha).
  /// Throws when degree(alpha) exceeds the truncation order.
  double derivative(const MultiIndex& alpha) const;

  /// Drops all coefficients of degree > new_order. new_order must not
  /// exceed the current order.
  Jet truncated(int new_order) const;

  /// The jet of the partial derivative with respect to u_var, one order
  /// lower. Requires order >= 1.
  Jet derivative_field(int var) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& other);
  Jet& operator-=(const Jet& other);
  Jet& operator*=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator*(const Jet& a, const Jet& b);
  /// Truncated power-series division; the divisor needs a nonzero constant
  /// term (singular division otherwise).
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator/(Jet a, double s) { return a *= 1.0 / s; }

  /// Square root with positive branch; the constant term must be strictly
  /// positive.
  friend Jet sqrt(const Jet& a);
  friend Jet sin(const Jet& a);
  friend Jet cos(const Jet& a);
  friend Jet exp(const Jet& a);
  friend Jet elementary(const Jet& a, Elementary func);

  /// Integer power by repeated squaring; exponent >= 0.
  friend Jet pow(const Jet& a, int exponent);

 private:
  Jet(std::shared_ptr<const JetLayout> layout, std::vector<double> coeffs)
      : layout_(std::move(layout)), coeffs_(std::move(coeffs)) {}

  void require_same_shape(const Jet& other) const;

  std::shared_ptr<const JetLayout> layout_;
  std::vector<double> coeffs_;
};

}  // namespace osculant
