#include "osculant/jet.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace osculant {

namespace {

// Divisor constant terms at or below this magnitude count as singular. The
// geometric layers impose their own, much larger, conditioning guards.
constexpr double kDivFloor = 1e-300;

std::mutex layout_mutex;
std::map<std::pair<int, int>, std::shared_ptr<const JetLayout>>& layout_cache() {
  static std::map<std::pair<int, int>, std::shared_ptr<const JetLayout>> cache;
  return cache;
}

}  // namespace

JetLayout::JetLayout(int num_vars, int order)
    : num_vars_(num_vars), order_(order) {
  indices_ = multi_indices_up_to(num_vars, order);
  by_key_.reserve(indices_.size());
  for (int i = 0; i < static_cast<int>(indices_.size()); ++i) {
    by_key_.emplace(indices_[static_cast<size_t>(i)].packed(), i);
  }
}

std::shared_ptr<const JetLayout> JetLayout::get(int num_vars, int order) {
  if (num_vars < 1 || num_vars > 8)
    throw std::invalid_argument("jet variable count must be in [1, 8]");
  if (order < 0) throw std::invalid_argument("jet order must be >= 0");
  std::lock_guard<std::mutex> lock(layout_mutex);
  auto& cache = layout_cache();
  auto key = std::make_pair(num_vars, order);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto layout = std::shared_ptr<const JetLayout>(new JetLayout(num_vars, order));
  cache.emplace(key, layout);
  return layout;
}

int JetLayout::position(const MultiIndex& alpha) const {
  if (alpha.num_vars() != num_vars_ || alpha.degree() > order_) return -1;
  auto it = by_key_.find(alpha.packed());
  return it == by_key_.end() ? -1 : it->second;
}

Jet Jet::constant(double value, int num_vars, int order) {
  auto layout = JetLayout::get(num_vars, order);
  std::vector<double> coeffs(static_cast<size_t>(layout->size()), 0.0);
  coeffs[0] = value;
  return Jet(std::move(layout), std::move(coeffs));
}

Jet Jet::variable(int index, double center, int num_vars, int order) {
  if (index < 0 || index >= num_vars)
    throw std::invalid_argument("jet variable index out of range");
  Jet j = constant(center, num_vars, order);
  if (order >= 1) {
    int pos = j.layout_->position(MultiIndex::unit(num_vars, index));
    j.coeffs_[static_cast<size_t>(pos)] = 1.0;
  }
  return j;
}

double Jet::value() const {
  if (!valid()) throw std::invalid_argument("operation on empty jet");
  return coeffs_[0];
}

double Jet::coeff(const MultiIndex& alpha) const {
  int pos = layout_->position(alpha);
  if (pos < 0) throw std::invalid_argument("multi-index outside jet truncation");
  return coeffs_[static_cast<size_t>(pos)];
}

double Jet::derivative(const MultiIndex& alpha) const {
  return alpha.factorial() * coeff(alpha);
}

Jet Jet::truncated(int new_order) const {
  if (!valid()) throw std::invalid_argument("operation on empty jet");
  if (new_order > order())
    throw std::invalid_argument("cannot truncate to a higher order");
  if (new_order == order()) return *this;
  auto layout = JetLayout::get(num_vars(), new_order);
  std::vector<double> coeffs(coeffs_.begin(),
                             coeffs_.begin() + layout->size());
  return Jet(std::move(layout), std::move(coeffs));
}

Jet Jet::derivative_field(int var) const {
  if (!valid()) throw std::invalid_argument("operation on empty jet");
  if (order() < 1)
    throw std::invalid_argument("cannot differentiate an order-0 jet");
  if (var < 0 || var >= num_vars())
    throw std::invalid_argument("jet variable index out of range");
  auto layout = JetLayout::get(num_vars(), order() - 1);
  std::vector<double> coeffs(static_cast<size_t>(layout->size()), 0.0);
  MultiIndex e = MultiIndex::unit(num_vars(), var);
  for (int pos = 0; pos < layout->size(); ++pos) {
    const MultiIndex& beta = layout->index_at(pos);
    MultiIndex source = beta.plus(e);
    int src_pos = layout_->position(source);
    coeffs[static_cast<size_t>(pos)] =
        (beta[var] + 1) * coeffs_[static_cast<size_t>(src_pos)];
  }
  return Jet(std::move(layout), std::move(coeffs));
}

void Jet::require_same_shape(const Jet& other) const {
  if (!valid() || !other.valid())
    throw std::invalid_argument("operation on empty jet");
  if (num_vars() != other.num_vars() || order() != other.order())
    throw std::invalid_argument("jet shape mismatch");
}

Jet Jet::operator-() const {
  if (!valid()) throw std::invalid_argument("operation on empty jet");
  Jet r = *this;
  for (double& c : r.coeffs_) c = -c;
  return r;
}

Jet& Jet::operator+=(const Jet& other) {
  require_same_shape(other);
  for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& other) {
  require_same_shape(other);
  for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

Jet& Jet::operator*=(double s) {
  if (!valid()) throw std::invalid_argument("operation on empty jet");
  for (double& c : coeffs_) c *= s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  a.require_same_shape(b);
  const JetLayout& layout = *a.layout_;
  const int order = layout.order();
  std::vector<double> coeffs(static_cast<size_t>(layout.size()), 0.0);
  for (int i = 0; i < layout.size(); ++i) {
    double ai = a.coeffs_[static_cast<size_t>(i)];
    if (ai == 0.0) continue;
    const MultiIndex& alpha = layout.index_at(i);
    for (int j = 0; j < layout.size(); ++j) {
      const MultiIndex& beta = layout.index_at(j);
      if (alpha.degree() + beta.degree() > order) break;
      double bj = b.coeffs_[static_cast<size_t>(j)];
      if (bj == 0.0) continue;
      int target = layout.position(alpha.plus(beta));
      coeffs[static_cast<size_t>(target)] += ai * bj;
    }
  }
  return Jet(a.layout_, std::move(coeffs));
}

Jet operator/(const Jet& a, const Jet& b) {
  a.require_same_shape(b);
  const double b0 = b.coeffs_[0];
  if (!(std::abs(b0) > kDivFloor))
    throw std::domain_error("singular jet division: divisor constant term is (near) zero");
  const JetLayout& layout = *a.layout_;
  std::vector<double> q(static_cast<size_t>(layout.size()), 0.0);
  // Solve layer by layer in increasing degree:
  //   q_t = (a_t - sum_{deg(beta)>=1} b_beta * q_{t-beta}) / b_0.
  for (int t = 0; t < layout.size(); ++t) {
    const MultiIndex& target = layout.index_at(t);
    double acc = a.coeffs_[static_cast<size_t>(t)];
    for (int j = 0; j < layout.size(); ++j) {
      const MultiIndex& beta = layout.index_at(j);
      if (beta.degree() == 0) continue;
      if (beta.degree() > target.degree()) break;
      double bj = b.coeffs_[static_cast<size_t>(j)];
      if (bj == 0.0) continue;
      MultiIndex rest;
      if (!target.minus(beta, rest)) continue;
      acc -= bj * q[static_cast<size_t>(layout.position(rest))];
    }
    q[static_cast<size_t>(t)] = acc / b0;
  }
  return Jet(a.layout_, std::move(q));
}

Jet sqrt(const Jet& a) {
  if (!a.valid()) throw std::invalid_argument("operation on empty jet");
  const double a0 = a.coeffs_[0];
  if (!(a0 > 0.0))
    throw std::domain_error("jet sqrt requires a strictly positive constant term");
  const JetLayout& layout = *a.layout_;
  std::vector<double> s(static_cast<size_t>(layout.size()), 0.0);
  s[0] = std::sqrt(a0);
  // 2 s_0 s_t = a_t - sum over nonconstant pairs p + r = t of s_p s_r.
  for (int t = 1; t < layout.size(); ++t) {
    const MultiIndex& target = layout.index_at(t);
    double acc = a.coeffs_[static_cast<size_t>(t)];
    for (int p = 1; p < layout.size(); ++p) {
      const MultiIndex& alpha = layout.index_at(p);
      if (alpha.degree() >= target.degree()) break;
      double sp = s[static_cast<size_t>(p)];
      if (sp == 0.0) continue;
      MultiIndex rest;
      if (!target.minus(alpha, rest)) continue;
      if (rest.degree() == 0) continue;
      acc -= sp * s[static_cast<size_t>(layout.position(rest))];
    }
    s[static_cast<size_t>(t)] = acc / (2.0 * s[0]);
  }
  return Jet(a.layout_, std::move(s));
}

Jet elementary(const Jet& a, Elementary func) {
  if (!a.valid()) throw std::invalid_argument("operation on empty jet");
  const int order = a.order();
  const double a0 = a.coeffs_[0];
  // Taylor coefficients of the outer univariate function at a0; exactly
  // order + 1 terms, composed with the nilpotent part by Horner evaluation.
  std::vector<double> series(static_cast<size_t>(order) + 1, 0.0);
  double kfact = 1.0;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) kfact *= k;
    double dk = 0.0;
    switch (func) {
      case Elementary::exp:
        dk = std::exp(a0);
        break;
      case Elementary::sin:
        switch (k % 4) {
          case 0: dk = std::sin(a0); break;
          case 1: dk = std::cos(a0); break;
          case 2: dk = -std::sin(a0); break;
          case 3: dk = -std::cos(a0); break;
        }
        break;
      case Elementary::cos:
        switch (k % 4) {
          case 0: dk = std::cos(a0); break;
          case 1: dk = -std::sin(a0); break;
          case 2: dk = -std::cos(a0); break;
          case 3: dk = std::sin(a0); break;
        }
        break;
    }
    series[static_cast<size_t>(k)] = dk / kfact;
  }
  Jet nilpotent = a;
  nilpotent.coeffs_[0] = 0.0;
  Jet result = Jet::constant(series[static_cast<size_t>(order)], a.num_vars(), order);
  for (int k = order - 1; k >= 0; --k) {
    result = result * nilpotent;
    result.coeffs_[0] += series[static_cast<size_t>(k)];
  }
  return result;
}

Jet sin(const Jet& a) { return elementary(a, Elementary::sin); }
Jet cos(const Jet& a) { return elementary(a, Elementary::cos); }
Jet exp(const Jet& a) { return elementary(a, Elementary::exp); }

Jet pow(const Jet& a, int exponent) {
  if (!a.valid()) throw std::invalid_argument("operation on empty jet");
  if (exponent < 0) throw std::invalid_argument("jet pow requires exponent >= 0");
  Jet result = Jet::constant(1.0, a.num_vars(), a.order());
  Jet base = a;
  int e = exponent;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

}  // namespace osculant
