#include "osculant/multi_index.hpp"

#include <numeric>
#include <stdexcept>

namespace osculant {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<std::uint64_t>(n - k + i) /
             static_cast<std::uint64_t>(i);
  }
  return result;
}

MultiIndex::MultiIndex(std::vector<int> exponents)
    : exponents_(std::move(exponents)) {
  for (int e : exponents_) {
    if (e < 0) throw std::invalid_argument("multi-index exponent is negative");
    degree_ += e;
  }
}

MultiIndex MultiIndex::zero(int num_vars) {
  return MultiIndex(std::vector<int>(static_cast<size_t>(num_vars), 0));
}

MultiIndex MultiIndex::unit(int num_vars, int var) {
  if (var < 0 || var >= num_vars)
    throw std::invalid_argument("multi-index variable out of range");
  std::vector<int> e(static_cast<size_t>(num_vars), 0);
  e[static_cast<size_t>(var)] = 1;
  return MultiIndex(std::move(e));
}

double MultiIndex::factorial() const {
  double f = 1.0;
  for (int e : exponents_) {
    for (int i = 2; i <= e; ++i) f *= i;
  }
  return f;
}

MultiIndex MultiIndex::plus(const MultiIndex& other) const {
  if (num_vars() != other.num_vars())
    throw std::invalid_argument("multi-index variable count mismatch");
  std::vector<int> e(exponents_);
  for (size_t i = 0; i < e.size(); ++i) e[i] += other.exponents_[i];
  return MultiIndex(std::move(e));
}

bool MultiIndex::minus(const MultiIndex& other, MultiIndex& out) const {
  if (num_vars() != other.num_vars())
    throw std::invalid_argument("multi-index variable count mismatch");
  std::vector<int> e(exponents_);
  for (size_t i = 0; i < e.size(); ++i) {
    e[i] -= other.exponents_[i];
    if (e[i] < 0) return false;
  }
  out = MultiIndex(std::move(e));
  return true;
}

std::uint64_t MultiIndex::packed() const {
  if (num_vars() > 8)
    throw std::invalid_argument("packed multi-index supports at most 8 variables");
  std::uint64_t key = 0;
  for (int e : exponents_) {
    if (e > 255) throw std::invalid_argument("multi-index exponent too large");
    key = (key << 8) | static_cast<std::uint64_t>(e);
  }
  return key;
}

bool graded_lex_less(const MultiIndex& a, const MultiIndex& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  // Within a degree the tuple that is lexicographically larger comes first,
  // so u1-heavy monomials lead their block.
  return a.exponents() > b.exponents();
}

namespace {

void emit_degree(int num_vars, int slot, int remaining, std::vector<int>& work,
                 std::vector<MultiIndex>& out) {
  if (slot == num_vars - 1) {
    work[static_cast<size_t>(slot)] = remaining;
    out.emplace_back(work);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    work[static_cast<size_t>(slot)] = e;
    emit_degree(num_vars, slot + 1, remaining - e, work, out);
  }
}

}  // namespace

std::vector<MultiIndex> multi_indices_of_degree(int num_vars, int degree) {
  if (num_vars < 1) throw std::invalid_argument("need at least one variable");
  if (degree < 0) throw std::invalid_argument("degree is negative");
  std::vector<MultiIndex> out;
  out.reserve(binomial(num_vars + degree - 1, degree));
  std::vector<int> work(static_cast<size_t>(num_vars), 0);
  emit_degree(num_vars, 0, degree, work, out);
  return out;
}

std::vector<MultiIndex> multi_indices_up_to(int num_vars, int max_degree) {
  std::vector<MultiIndex> out;
  out.reserve(binomial(num_vars + max_degree, max_degree));
  for (int d = 0; d <= max_degree; ++d) {
    auto block = multi_indices_of_degree(num_vars, d);
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

}  // namespace osculant
