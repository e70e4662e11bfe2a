#pragma once

#include <cstdint>
#include <vector>

namespace osculant {

/// Exact binomial coefficient. Arguments stay small enough here that the
/// result always fits in 64 bits.
std::uint64_t binomial(int n, int k);

/// Exponent tuple of a monomial in a fixed number of variables.
///
/// The ordering used everywhere in this library is graded: lower total degree
/// first, and within one degree the tuple with the leading variables dominant
/// comes first. For two variables the degree-2 block therefore reads
/// (2,0), (1,1), (0,2), i.e. u1^2, u1*u2, u2^2. Jet coefficient layout,
/// derivative enumeration and generated monomial blocks all share this order.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents);

  static MultiIndex zero(int num_vars);
  /// The tuple e_var (single 1 in slot `var`, 0-based).
  static MultiIndex unit(int num_vars, int var);

  int num_vars() const { return static_cast<int>(exponents_.size()); }
  int degree() const { return degree_; }
  int operator[](int i) const { return exponents_[static_cast<size_t>(i)]; }
  const std::vector<int>& exponents() const { return exponents_; }

  /// alpha! as a double; exact for the small degrees used here.
  double factorial() const;

  MultiIndex plus(const MultiIndex& other) const;
  /// Component-wise difference; false if any component would go negative.
  bool minus(const MultiIndex& other, MultiIndex& out) const;

  /// Exponents packed 8 bits per variable; requires num_vars <= 8.
  std::uint64_t packed() const;

  bool operator==(const MultiIndex& other) const {
    return exponents_ == other.exponents_;
  }

 private:
  std::vector<int> exponents_;
  int degree_ = 0;
};

/// True when `a` precedes `b` in the graded order described above.
bool graded_lex_less(const MultiIndex& a, const MultiIndex& b);

inline bool operator<(const MultiIndex& a, const MultiIndex& b) {
  return graded_lex_less(a, b);
}

/// All tuples of the given degree, in the fixed within-degree order.
std::vector<MultiIndex> multi_indices_of_degree(int num_vars, int degree);

/// All tuples of degree <= max_degree in graded order.
std::vector<MultiIndex> multi_indices_up_to(int num_vars, int max_degree);

}  // namespace osculant
