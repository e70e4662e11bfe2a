// Test-only oracles, independent of the library code paths they check:
// central finite differences for derivatives and fraction-free Gaussian
// elimination for exact integer matrix rank.
#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "osculant/linalg.hpp"
#include "osculant/multi_index.hpp"

namespace oracles {

using RealFn = std::function<double(const osculant::Vec&)>;

/// Central-difference partial derivative for |alpha| <= 2, O(h^2) accurate.
inline double fd_partial(const RealFn& f, osculant::Vec x,
                         const osculant::MultiIndex& alpha, double h) {
  std::vector<int> vars;
  for (int v = 0; v < alpha.num_vars(); ++v)
    for (int k = 0; k < alpha[v]; ++k) vars.push_back(v);

  switch (vars.size()) {
    case 0:
      return f(x);
    case 1: {
      size_t i = static_cast<size_t>(vars[0]);
      osculant::Vec xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      return (f(xp) - f(xm)) / (2.0 * h);
    }
    case 2: {
      size_t i = static_cast<size_t>(vars[0]);
      size_t j = static_cast<size_t>(vars[1]);
      if (i == j) {
        osculant::Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        return (f(xp) - 2.0 * f(x) + f(xm)) / (h * h);
      }
      osculant::Vec xpp = x, xpm = x, xmp = x, xmm = x;
      xpp[i] += h; xpp[j] += h;
      xpm[i] += h; xpm[j] -= h;
      xmp[i] -= h; xmp[j] += h;
      xmm[i] -= h; xmm[j] -= h;
      return (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * h * h);
    }
    default:
      throw std::invalid_argument("fd_partial supports derivative order <= 2");
  }
}

/// Exact rank of an integer matrix by fraction-free (Bareiss) elimination
/// with column skipping. Entries must stay small enough that the minors fit
/// in 64 bits; fine for single-digit test matrices up to 8x8.
inline int exact_rank(std::vector<std::vector<long long>> m) {
  if (m.empty()) return 0;
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  int rank = 0, row = 0;
  long long prev = 1;
  for (int col = 0; col < cols && row < rows; ++col) {
    int pivot = -1;
    for (int i = row; i < rows; ++i) {
      if (m[static_cast<size_t>(i)][static_cast<size_t>(col)] != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(m[static_cast<size_t>(row)], m[static_cast<size_t>(pivot)]);
    for (int i = row + 1; i < rows; ++i) {
      for (int j = col + 1; j < cols; ++j) {
        m[static_cast<size_t>(i)][static_cast<size_t>(j)] =
            (m[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                 m[static_cast<size_t>(row)][static_cast<size_t>(col)] -
             m[static_cast<size_t>(i)][static_cast<size_t>(col)] *
                 m[static_cast<size_t>(row)][static_cast<size_t>(j)]) /
            prev;
      }
      m[static_cast<size_t>(i)][static_cast<size_t>(col)] = 0;
    }
    prev = m[static_cast<size_t>(row)][static_cast<size_t>(col)];
    ++row;
    ++rank;
  }
  return rank;
}

}  // namespace oracles
