#include "osculant/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace osculant {

namespace {

constexpr double kPivotTieRel = 1e-12;
constexpr double kNearThresholdFactor = 10.0;

void check_tolerance(RankTolerance tol) {
  if (!(tol.rel_tol > 0.0 && tol.rel_tol < 1.0))
    throw std::invalid_argument("rank tolerance must be in (0, 1)");
}

}  // namespace

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vec Mat::col(int j) const {
  Vec v(static_cast<size_t>(rows));
  for (int i = 0; i < rows; ++i) v[static_cast<size_t>(i)] = (*this)(i, j);
  return v;
}

double Mat::max_abs() const {
  double m = 0.0;
  for (double x : data) m = std::max(m, std::abs(x));
  return m;
}

double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector size mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

void axpy(double s, const Vec& x, Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vector size mismatch");
  for (size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

Vec project_onto(const Vec& v, const std::vector<Vec>& basis) {
  Vec out(v.size(), 0.0);
  for (const Vec& b : basis) axpy(dot(v, b), b, out);
  return out;
}

Vec project_off(const Vec& v, const std::vector<Vec>& basis) {
  Vec out = v;
  for (const Vec& b : basis) axpy(-dot(out, b), b, out);
  return out;
}

double span_distance(const std::vector<Vec>& basis_a,
                     const std::vector<Vec>& basis_b) {
  size_t dim = 0;
  if (!basis_a.empty()) dim = basis_a.front().size();
  else if (!basis_b.empty()) dim = basis_b.front().size();
  else return 0.0;
  for (const Vec& v : basis_a)
    if (v.size() != dim) throw std::invalid_argument("basis dimension mismatch");
  for (const Vec& v : basis_b)
    if (v.size() != dim) throw std::invalid_argument("basis dimension mismatch");

  double sq = 0.0;
  for (size_t i = 0; i < dim; ++i) {
    for (size_t j = 0; j < dim; ++j) {
      double pa = 0.0, pb = 0.0;
      for (const Vec& v : basis_a) pa += v[i] * v[j];
      for (const Vec& v : basis_b) pb += v[i] * v[j];
      double d = pa - pb;
      sq += d * d;
    }
  }
  return std::sqrt(sq);
}

Vec solve_linear(Mat a, Vec b) {
  if (a.rows != a.cols || static_cast<size_t>(a.rows) != b.size())
    throw std::invalid_argument("solve_linear shape mismatch");
  const int n = a.rows;
  for (int k = 0; k < n; ++k) {
    int pivot = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(pivot, k))) pivot = i;
    if (a(pivot, k) == 0.0)
      throw std::runtime_error("solve_linear: singular system");
    if (pivot != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(pivot, j));
      std::swap(b[static_cast<size_t>(k)], b[static_cast<size_t>(pivot)]);
    }
    for (int i = k + 1; i < n; ++i) {
      double f = a(i, k) / a(k, k);
      if (f == 0.0) continue;
      for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      b[static_cast<size_t>(i)] -= f * b[static_cast<size_t>(k)];
    }
  }
  Vec x(static_cast<size_t>(n), 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double acc = b[static_cast<size_t>(i)];
    for (int j = i + 1; j < n; ++j) acc -= a(i, j) * x[static_cast<size_t>(j)];
    x[static_cast<size_t>(i)] = acc / a(i, i);
  }
  return x;
}

// ============================================================================
// Jacobi eigen-decomposition
// ============================================================================

SymEigen sym_eigen(const Mat& input) {
  if (input.rows != input.cols)
    throw std::invalid_argument("sym_eigen requires a square matrix");
  const int n = input.rows;
  if (n == 0) return SymEigen{};

  double max_entry = input.max_abs();
  double max_asym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      max_asym = std::max(max_asym, std::abs(input(i, j) - input(j, i)));
  if (max_asym > 1e-10 * std::max(max_entry, 1e-300) && max_entry > 0.0)
    throw std::invalid_argument("sym_eigen: input is too far from symmetric");

  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (input(i, j) + input(j, i));

  Mat v = Mat::identity(n);

  double frob = 0.0;
  for (double x : a.data) frob += x * x;
  frob = std::sqrt(frob);
  const double target = 1e-14 * frob;

  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += 2.0 * a(i, j) * a(i, j);
    off = std::sqrt(off);
    if (off <= target || frob == 0.0) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (apq == 0.0) continue;
        double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = (tau >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;

        double app = a(p, p), aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r != p && r != q) {
            double arp = a(r, p), arq = a(r, q);
            a(r, p) = c * arp - s * arq;
            a(p, r) = a(r, p);
            a(r, q) = s * arp + c * arq;
            a(q, r) = a(r, q);
          }
          double vrp = v(r, p), vrq = v(r, q);
          v(r, p) = c * vrp - s * vrq;
          v(r, q) = s * vrp + c * vrq;
        }
      }
    }
  }

  std::vector<int> idx(static_cast<size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int i, int j) { return a(i, i) > a(j, j); });

  SymEigen result;
  result.values.resize(static_cast<size_t>(n));
  result.vectors = Mat(n, n);
  for (int k = 0; k < n; ++k) {
    int src = idx[static_cast<size_t>(k)];
    result.values[static_cast<size_t>(k)] = a(src, src);
    double sign = 1.0;
    for (int r = 0; r < n; ++r) {
      double e = v(r, src);
      if (std::abs(e) > 1e-8) {
        sign = e > 0.0 ? 1.0 : -1.0;
        break;
      }
    }
    for (int r = 0; r < n; ++r) result.vectors(r, k) = sign * v(r, src);
  }
  return result;
}

int rank_positive(const Vec& eigenvalues_desc, RankTolerance tol) {
  check_tolerance(tol);
  if (eigenvalues_desc.empty()) return 0;
  double lead = eigenvalues_desc.front();
  if (!(lead > 0.0)) return 0;
  double thresh = tol.rel_tol * lead;
  int count = 0;
  for (double lam : eigenvalues_desc) {
    if (lam > thresh) ++count;
  }
  return count;
}

// ============================================================================
// Pivoted MGS over reals
// ============================================================================

MgsResult mgs_pivoted(const std::vector<Vec>& columns,
                      const std::vector<Vec>& against, RankTolerance tol) {
  check_tolerance(tol);
  MgsResult result;
  if (columns.empty()) return result;
  const size_t dim = columns.front().size();
  for (const Vec& c : columns)
    if (c.size() != dim) throw std::invalid_argument("column dimension mismatch");
  for (const Vec& b : against)
    if (b.size() != dim) throw std::invalid_argument("`against` dimension mismatch");

  double max_initial = 0.0;
  for (const Vec& c : columns) max_initial = std::max(max_initial, norm(c));
  const double thresh = tol.rel_tol * std::max(1.0, max_initial);

  std::vector<Vec> work = columns;
  std::vector<bool> used(columns.size(), false);
  for (Vec& w : work)
    for (const Vec& b : against) axpy(-dot(w, b), b, w);

  for (;;) {
    double best_norm = -1.0;
    for (size_t j = 0; j < work.size(); ++j) {
      if (used[j]) continue;
      best_norm = std::max(best_norm, norm(work[j]));
    }
    if (best_norm < 0.0) break;  // all consumed
    int pick = -1;
    for (size_t j = 0; j < work.size(); ++j) {
      if (used[j]) continue;
      if (norm(work[j]) >= best_norm * (1.0 - kPivotTieRel)) {
        pick = static_cast<int>(j);
        break;
      }
    }
    if (best_norm <= thresh) {
      if (best_norm > thresh / kNearThresholdFactor)
        result.near_threshold = true;
      break;
    }
    if (best_norm < kNearThresholdFactor * thresh) result.near_threshold = true;

    // Second orthogonalization pass for numerical cleanliness.
    Vec v = work[static_cast<size_t>(pick)];
    for (const Vec& b : against) axpy(-dot(v, b), b, v);
    for (const Vec& b : result.basis) axpy(-dot(v, b), b, v);
    double nv = norm(v);
    used[static_cast<size_t>(pick)] = true;
    if (nv <= thresh) {
      result.near_threshold = true;
      continue;
    }
    for (double& x : v) x /= nv;
    result.basis.push_back(v);
    result.pivots.push_back(pick);
    for (size_t j = 0; j < work.size(); ++j) {
      if (used[j]) continue;
      axpy(-dot(work[j], v), v, work[j]);
    }
  }
  return result;
}

// ============================================================================
// JetVec helpers and jet-valued MGS
// ============================================================================

Vec jet_vec_value(const JetVec& v) {
  Vec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i].value();
  return out;
}

Vec jet_vec_linear_coeff(const JetVec& v, int var) {
  Vec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    const Jet& j = v[i];
    if (j.order() < 1)
      throw std::invalid_argument("cannot differentiate an order-0 frame field");
    out[i] = j.coeff(MultiIndex::unit(j.num_vars(), var));
  }
  return out;
}

JetVec jet_vec_truncated(const JetVec& v, int order) {
  JetVec out;
  out.reserve(v.size());
  for (const Jet& j : v) out.push_back(j.truncated(order));
  return out;
}

Jet jet_dot(const JetVec& a, const JetVec& b) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("jet vector size mismatch");
  int order = std::min(a.front().order(), b.front().order());
  Jet acc = Jet::constant(0.0, a.front().num_vars(), order);
  for (size_t i = 0; i < a.size(); ++i)
    acc += a[i].truncated(order) * b[i].truncated(order);
  return acc;
}

namespace {

// w -= (w . b) b in jet arithmetic, truncating to w's order.
void jet_project_out(JetVec& w, const JetVec& b) {
  int order = std::min(w.front().order(), b.front().order());
  Jet coeff = jet_dot(w, b);  // order = min order
  for (size_t i = 0; i < w.size(); ++i) {
    Jet wi = w[i].truncated(order);
    wi -= coeff * b[i].truncated(order);
    w[i] = wi;
  }
}

double jet_vec_value_norm(const JetVec& v) { return norm(jet_vec_value(v)); }

}  // namespace

JetMgsResult mgs_pivoted_jets(const std::vector<JetVec>& columns,
                              const std::vector<int>& block_of,
                              RankTolerance tol) {
  check_tolerance(tol);
  if (columns.size() != block_of.size())
    throw std::invalid_argument("one block label per column required");
  JetMgsResult result;
  if (columns.empty()) return result;

  const size_t dim = columns.front().size();
  for (const JetVec& c : columns)
    if (c.size() != dim) throw std::invalid_argument("column dimension mismatch");

  int max_block = 0;
  for (int b : block_of) max_block = std::max(max_block, b);
  result.block_near_threshold.assign(static_cast<size_t>(max_block) + 1, 0);

  double max_initial = 0.0;
  for (const JetVec& c : columns)
    max_initial = std::max(max_initial, jet_vec_value_norm(c));
  const double thresh = tol.rel_tol * std::max(1.0, max_initial);

  std::vector<JetVec> work = columns;
  std::vector<bool> used(columns.size(), false);

  std::vector<int> block_labels;
  for (int b : block_of)
    if (std::find(block_labels.begin(), block_labels.end(), b) ==
        block_labels.end())
      block_labels.push_back(b);
  std::sort(block_labels.begin(), block_labels.end());

  for (int block : block_labels) {
    auto in_block = [&](size_t j) { return !used[j] && block_of[j] == block; };
    for (;;) {
      double best_norm = -1.0;
      for (size_t j = 0; j < work.size(); ++j)
        if (in_block(j)) best_norm = std::max(best_norm, jet_vec_value_norm(work[j]));
      if (best_norm < 0.0) break;
      int pick = -1;
      for (size_t j = 0; j < work.size(); ++j) {
        if (!in_block(j)) continue;
        if (jet_vec_value_norm(work[j]) >= best_norm * (1.0 - kPivotTieRel)) {
          pick = static_cast<int>(j);
          break;
        }
      }
      if (best_norm <= thresh) {
        if (best_norm > thresh / kNearThresholdFactor)
          result.block_near_threshold[static_cast<size_t>(block)] = 1;
        break;
      }
      if (best_norm < kNearThresholdFactor * thresh)
        result.block_near_threshold[static_cast<size_t>(block)] = 1;

      JetVec v = work[static_cast<size_t>(pick)];
      for (const JetVec& b : result.frame) jet_project_out(v, b);
      double nv = jet_vec_value_norm(v);
      used[static_cast<size_t>(pick)] = true;
      if (nv <= thresh) {
        result.block_near_threshold[static_cast<size_t>(block)] = 1;
        continue;
      }
      // Normalize as a field: divide by the jet square root of |v|^2 so the
      // frame stays orthonormal in a neighborhood, not just at the point.
      Jet norm_sq = jet_dot(v, v);
      Jet inv_len = Jet::constant(1.0, norm_sq.num_vars(), norm_sq.order()) /
                    sqrt(norm_sq);
      for (Jet& c : v) c = c.truncated(inv_len.order()) * inv_len;
      result.frame.push_back(v);
      result.pivots.push_back(pick);
      result.level_of.push_back(block);
      for (size_t j = 0; j < work.size(); ++j) {
        if (used[j]) continue;
        jet_project_out(work[j], result.frame.back());
      }
    }
  }
  return result;
}

}  // namespace osculant
