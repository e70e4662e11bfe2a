#pragma once

#include <vector>

#include "osculant/jet.hpp"

namespace osculant {

using Vec = std::vector<double>;

/// Dense real matrix, row-major.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

  static Mat identity(int n);

  double& operator()(int i, int j) {
    return data[static_cast<size_t>(i) * cols + j];
  }
  double operator()(int i, int j) const {
    return data[static_cast<size_t>(i) * cols + j];
  }

  Vec col(int j) const;
  double max_abs() const;
};

/// Relative threshold for every rank decision: pivot acceptance, positive
/// eigenvalue counting and oracle ranks all share one policy.
struct RankTolerance {
  double rel_tol = 1e-8;
};

// ============================================================================
// Vector helpers
// ============================================================================

double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);
void axpy(double s, const Vec& x, Vec& y);  // y += s * x

/// Sum of (v . b_i) b_i over an orthonormal basis.
Vec project_onto(const Vec& v, const std::vector<Vec>& basis);
/// v minus its projection onto the span of the basis.
Vec project_off(const Vec& v, const std::vector<Vec>& basis);

/// Frobenius norm of the difference of the two orthogonal projectors; zero
/// exactly when the spans agree.
double span_distance(const std::vector<Vec>& basis_a,
                     const std::vector<Vec>& basis_b);

/// Solves A x = b by Gaussian elimination with partial pivoting. A must be
/// square and nonsingular at working precision.
Vec solve_linear(Mat a, Vec b);

// ============================================================================
// Symmetric eigen-decomposition
// ============================================================================

struct SymEigen {
  Vec values;   // descending
  Mat vectors;  // orthonormal columns, matching order
};

/// Cyclic Jacobi rotations, iterated until the off-diagonal Frobenius norm
/// falls below 1e-14 of the matrix norm. Input must be square with asymmetry
/// at most 1e-10 relative; it is symmetrized before the sweep. Eigenvector
/// sign convention: the first entry with magnitude above 1e-8 is positive.
SymEigen sym_eigen(const Mat& a);

/// Count of eigenvalues above rel_tol * max(lambda_1, 0) in a descending
/// spectrum; zero when the leading eigenvalue is not positive.
int rank_positive(const Vec& eigenvalues_desc, RankTolerance tol);

// ============================================================================
// Pivoted modified Gram-Schmidt
// ============================================================================

struct MgsResult {
  std::vector<Vec> basis;   // orthonormal, orthogonal to `against`
  std::vector<int> pivots;  // accepted original column indices
  /// True when some accept/reject decision fell within a factor of 10 of the
  /// threshold; rank is then not trustworthy at this tolerance.
  bool near_threshold = false;
};

/// Greedy column-pivoted MGS: repeatedly accept the column with the largest
/// residual after projecting out `against` and the basis built so far, while
/// that residual exceeds rel_tol * max(1, largest initial column norm).
/// Ties within 1e-12 relative resolve to the lowest original index.
MgsResult mgs_pivoted(const std::vector<Vec>& columns,
                      const std::vector<Vec>& against, RankTolerance tol);

// ============================================================================
// Jet-valued Gram-Schmidt (frame fields)
// ============================================================================

/// Ambient vector whose entries are jets of a common shape.
using JetVec = std::vector<Jet>;

Vec jet_vec_value(const JetVec& v);
/// The coefficient vector of the first-order term in variable `var`, i.e.
/// the derivative of the field along u_var at the base point.
Vec jet_vec_linear_coeff(const JetVec& v, int var);
JetVec jet_vec_truncated(const JetVec& v, int order);
/// Dot product in jet arithmetic; operands are truncated to the smaller of
/// the two orders first.
Jet jet_dot(const JetVec& a, const JetVec& b);

struct JetMgsResult {
  std::vector<JetVec> frame;  // orthonormal as fields, to within truncation
  std::vector<int> pivots;
  std::vector<int> level_of;  // block label of each accepted pivot
  /// Indexed by block label; true when a decision in that block was within a
  /// factor of 10 of the threshold.
  std::vector<char> block_near_threshold;
};

/// Gram-Schmidt over jet-valued columns grouped into labeled blocks. Blocks
/// are processed in ascending label order and pivoting is greedy within each
/// block, so earlier blocks always dominate the frame grading. All accept and
/// reject decisions are made on the constant terms (the values at the base
/// point) with the same rule as mgs_pivoted; the jets then follow those
/// pivots, normalized in jet arithmetic so the output is an orthonormal frame
/// field in a neighborhood. Mixed truncation orders are handled by truncating
/// to the shorter operand.
JetMgsResult mgs_pivoted_jets(const std::vector<JetVec>& columns,
                              const std::vector<int>& block_of,
                              RankTolerance tol);

}  // namespace osculant
