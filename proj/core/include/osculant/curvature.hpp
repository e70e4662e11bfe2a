#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "osculant/immersion.hpp"
#include "osculant/linalg.hpp"

namespace osculant {

/// Residual thresholds shared by the verification suite and the acceptance
/// tests. All are relative to the scale noted at the call site.
namespace checks {
inline constexpr double kPsdBand = 1e-10;
inline constexpr double kSymmetryTol = 1e-8;
inline constexpr double kEigenSpanTol = 1e-7;
inline constexpr double kFrameInvarianceTol = 1e-6;
}  // namespace checks

// ============================================================================
// Frames
// ============================================================================

/// Orthonormal tangent frame at the base point, both as point vectors and as
/// frame fields, plus the coefficients expressing it in the coordinate
/// derivative basis: Y_j = sum_a c(j,a) d_a f.
struct BasePointFrame {
  std::vector<Vec> tangent;
  std::vector<JetVec> tangent_fields;
  Mat coeffs_c;
};

/// Throws when the Jacobian at the base point has rank below the domain
/// dimension (the map is not an immersion there).
BasePointFrame tangent_frame(const std::vector<Jet>& f_jets, RankTolerance tol);

/// Orthonormal frame fields graded by derivative level: levels[0] spans the
/// tangent space, levels[l] the order-l normal directions, taken from the
/// degree-(l+1) derivative block. A degree-d block field carries jet order
/// (jet order of f) - d, so every level needed by the recursion keeps at
/// least first-order variation.
struct GradedFrame {
  std::vector<std::vector<JetVec>> levels;
  std::vector<char> level_ill;  // per level: a pivot decision was borderline
};

GradedFrame adapted_frame_fields(const std::vector<Jet>& f_jets,
                                 RankTolerance tol, int max_order);

// ============================================================================
// Curvature recursion
// ============================================================================

struct CurvatureLevel {
  int order = 0;
  /// The order-r normal curvature matrix in the complement-basis coordinates.
  Mat matrix_p;
  /// Orthonormal basis of the complement of the previous osculating space in
  /// which matrix_p is expressed.
  std::vector<Vec> complement;
  Vec spectrum;               // all eigenvalues, descending, clamped at zero
  double min_eigen_raw = 0.0; // smallest eigenvalue before clamping
  Vec curvatures;             // the rank_k positive eigenvalues
  std::vector<Vec> normal_vectors;  // ambient eigenvector images, orthonormal
  int rank_k = 0;
  std::uint64_t bound = 0;    // C(n + order, order + 1)
  bool ill_conditioned = false;
};

enum class StopReason { max_order_reached, rank_zero, ambient_exhausted };
const char* to_string(StopReason reason);

/// One step of the recursion: differentiates the level-l frame fields along
/// the tangent directions, projects onto the complement of the current
/// osculating space and accumulates the outer products; eigen-decomposition
/// then yields the order-(l+1) curvatures and normal vectors. An empty
/// complement produces a rank-0 level.
CurvatureLevel curvature_matrix(int level,
                                const std::vector<JetVec>& level_fields,
                                const Mat& coeffs_c,
                                const std::vector<Vec>& osc_basis,
                                int dim_ambient, RankTolerance tol);

// ============================================================================
// Full analysis
// ============================================================================

struct OsculatingFlag {
  std::vector<CurvatureLevel> levels;
  /// dims[r] is the dimension of the order-r osculating space; dims[0] is the
  /// domain dimension.
  std::vector<int> dims;
  StopReason stop_reason = StopReason::max_order_reached;
};

struct FlagReport {
  std::string name;
  int dim_domain = 0;
  int dim_ambient = 0;
  Vec base_point;
  int max_order = 0;
  RankTolerance tolerance;

  OsculatingFlag flag;

  /// Independent derivative-stack dimensions for the same orders as
  /// flag.dims; equality is the cross-check of the whole recursion.
  std::vector<int> oracle_dims;

  std::vector<double> span_residuals;  // per level
  std::vector<double> span_scales;
  double symmetry_residual = 0.0;
  double symmetry_scale = 1.0;
  std::optional<double> frame_invariance_residual;

  bool bound_satisfied = true;
  bool oracle_match = true;

  bool any_ill_conditioned() const;
};

/// Runs the recursion up to max_order (stopping early at rank zero or when
/// the ambient space is exhausted), the derivative-stack oracle, the span
/// cross-checks and the symmetry check, and assembles the report.
FlagReport analyze(const Immersion& im, const Vec& point, int max_order,
                   RankTolerance tol = {});

/// Dimension of the order-r osculating space for r = 0..max_order, each
/// computed as the rank of the stacked partial derivatives of order <= r+1.
/// Shares nothing with the frame-field recursion beyond jet evaluation.
std::vector<int> oracle_flag_dims(const Immersion& im, const Vec& point,
                                  int max_order, RankTolerance tol = {});

struct SymmetryCheck {
  double residual = 0.0;
  double scale = 1.0;
};

/// Largest asymmetry of the second-fundamental-form coefficients over all
/// normal directions and tangent index pairs.
SymmetryCheck verify_symmetry(const Immersion& im, const Vec& point,
                              RankTolerance tol = {});

/// Re-analyzes with the parameter domain rotated by a seeded orthogonal
/// matrix and returns the worst disagreement between the two runs: relative
/// distance of the sorted curvature spectra and projector distance of the
/// normal spaces, per order.
double verify_frame_invariance(const Immersion& im, const Vec& point,
                               int max_order, RankTolerance tol,
                               std::uint64_t seed);

/// Worst per-order disagreement between two reports of the same surface;
/// helper for invariance checks with a precomputed baseline.
double compare_reports(const FlagReport& a, const FlagReport& b);

/// Deterministic random orthogonal matrix (Gram-Schmidt of a seeded Gaussian
/// sample).
Mat random_orthogonal(int n, std::uint64_t seed);

}  // namespace osculant
