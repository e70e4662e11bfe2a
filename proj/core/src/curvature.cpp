#include "osculant/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "osculant/multi_index.hpp"

namespace osculant {

namespace {

constexpr double kCompletionTol = 1e-12;
constexpr double kMismatchResidual = 1e300;

// d^alpha f as a jet-valued ambient vector.
JetVec partial_field(const std::vector<Jet>& f_jets, const MultiIndex& alpha) {
  JetVec out;
  out.reserve(f_jets.size());
  for (const Jet& fj : f_jets) {
    Jet d = fj;
    for (int v = 0; v < alpha.num_vars(); ++v)
      for (int rep = 0; rep < alpha[v]; ++rep) d = d.derivative_field(v);
    out.push_back(std::move(d));
  }
  return out;
}

// d^alpha f at the base point.
Vec partial_value(const std::vector<Jet>& f_jets, const MultiIndex& alpha) {
  Vec out(f_jets.size());
  for (size_t j = 0; j < f_jets.size(); ++j)
    out[j] = f_jets[j].derivative(alpha);
  return out;
}

// Coefficients c with tangent[j] = sum_a c(j,a) * jacobian[a], solved from
// the Gram system of the Jacobian columns.
Mat tangent_coefficients(const std::vector<Vec>& jacobian,
                         const std::vector<Vec>& tangent) {
  const int n = static_cast<int>(jacobian.size());
  Mat gram(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) gram(a, b) = dot(jacobian[static_cast<size_t>(a)],
                                                 jacobian[static_cast<size_t>(b)]);
  Mat c(n, n);
  for (int j = 0; j < n; ++j) {
    Vec rhs(static_cast<size_t>(n));
    for (int a = 0; a < n; ++a)
      rhs[static_cast<size_t>(a)] =
          dot(tangent[static_cast<size_t>(j)], jacobian[static_cast<size_t>(a)]);
    Vec x = solve_linear(gram, rhs);
    for (int a = 0; a < n; ++a) c(j, a) = x[static_cast<size_t>(a)];
  }
  return c;
}

// Orthonormal completion of `against` inside R^m, from the identity columns.
// Uses a fixed tiny tolerance: completing a basis is exact linear algebra,
// not a rank decision subject to the user's policy.
std::vector<Vec> complement_basis(const std::vector<Vec>& against, int m) {
  std::vector<Vec> identity;
  identity.reserve(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    Vec e(static_cast<size_t>(m), 0.0);
    e[static_cast<size_t>(i)] = 1.0;
    identity.push_back(std::move(e));
  }
  RankTolerance fixed{kCompletionTol};
  MgsResult r = mgs_pivoted(identity, against, fixed);
  return r.basis;
}

}  // namespace

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::max_order_reached: return "max_order_reached";
    case StopReason::rank_zero: return "rank_zero";
    case StopReason::ambient_exhausted: return "ambient_exhausted";
  }
  return "unknown";
}

// ============================================================================
// Frames
// ============================================================================

BasePointFrame tangent_frame(const std::vector<Jet>& f_jets, RankTolerance tol) {
  if (f_jets.empty()) throw std::invalid_argument("no jets given");
  const int n = f_jets.front().num_vars();
  if (f_jets.front().order() < 1)
    throw std::invalid_argument("tangent frame needs jets of order >= 1");

  std::vector<JetVec> columns;
  std::vector<int> blocks;
  std::vector<Vec> jacobian;
  for (int a = 0; a < n; ++a) {
    columns.push_back(partial_field(f_jets, MultiIndex::unit(n, a)));
    blocks.push_back(1);
    jacobian.push_back(jet_vec_value(columns.back()));
  }
  JetMgsResult mgs = mgs_pivoted_jets(columns, blocks, tol);
  if (static_cast<int>(mgs.frame.size()) < n)
    throw std::runtime_error(
        "not an immersion at the base point: Jacobian rank " +
        std::to_string(mgs.frame.size()) + " < " + std::to_string(n));

  BasePointFrame frame;
  frame.tangent_fields = mgs.frame;
  for (const JetVec& f : mgs.frame) frame.tangent.push_back(jet_vec_value(f));
  frame.coeffs_c = tangent_coefficients(jacobian, frame.tangent);
  return frame;
}

GradedFrame adapted_frame_fields(const std::vector<Jet>& f_jets,
                                 RankTolerance tol, int max_order) {
  if (f_jets.empty()) throw std::invalid_argument("no jets given");
  const int n = f_jets.front().num_vars();
  const int jet_order = f_jets.front().order();
  if (max_order < 1) throw std::invalid_argument("max_order must be >= 1");
  if (jet_order < max_order + 1)
    throw std::invalid_argument("frame construction needs jets of order max_order + 1");

  std::vector<JetVec> columns;
  std::vector<int> blocks;
  for (int d = 1; d <= max_order + 1; ++d) {
    for (const MultiIndex& alpha : multi_indices_of_degree(n, d)) {
      columns.push_back(partial_field(f_jets, alpha));
      blocks.push_back(d);
    }
  }
  JetMgsResult mgs = mgs_pivoted_jets(columns, blocks, tol);

  GradedFrame graded;
  graded.levels.assign(static_cast<size_t>(max_order) + 1, {});
  graded.level_ill.assign(static_cast<size_t>(max_order) + 1, 0);
  for (size_t i = 0; i < mgs.frame.size(); ++i) {
    int level = mgs.level_of[i] - 1;
    graded.levels[static_cast<size_t>(level)].push_back(mgs.frame[i]);
  }
  for (int level = 0; level <= max_order; ++level) {
    size_t block = static_cast<size_t>(level) + 1;
    if (block < mgs.block_near_threshold.size())
      graded.level_ill[static_cast<size_t>(level)] =
          mgs.block_near_threshold[block];
  }
  return graded;
}

// ============================================================================
// Recursion step
// ============================================================================

CurvatureLevel curvature_matrix(int level,
                                const std::vector<JetVec>& level_fields,
                                const Mat& coeffs_c,
                                const std::vector<Vec>& osc_basis,
                                int dim_ambient, RankTolerance tol) {
  const int n = coeffs_c.rows;
  CurvatureLevel out;
  out.order = level + 1;
  out.bound = binomial(n + out.order, out.order + 1);

  const int q = dim_ambient - static_cast<int>(osc_basis.size());
  if (q <= 0) return out;  // ambient exhausted: rank-0 level

  out.complement = complement_basis(osc_basis, dim_ambient);
  const int qq = static_cast<int>(out.complement.size());
  Mat p(qq, qq);

  double w_scale = 0.0;
  for (const JetVec& field : level_fields) {
    for (int j = 0; j < n; ++j) {
      // The derivative of the field along the j-th tangent vector at the
      // base point, then its complement coordinates.
      Vec d(static_cast<size_t>(dim_ambient), 0.0);
      for (int a = 0; a < n; ++a) {
        double c = coeffs_c(j, a);
        if (c == 0.0) continue;
        axpy(c, jet_vec_linear_coeff(field, a), d);
      }
      Vec w(static_cast<size_t>(qq));
      for (int t = 0; t < qq; ++t)
        w[static_cast<size_t>(t)] = dot(out.complement[static_cast<size_t>(t)], d);
      w_scale = std::max(w_scale, norm(w));
      for (int t = 0; t < qq; ++t)
        for (int s = 0; s < qq; ++s)
          p(t, s) += w[static_cast<size_t>(t)] * w[static_cast<size_t>(s)];
    }
  }

  out.matrix_p = p;
  SymEigen eig = sym_eigen(p);
  out.min_eigen_raw = eig.values.empty() ? 0.0 : eig.values.back();

  const double band = checks::kPsdBand * std::max(1.0, p.max_abs());
  out.spectrum = eig.values;
  for (double& lam : out.spectrum)
    if (lam < 0.0 && lam >= -band) lam = 0.0;

  // The eigenvalues are squared norms of the accumulated vectors, so the
  // pivot acceptance rule (residual > rel_tol * max(1, scale)) translates to
  // an absolute floor of its square. Without it a level whose matrix is pure
  // truncation noise would pass the relative test against its own largest
  // noise eigenvalue.
  const double floor_sq = tol.rel_tol * std::max(1.0, w_scale) *
                          tol.rel_tol * std::max(1.0, w_scale);
  const double lead = out.spectrum.empty() ? 0.0 : out.spectrum.front();
  if (lead <= floor_sq) {
    out.rank_k = 0;
    if (lead > floor_sq / 100.0) out.ill_conditioned = true;
  } else {
    if (lead < floor_sq * 100.0) out.ill_conditioned = true;
    out.rank_k = rank_positive(out.spectrum, tol);
  }
  for (int i = 0; i < out.rank_k; ++i) {
    out.curvatures.push_back(out.spectrum[static_cast<size_t>(i)]);
    Vec ambient(static_cast<size_t>(dim_ambient), 0.0);
    for (int t = 0; t < qq; ++t)
      axpy(eig.vectors(t, i), out.complement[static_cast<size_t>(t)], ambient);
    out.normal_vectors.push_back(std::move(ambient));
  }

  if (!out.spectrum.empty() && out.spectrum.front() > 0.0) {
    const double thresh = tol.rel_tol * out.spectrum.front();
    for (double lam : out.spectrum) {
      if (lam > thresh / 10.0 && lam < thresh * 10.0) {
        out.ill_conditioned = true;
        break;
      }
    }
  }
  return out;
}

// ============================================================================
// Oracle and checks
// ============================================================================

std::vector<int> oracle_flag_dims(const Immersion& im, const Vec& point,
                                  int max_order, RankTolerance tol) {
  if (max_order < 0) throw std::invalid_argument("max_order must be >= 0");
  std::vector<Jet> jets = eval_jet(im, point, max_order + 1);
  const int n = im.dim_domain;

  std::vector<Vec> partials;
  std::vector<int> degree_of;
  for (int d = 1; d <= max_order + 1; ++d) {
    for (const MultiIndex& alpha : multi_indices_of_degree(n, d)) {
      partials.push_back(partial_value(jets, alpha));
      degree_of.push_back(d);
    }
  }

  std::vector<int> dims;
  dims.reserve(static_cast<size_t>(max_order) + 1);
  for (int r = 0; r <= max_order; ++r) {
    std::vector<Vec> columns;
    for (size_t i = 0; i < partials.size(); ++i)
      if (degree_of[i] <= r + 1) columns.push_back(partials[i]);
    MgsResult mgs = mgs_pivoted(columns, {}, tol);
    dims.push_back(static_cast<int>(mgs.basis.size()));
  }
  return dims;
}

SymmetryCheck verify_symmetry(const Immersion& im, const Vec& point,
                              RankTolerance tol) {
  std::vector<Jet> jets = eval_jet(im, point, 2);
  const int n = im.dim_domain;
  const int m = im.dim_ambient;

  std::vector<Vec> jacobian;
  for (int a = 0; a < n; ++a)
    jacobian.push_back(partial_value(jets, MultiIndex::unit(n, a)));
  MgsResult tangent = mgs_pivoted(jacobian, {}, tol);
  if (static_cast<int>(tangent.basis.size()) < n)
    throw std::runtime_error("not an immersion at the base point");
  Mat c = tangent_coefficients(jacobian, tangent.basis);
  std::vector<Vec> normals = complement_basis(tangent.basis, m);

  // Second partials; symmetric in (a, b) by construction.
  std::vector<std::vector<Vec>> second(static_cast<size_t>(n),
                                       std::vector<Vec>(static_cast<size_t>(n)));
  double scale = 1.0;
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      MultiIndex alpha = MultiIndex::unit(n, a).plus(MultiIndex::unit(n, b));
      Vec s = partial_value(jets, alpha);
      scale = std::max(scale, norm(s));
      second[static_cast<size_t>(a)][static_cast<size_t>(b)] = s;
      second[static_cast<size_t>(b)][static_cast<size_t>(a)] = std::move(s);
    }
  }

  auto h = [&](size_t alpha_idx, int i, int j) {
    double acc = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        acc += c(i, a) * c(j, b) *
               dot(normals[alpha_idx],
                   second[static_cast<size_t>(a)][static_cast<size_t>(b)]);
    return acc;
  };

  SymmetryCheck check;
  check.scale = scale;
  for (size_t alpha_idx = 0; alpha_idx < normals.size(); ++alpha_idx)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        check.residual = std::max(
            check.residual, std::abs(h(alpha_idx, i, j) - h(alpha_idx, j, i)));
  return check;
}

// ============================================================================
// Full analysis
// ============================================================================

bool FlagReport::any_ill_conditioned() const {
  for (const CurvatureLevel& level : flag.levels)
    if (level.ill_conditioned) return true;
  return false;
}

FlagReport analyze(const Immersion& im, const Vec& point, int max_order,
                   RankTolerance tol) {
  if (max_order < 1) throw std::invalid_argument("max_order must be >= 1");
  if (static_cast<int>(point.size()) != im.dim_domain)
    throw std::invalid_argument("point dimension does not match the domain");

  FlagReport report;
  report.name = im.name;
  report.dim_domain = im.dim_domain;
  report.dim_ambient = im.dim_ambient;
  report.base_point = point;
  report.max_order = max_order;
  report.tolerance = tol;

  const int n = im.dim_domain;
  const int m = im.dim_ambient;
  std::vector<Jet> jets = eval_jet(im, point, max_order + 1);

  GradedFrame graded = adapted_frame_fields(jets, tol, max_order);
  if (static_cast<int>(graded.levels[0].size()) < n)
    throw std::runtime_error(
        "not an immersion at the base point: Jacobian rank " +
        std::to_string(graded.levels[0].size()) + " < " + std::to_string(n));

  std::vector<Vec> jacobian;
  for (int a = 0; a < n; ++a)
    jacobian.push_back(partial_value(jets, MultiIndex::unit(n, a)));
  std::vector<Vec> tangent_values;
  for (const JetVec& f : graded.levels[0])
    tangent_values.push_back(jet_vec_value(f));
  Mat coeffs_c = tangent_coefficients(jacobian, tangent_values);

  std::vector<Vec> osc_basis = tangent_values;
  report.flag.dims.push_back(n);
  report.flag.stop_reason = StopReason::max_order_reached;

  for (int l = 0; l < max_order; ++l) {
    CurvatureLevel level = curvature_matrix(l, graded.levels[static_cast<size_t>(l)],
                                            coeffs_c, osc_basis, m, tol);
    level.ill_conditioned =
        level.ill_conditioned || graded.level_ill[static_cast<size_t>(l) + 1] != 0;

    const int order = l + 1;
    const bool exhausted = static_cast<int>(osc_basis.size()) >= m;

    // Span cross-check for this order: the normal vectors against the
    // orthonormalized projections of the order-(l+2) partials off the
    // current osculating space.
    std::vector<Vec> raw;
    double span_scale = 1.0;
    for (const MultiIndex& alpha : multi_indices_of_degree(n, order + 1)) {
      raw.push_back(partial_value(jets, alpha));
      span_scale = std::max(span_scale, norm(raw.back()));
    }
    MgsResult projected = mgs_pivoted(raw, osc_basis, tol);
    report.span_residuals.push_back(
        span_distance(level.normal_vectors, projected.basis));
    report.span_scales.push_back(span_scale);

    report.flag.levels.push_back(level);
    report.flag.dims.push_back(report.flag.dims.back() + level.rank_k);

    if (exhausted) {
      report.flag.stop_reason = StopReason::ambient_exhausted;
      break;
    }
    if (level.rank_k == 0) {
      report.flag.stop_reason = StopReason::rank_zero;
      break;
    }
    for (const JetVec& f : graded.levels[static_cast<size_t>(l) + 1])
      osc_basis.push_back(jet_vec_value(f));
  }

  const int computed_orders = static_cast<int>(report.flag.levels.size());
  report.oracle_dims = oracle_flag_dims(im, point, computed_orders, tol);
  report.oracle_match = report.flag.dims == report.oracle_dims;

  for (const CurvatureLevel& level : report.flag.levels) {
    if (static_cast<std::uint64_t>(level.rank_k) > level.bound)
      report.bound_satisfied = false;
  }

  SymmetryCheck sym = verify_symmetry(im, point, tol);
  report.symmetry_residual = sym.residual;
  report.symmetry_scale = sym.scale;
  return report;
}

// ============================================================================
// Frame invariance
// ============================================================================

Mat random_orthogonal(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform01 = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  for (int attempt = 0; attempt < 16; ++attempt) {
    Mat g(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        // Box-Muller, written out so the stream is platform-independent.
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 1e-300) u1 = uniform01();
        g(i, j) = std::sqrt(-2.0 * std::log(u1)) *
                  std::cos(2.0 * 3.14159265358979323846 * u2);
      }
    }
    std::vector<Vec> cols;
    for (int j = 0; j < n; ++j) cols.push_back(g.col(j));
    RankTolerance fixed{1e-6};
    MgsResult mgs = mgs_pivoted(cols, {}, fixed);
    if (static_cast<int>(mgs.basis.size()) == n) {
      Mat q(n, n);
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) q(i, j) = mgs.basis[static_cast<size_t>(j)][static_cast<size_t>(i)];
      return q;
    }
  }
  throw std::runtime_error("failed to draw a random orthogonal matrix");
}

double compare_reports(const FlagReport& a, const FlagReport& b) {
  if (a.flag.levels.size() != b.flag.levels.size() ||
      a.flag.dims != b.flag.dims)
    return kMismatchResidual;
  double worst = 0.0;
  for (size_t i = 0; i < a.flag.levels.size(); ++i) {
    const CurvatureLevel& la = a.flag.levels[i];
    const CurvatureLevel& lb = b.flag.levels[i];
    if (la.rank_k != lb.rank_k) return kMismatchResidual;
    double lam_max = la.curvatures.empty() ? 0.0 : la.curvatures.front();
    double denom = std::max(1.0, lam_max);
    for (int k = 0; k < la.rank_k; ++k)
      worst = std::max(worst, std::abs(la.curvatures[static_cast<size_t>(k)] -
                                       lb.curvatures[static_cast<size_t>(k)]) /
                                  denom);
    worst = std::max(worst, span_distance(la.normal_vectors, lb.normal_vectors));
  }
  return worst;
}

double verify_frame_invariance(const Immersion& im, const Vec& point,
                               int max_order, RankTolerance tol,
                               std::uint64_t seed) {
  const int n = im.dim_domain;
  Mat q = random_orthogonal(n, seed);
  Immersion rotated = rotate_domain(im, q);
  Vec rotated_point(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l)
      rotated_point[static_cast<size_t>(i)] += q(l, i) * point[static_cast<size_t>(l)];

  FlagReport base = analyze(im, point, max_order, tol);
  FlagReport turned = analyze(rotated, rotated_point, max_order, tol);
  return compare_reports(base, turned);
}

}  // namespace osculant
