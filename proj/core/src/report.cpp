#include "osculant/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <random>

#include "osculant/version.hpp"

namespace osculant {

// ============================================================================
// Deterministic JSON / CSV emission
// ============================================================================

namespace {

std::string num17(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, ptr);
}

void json_escape_into(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
}

class JsonWriter {
 public:
  std::string take() { return std::move(out_); }

  void begin_object() { open('{'); }
  void end_object() { close('}'); }
  void begin_array() { open('['); }
  void end_array() { close(']'); }

  void key(const std::string& name) {
    separate();
    indent();
    json_escape_into(out_, name);
    out_ += ": ";
    pending_value_ = true;
  }

  void value_string(const std::string& s) {
    separate();
    if (!pending_value_) indent();
    pending_value_ = false;
    json_escape_into(out_, s);
    mark();
  }
  void value_number(double v) { raw(num17(v)); }
  void value_int(long long v) { raw(std::to_string(v)); }
  void value_bool(bool v) { raw(v ? "true" : "false"); }

 private:
  void raw(const std::string& text) {
    separate();
    if (!pending_value_) indent();
    pending_value_ = false;
    out_ += text;
    mark();
  }
  void open(char c) {
    separate();
    if (!pending_value_) indent();
    pending_value_ = false;
    out_ += c;
    ++depth_;
    fresh_ = true;
  }
  void close(char c) {
    --depth_;
    if (!fresh_) {
      out_ += '\n';
      indent_raw();
    }
    out_ += c;
    mark();
  }
  void separate() {
    if (pending_value_) return;
    if (!fresh_ && depth_ > 0) out_ += ',';
    if (depth_ > 0) out_ += '\n';
  }
  void indent() {
    if (depth_ > 0) indent_raw();
  }
  void indent_raw() {
    for (int i = 0; i < depth_; ++i) out_ += "  ";
  }
  void mark() { fresh_ = false; }

  std::string out_;
  int depth_ = 0;
  bool fresh_ = true;
  bool pending_value_ = false;
};

}  // namespace

std::string report_json(const FlagReport& report, const std::string& stamp) {
  JsonWriter w;
  w.begin_object();

  w.key("meta");
  w.begin_object();
  w.key("name");
  w.value_string(report.name);
  w.key("n");
  w.value_int(report.dim_domain);
  w.key("m");
  w.value_int(report.dim_ambient);
  w.key("base_point");
  w.begin_array();
  for (double x : report.base_point) w.value_number(x);
  w.end_array();
  w.key("max_order");
  w.value_int(report.max_order);
  w.key("tolerance");
  w.value_number(report.tolerance.rel_tol);
  w.key("tool_version");
  w.value_string(kToolVersion);
  w.end_object();

  w.key("levels");
  w.begin_array();
  for (const CurvatureLevel& level : report.flag.levels) {
    w.begin_object();
    w.key("order");
    w.value_int(level.order);
    w.key("rank_k");
    w.value_int(level.rank_k);
    w.key("bound");
    w.value_int(static_cast<long long>(level.bound));
    w.key("curvatures");
    w.begin_array();
    for (double lam : level.curvatures) w.value_number(lam);
    w.end_array();
    w.key("sqrt_curvatures");
    w.begin_array();
    for (double lam : level.curvatures) w.value_number(std::sqrt(lam));
    w.end_array();
    w.key("normal_vectors");
    w.begin_array();
    for (const Vec& nv : level.normal_vectors) {
      w.begin_array();
      for (double x : nv) w.value_number(x);
      w.end_array();
    }
    w.end_array();
    w.key("ill_conditioned");
    w.value_bool(level.ill_conditioned);
    w.end_object();
  }
  w.end_array();

  w.key("dims");
  w.begin_array();
  for (int d : report.flag.dims) w.value_int(d);
  w.end_array();

  w.key("oracle_dims");
  w.begin_array();
  for (int d : report.oracle_dims) w.value_int(d);
  w.end_array();

  w.key("checks");
  w.begin_object();
  w.key("symmetry_residual");
  w.value_number(report.symmetry_residual);
  w.key("eigen_span_residuals");
  w.begin_array();
  for (double r : report.span_residuals) w.value_number(r);
  w.end_array();
  if (report.frame_invariance_residual.has_value()) {
    w.key("frame_invariance_residual");
    w.value_number(*report.frame_invariance_residual);
  }
  w.key("bound_satisfied");
  w.value_bool(report.bound_satisfied);
  w.key("oracle_match");
  w.value_bool(report.oracle_match);
  w.end_object();

  w.key("stop_reason");
  w.value_string(to_string(report.flag.stop_reason));

  if (!stamp.empty()) {
    w.key("stamp");
    w.value_string(stamp);
  }

  w.end_object();
  std::string out = w.take();
  out += '\n';
  return out;
}

std::string report_csv(const FlagReport& report) {
  std::string out = "order,index,curvature,sqrt_curvature\n";
  for (const CurvatureLevel& level : report.flag.levels) {
    for (size_t i = 0; i < level.curvatures.size(); ++i) {
      out += std::to_string(level.order);
      out += ',';
      out += std::to_string(i + 1);
      out += ',';
      out += num17(level.curvatures[i]);
      out += ',';
      out += num17(std::sqrt(level.curvatures[i]));
      out += '\n';
    }
  }
  return out;
}

// ============================================================================
// Verification suite
// ============================================================================

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::string join_dims(const std::vector<int>& dims) {
  std::string s;
  for (size_t i = 0; i < dims.size(); ++i) {
    if (i > 0) s += ',';
    s += std::to_string(dims[i]);
  }
  return s;
}

std::string fmt_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return std::string(buf);
}

struct ItemChecks {
  double worst_span = 0.0;
  double worst_invariance = 0.0;
};

// All suite checks for one surface; returns the first failure message.
std::string check_item(const ImmersionSpec& spec, RankTolerance tol,
                       int rotations, std::uint64_t rotation_seed_base,
                       SuiteItem& out) {
  FlagReport report =
      analyze(spec.immersion, spec.base_point, spec.max_order, tol);
  out.dims = join_dims(report.flag.dims);
  out.symmetry = report.symmetry_residual;

  const int n = report.dim_domain;
  for (const CurvatureLevel& level : report.flag.levels) {
    if (static_cast<std::uint64_t>(level.rank_k) > level.bound)
      return "rank bound violated at order " + std::to_string(level.order);
    if (level.min_eigen_raw <
        -checks::kPsdBand * std::max(1.0, level.matrix_p.max_abs()))
      return "negative eigenvalue at order " + std::to_string(level.order);
    if (level.ill_conditioned)
      return "ill-conditioned rank decision at order " +
             std::to_string(level.order);
  }
  if (!report.flag.levels.empty()) {
    if (report.flag.levels.front().rank_k > n * n)
      return "first rank exceeds n^2";
    for (size_t i = 1; i < report.flag.levels.size(); ++i) {
      int prev = report.flag.levels[i - 1].rank_k;
      int cur = report.flag.levels[i].rank_k;
      if (cur > n * prev) return "rank grows faster than n per order";
    }
  }

  if (!report.oracle_match)
    return "flag dimensions disagree with the derivative oracle (" +
           join_dims(report.flag.dims) + " vs " + join_dims(report.oracle_dims) +
           ")";

  if (report.symmetry_residual >
      checks::kSymmetryTol * report.symmetry_scale)
    return "second-form symmetry residual too large";

  for (size_t i = 0; i < report.span_residuals.size(); ++i) {
    out.span = std::max(out.span, report.span_residuals[i]);
    if (report.span_residuals[i] >
        checks::kEigenSpanTol * (1.0 + report.span_scales[i]))
      return "eigen-span residual too large at order " + std::to_string(i + 1);
  }

  for (int k = 0; k < rotations; ++k) {
    std::uint64_t seed = splitmix64(rotation_seed_base + static_cast<std::uint64_t>(k));
    Mat q = random_orthogonal(report.dim_domain, seed);
    Immersion rotated = rotate_domain(spec.immersion, q);
    Vec rotated_point(spec.base_point.size(), 0.0);
    for (int i = 0; i < report.dim_domain; ++i)
      for (int l = 0; l < report.dim_domain; ++l)
        rotated_point[static_cast<size_t>(i)] +=
            q(l, i) * spec.base_point[static_cast<size_t>(l)];
    FlagReport turned =
        analyze(rotated, rotated_point, spec.max_order, tol);
    double residual = compare_reports(report, turned);
    out.invariance = std::max(out.invariance, residual);
    if (residual > checks::kFrameInvarianceTol)
      return "frame invariance residual too large (rotation " +
             std::to_string(k) + ")";
  }
  return "";
}

}  // namespace

std::vector<ImmersionSpec> random_corpus(int count, std::uint64_t seed) {
  std::vector<ImmersionSpec> corpus;
  corpus.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    std::uint64_t s = splitmix64(seed ^ (0x9E3779B97F4A7C15ULL *
                                         (static_cast<std::uint64_t>(i) + 1)));
    std::mt19937_64 rng(s);
    int n = 1 + static_cast<int>(rng() % 3);
    int m = n + static_cast<int>(rng() % static_cast<std::uint64_t>(16 - n));
    int degree = 1 + static_cast<int>(rng() % 4);
    int max_order = 1 + static_cast<int>(rng() % 3);
    ImmersionSpec spec;
    spec.immersion = random_polynomial_immersion(n, m, degree, rng());
    spec.base_point.assign(static_cast<size_t>(n), 0.0);
    spec.max_order = max_order;
    corpus.push_back(std::move(spec));
  }
  return corpus;
}

SuiteResult run_verify_suite(const SuiteOptions& options) {
  SuiteResult result;
  std::vector<std::pair<std::string, ImmersionSpec>> items;

  if (options.corpus == SuiteOptions::Corpus::gallery) {
    for (const GalleryEntry& entry : builtin_gallery())
      items.emplace_back("gallery/" + entry.id, entry.spec);
  } else {
    std::vector<ImmersionSpec> corpus = random_corpus(options.count, options.seed);
    for (size_t i = 0; i < corpus.size(); ++i) {
      char label[32];
      std::snprintf(label, sizeof(label), "random[%03zu]", i);
      items.emplace_back(label, corpus[i]);
    }
  }

  const int rotations = options.corpus == SuiteOptions::Corpus::gallery
                            ? options.rotations_gallery
                            : options.rotations_random;

  for (size_t i = 0; i < items.size(); ++i) {
    SuiteItem item;
    item.label = items[i].first;
    std::uint64_t rotation_base =
        splitmix64(options.seed) ^ (0xA24BAED4963EE407ULL * (i + 1));
    try {
      item.failure = check_item(items[i].second, options.tol, rotations,
                                rotation_base, item);
    } catch (const std::exception& err) {
      item.failure = std::string("analysis error: ") + err.what();
    }
    item.ok = item.failure.empty();
    if (!item.ok) ++result.failed;
    result.items.push_back(std::move(item));
  }
  return result;
}

std::string format_suite_table(const SuiteResult& result) {
  std::string out;
  out += "item                    dims             symmetry   span       "
         "invariance  status\n";
  for (const SuiteItem& item : result.items) {
    char line[256];
    std::snprintf(line, sizeof(line), "%-23s %-16s %-10s %-10s %-11s %s\n",
                  item.label.c_str(), item.dims.c_str(),
                  fmt_sci(item.symmetry).c_str(), fmt_sci(item.span).c_str(),
                  fmt_sci(item.invariance).c_str(),
                  item.ok ? "ok" : "FAIL");
    out += line;
    if (!item.ok) {
      out += "    ";
      out += item.failure;
      out += '\n';
    }
  }
  char totals[128];
  std::snprintf(totals, sizeof(totals), "%zu items, %zu ok, %d failed\n",
                result.items.size(), result.items.size() - result.failed,
                result.failed);
  out += totals;
  return out;
}

}  // namespace osculant
