#include "osculant/immersion.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "osculant/multi_index.hpp"

namespace osculant {

namespace {

void check_point(const Immersion& im, const Vec& point) {
  if (static_cast<int>(point.size()) != im.dim_domain)
    throw std::invalid_argument("point dimension does not match the domain");
}

}  // namespace

Vec eval_point(const Immersion& im, const Vec& point) {
  check_point(im, point);
  Vec out;
  out.reserve(im.components.size());
  for (const Expr& c : im.components) out.push_back(eval(c, point));
  return out;
}

std::vector<Jet> eval_jet(const Immersion& im, const Vec& point, int order) {
  check_point(im, point);
  if (order < 1) throw std::invalid_argument("jet order must be >= 1");
  std::vector<Jet> out;
  out.reserve(im.components.size());
  for (const Expr& c : im.components)
    out.push_back(eval_jet(c, point, order));
  return out;
}

// ============================================================================
// Generators
// ============================================================================

namespace {

Expr monomial_expr(const MultiIndex& alpha, double coefficient) {
  Expr e;
  bool have_factor = false;
  for (int v = 0; v < alpha.num_vars(); ++v) {
    int exponent = alpha[v];
    if (exponent == 0) continue;
    Expr factor = exponent == 1 ? Expr::variable(v + 1)
                                : Expr::pow(Expr::variable(v + 1), exponent);
    e = have_factor ? Expr::mul(std::move(e), std::move(factor))
                    : std::move(factor);
    have_factor = true;
  }
  if (!have_factor) e = Expr::number(1.0);
  if (coefficient != 1.0) e = Expr::mul(Expr::number(coefficient), std::move(e));
  return e;
}

}  // namespace

int extremal_coefficient_count(int n, int r) {
  int count = 0;
  for (int d = 2; d <= r + 1; ++d)
    count += static_cast<int>(binomial(n + d - 1, d));
  return count;
}

Immersion extremal_example(int n, int r, const std::vector<double>& coefficients) {
  if (n < 1) throw std::invalid_argument("extremal example needs n >= 1");
  if (r < 1) throw std::invalid_argument("extremal example needs r >= 1");
  const int coeff_count = extremal_coefficient_count(n, r);
  if (!coefficients.empty() &&
      static_cast<int>(coefficients.size()) != coeff_count)
    throw std::invalid_argument("expected " + std::to_string(coeff_count) +
                                " coefficients");
  for (double c : coefficients)
    if (c == 0.0)
      throw std::invalid_argument("extremal coefficients must be nonzero");

  Immersion im;
  im.name = "extremal(n=" + std::to_string(n) + ",r=" + std::to_string(r) + ")";
  im.dim_domain = n;
  for (int v = 1; v <= n; ++v) im.components.push_back(Expr::variable(v));
  int next_coeff = 0;
  for (int d = 2; d <= r + 1; ++d) {
    for (const MultiIndex& alpha : multi_indices_of_degree(n, d)) {
      double c = coefficients.empty()
                     ? 1.0
                     : coefficients[static_cast<size_t>(next_coeff)];
      ++next_coeff;
      im.components.push_back(monomial_expr(alpha, c));
    }
  }
  im.dim_ambient = static_cast<int>(im.components.size());
  return im;
}

namespace {

// Uniform in [-1, 1] from the standardized mt19937_64 stream; written out
// explicitly so results are identical across standard libraries.
double uniform_pm1(std::mt19937_64& rng) {
  double u01 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u01 - 1.0;
}

}  // namespace

Immersion random_polynomial_immersion(int n, int m, int max_degree,
                                      std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("need n >= 1");
  if (m < n) throw std::invalid_argument("need m >= n");
  if (max_degree < 1) throw std::invalid_argument("need max_degree >= 1");

  std::mt19937_64 rng(seed);
  Immersion im;
  im.name = "random(n=" + std::to_string(n) + ",m=" + std::to_string(m) +
            ",deg=" + std::to_string(max_degree) +
            ",seed=" + std::to_string(seed) + ")";
  im.dim_domain = n;
  im.dim_ambient = m;

  for (int comp = 0; comp < m; ++comp) {
    Expr e;
    bool have_term = false;
    if (comp < n) {
      e = Expr::variable(comp + 1);
      have_term = true;
    }
    int first_degree = comp < n ? 2 : 1;
    for (int d = first_degree; d <= max_degree; ++d) {
      for (const MultiIndex& alpha : multi_indices_of_degree(n, d)) {
        double c = uniform_pm1(rng);
        Expr term = monomial_expr(alpha, c);
        e = have_term ? Expr::add(std::move(e), std::move(term))
                      : std::move(term);
        have_term = true;
      }
    }
    if (!have_term) e = Expr::number(0.0);
    im.components.push_back(std::move(e));
  }
  return im;
}

Immersion rotate_domain(const Immersion& im, const Mat& q) {
  if (q.rows != im.dim_domain || q.cols != im.dim_domain)
    throw std::invalid_argument("rotation dimension mismatch");
  const int n = im.dim_domain;

  // Substitution u_i -> sum_l q(i,l) u_l applied recursively.
  std::vector<Expr> substitutes;
  substitutes.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Expr sum;
    bool have = false;
    for (int l = 0; l < n; ++l) {
      Expr term = Expr::mul(Expr::number(q(i, l)), Expr::variable(l + 1));
      sum = have ? Expr::add(std::move(sum), std::move(term)) : std::move(term);
      have = true;
    }
    substitutes.push_back(std::move(sum));
  }

  struct Subst {
    const std::vector<Expr>& subs;
    Expr apply(const Expr& e) const {
      if (e.kind == Expr::Kind::variable)
        return subs[static_cast<size_t>(e.var_index - 1)];
      Expr out = e;
      for (Expr& child : out.children) child = apply(child);
      return out;
    }
  } subst{substitutes};

  Immersion out;
  out.name = im.name + "+rotated";
  out.dim_domain = im.dim_domain;
  out.dim_ambient = im.dim_ambient;
  out.components.reserve(im.components.size());
  for (const Expr& c : im.components) out.components.push_back(subst.apply(c));
  return out;
}

// ============================================================================
// Spec files
// ============================================================================

namespace {

std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct RawItem {
  std::string key;
  std::string value;
  int line;
};

std::vector<RawItem> split_items(std::string_view text) {
  std::vector<RawItem> items;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view line = eol == std::string_view::npos
                                ? text.substr(pos)
                                : text.substr(pos, eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw SpecFileError("expected 'key = value'", line_no);
    RawItem item;
    item.key = trim(std::string_view(stripped).substr(0, eq));
    item.value = trim(std::string_view(stripped).substr(eq + 1));
    item.line = line_no;
    if (item.key.empty()) throw SpecFileError("empty key", line_no);

    // A '[' list may span lines; keep consuming until brackets balance
    // outside of quoted strings.
    auto bracket_balance = [](const std::string& s) {
      int depth = 0;
      bool in_string = false;
      for (char c : s) {
        if (c == '"') in_string = !in_string;
        if (in_string) continue;
        if (c == '[') ++depth;
        if (c == ']') --depth;
      }
      return depth;
    };
    while (bracket_balance(item.value) > 0) {
      if (pos > text.size())
        throw SpecFileError("unterminated list for key '" + item.key + "'",
                            item.line);
      size_t next_eol = text.find('\n', pos);
      std::string_view cont = next_eol == std::string_view::npos
                                  ? text.substr(pos)
                                  : text.substr(pos, next_eol - pos);
      pos = next_eol == std::string_view::npos ? text.size() + 1 : next_eol + 1;
      ++line_no;
      item.value += ' ';
      item.value += trim(cont);
    }
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<std::string> parse_string_list(const std::string& value, int line) {
  std::string v = trim(value);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    throw SpecFileError("expected a [...] list", line);
  std::vector<std::string> out;
  size_t i = 1;
  const size_t end = v.size() - 1;
  for (;;) {
    while (i < end && (v[i] == ' ' || v[i] == '\t' || v[i] == ',')) ++i;
    if (i >= end) break;
    if (v[i] != '"')
      throw SpecFileError("list entries must be double-quoted strings", line);
    size_t close = v.find('"', i + 1);
    if (close == std::string::npos || close > end)
      throw SpecFileError("unterminated string in list", line);
    out.push_back(v.substr(i + 1, close - i - 1));
    i = close + 1;
  }
  return out;
}

std::vector<double> parse_number_list(const std::string& value, int line) {
  std::string v = trim(value);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    throw SpecFileError("expected a [...] list", line);
  std::vector<double> out;
  size_t i = 1;
  const size_t end = v.size() - 1;
  while (i < end) {
    while (i < end && (v[i] == ' ' || v[i] == '\t' || v[i] == ',')) ++i;
    if (i >= end) break;
    size_t start = i;
    while (i < end && v[i] != ',' && v[i] != ' ' && v[i] != '\t') ++i;
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(v.data() + start, v.data() + i, x);
    if (ec != std::errc() || ptr != v.data() + i)
      throw SpecFileError("invalid number '" + v.substr(start, i - start) + "'",
                          line);
    out.push_back(x);
  }
  return out;
}

int parse_int_value(const std::string& value, int line) {
  int x = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw SpecFileError("invalid integer '" + value + "'", line);
  return x;
}

std::string number_to_string(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

ImmersionSpec load_spec(std::string_view text) {
  ImmersionSpec spec;
  bool have_name = false, have_dim = false, have_components = false;
  bool have_base_point = false;
  std::vector<std::string> component_texts;
  int components_line = 0, base_point_line = 0;

  for (const RawItem& item : split_items(text)) {
    if (item.key == "name") {
      spec.immersion.name = item.value;
      have_name = true;
    } else if (item.key == "dim_domain") {
      spec.immersion.dim_domain = parse_int_value(item.value, item.line);
      if (spec.immersion.dim_domain < 1)
        throw SpecFileError("dim_domain must be >= 1", item.line);
      have_dim = true;
    } else if (item.key == "components") {
      component_texts = parse_string_list(item.value, item.line);
      components_line = item.line;
      have_components = true;
    } else if (item.key == "base_point") {
      spec.base_point = parse_number_list(item.value, item.line);
      base_point_line = item.line;
      have_base_point = true;
    } else if (item.key == "max_order") {
      spec.max_order = parse_int_value(item.value, item.line);
      if (spec.max_order < 1)
        throw SpecFileError("max_order must be >= 1", item.line);
    } else {
      throw SpecFileError("unknown key '" + item.key + "'", item.line);
    }
  }

  if (!have_name) throw SpecFileError("missing key 'name'", 1);
  if (!have_dim) throw SpecFileError("missing key 'dim_domain'", 1);
  if (!have_components) throw SpecFileError("missing key 'components'", 1);
  if (component_texts.empty())
    throw SpecFileError("components list is empty", components_line);

  const int n = spec.immersion.dim_domain;
  for (const std::string& ct : component_texts) {
    try {
      spec.immersion.components.push_back(parse_expression(ct, n));
    } catch (const ExprError& err) {
      throw SpecFileError("in component \"" + ct + "\" at position " +
                              std::to_string(err.position) + ": " + err.what(),
                          components_line);
    }
  }
  spec.immersion.dim_ambient = static_cast<int>(component_texts.size());
  if (spec.immersion.dim_ambient < n)
    throw SpecFileError("need at least dim_domain components", components_line);

  if (!have_base_point) {
    spec.base_point.assign(static_cast<size_t>(n), 0.0);
  } else if (static_cast<int>(spec.base_point.size()) != n) {
    throw SpecFileError("base_point needs dim_domain entries", base_point_line);
  }
  return spec;
}

ImmersionSpec load_spec_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return load_spec(buffer.str());
  } catch (const SpecFileError& err) {
    throw std::runtime_error(path + ":" + std::to_string(err.line) + ": " +
                             err.what());
  }
}

std::string save_spec(const ImmersionSpec& spec) {
  std::string out;
  out += "name = " + spec.immersion.name + "\n";
  out += "dim_domain = " + std::to_string(spec.immersion.dim_domain) + "\n";
  out += "components = [";
  for (size_t i = 0; i < spec.immersion.components.size(); ++i) {
    if (i > 0) out += ", ";
    out += '"';
    out += to_string(spec.immersion.components[i]);
    out += '"';
  }
  out += "]\n";
  out += "base_point = [";
  for (size_t i = 0; i < spec.base_point.size(); ++i) {
    if (i > 0) out += ", ";
    out += number_to_string(spec.base_point[i]);
  }
  out += "]\n";
  out += "max_order = " + std::to_string(spec.max_order) + "\n";
  return out;
}

void save_spec_file(const ImmersionSpec& spec, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << save_spec(spec);
}

}  // namespace osculant
