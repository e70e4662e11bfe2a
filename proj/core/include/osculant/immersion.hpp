#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "osculant/expression.hpp"

namespace osculant {

/// A parametrized map f: R^n -> R^m given by one expression per ambient
/// component. Whether it is an immersion at a given point (Jacobian of full
/// rank) is checked where the analysis needs it.
struct Immersion {
  std::string name;
  int dim_domain = 0;   // n >= 1
  int dim_ambient = 0;  // m >= n
  std::vector<Expr> components;
};

Vec eval_point(const Immersion& im, const Vec& point);

/// Jets of every component at the point, order >= 1. The alpha coefficient of
/// the j-th result times alpha! is the partial derivative of f_j.
std::vector<Jet> eval_jet(const Immersion& im, const Vec& point, int order);

/// Polynomial embedding whose monomial blocks occupy fresh ambient axes:
/// components u_1..u_n followed, for each degree d = 2..r+1, by every
/// monomial of degree d in the fixed graded order, each scaled by its own
/// coefficient. With the default all-ones coefficients this attains the
/// maximal normal ranks at the origin. Every supplied coefficient must be
/// nonzero; the list, when given, must match the monomial count.
Immersion extremal_example(int n, int r, const std::vector<double>& coefficients = {});

/// Number of monomial coefficients extremal_example(n, r) takes.
int extremal_coefficient_count(int n, int r);

/// First n components are u_i plus random terms of degree 2..max_degree; the
/// remaining components are random polynomials of degree 1..max_degree with
/// zero constant term. Coefficients are uniform in [-1, 1] and the result is
/// identical for identical seeds on every platform.
Immersion random_polynomial_immersion(int n, int m, int max_degree,
                                      std::uint64_t seed);

/// The immersion u -> f(Q u) for an orthogonal matrix Q, built by
/// substituting each variable with the corresponding linear combination.
Immersion rotate_domain(const Immersion& im, const Mat& q);

// ============================================================================
// Spec files
// ============================================================================

/// Error in a surface definition file, with its 1-based line number.
struct SpecFileError : std::runtime_error {
  SpecFileError(const std::string& message, int line_)
      : std::runtime_error(message), line(line_) {}
  int line;
};

struct ImmersionSpec {
  Immersion immersion;
  Vec base_point;  // defaults to the origin
  int max_order = 2;
};

/// Parses the line-oriented `key = value` format:
///
///   name = helix
///   dim_domain = 1
///   components = ["cos(u1)", "sin(u1)", "u1"]
///   base_point = [0]
///   max_order = 2
///
/// `name`, `dim_domain` and `components` are required; `base_point` defaults
/// to the origin and `max_order` to 2. Lists may span multiple lines. Blank
/// lines and lines starting with '#' are ignored.
ImmersionSpec load_spec(std::string_view text);
ImmersionSpec load_spec_file(const std::string& path);

/// Renders a spec in the exact format load_spec reads.
std::string save_spec(const ImmersionSpec& spec);
void save_spec_file(const ImmersionSpec& spec, const std::string& path);

}  // namespace osculant
