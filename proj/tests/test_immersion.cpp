#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "osculant/gallery.hpp"
#include "osculant/immersion.hpp"

using namespace osculant;

namespace {

Immersion from_components(const std::vector<std::string>& texts, int n) {
  Immersion im;
  im.name = "test";
  im.dim_domain = n;
  im.dim_ambient = static_cast<int>(texts.size());
  for (const std::string& t : texts)
    im.components.push_back(parse_expression(t, n));
  return im;
}

std::vector<std::string> component_strings(const Immersion& im) {
  std::vector<std::string> out;
  for (const Expr& c : im.components) out.push_back(to_string(c));
  return out;
}

}  // namespace

TEST_CASE("jet evaluation of simple curves") {
  Immersion parabola = from_components({"u1", "u1^2"}, 1);
  auto jets = eval_jet(parabola, {0.0}, 2);
  CHECK(jets[0].derivative(MultiIndex({2})) == 0.0);
  CHECK(jets[1].derivative(MultiIndex({2})) == 2.0);

  Immersion circle = from_components({"cos(u1)", "sin(u1)"}, 1);
  auto cj = eval_jet(circle, {0.0}, 2);
  CHECK(cj[0].derivative(MultiIndex({1})) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(cj[1].derivative(MultiIndex({1})) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cj[0].derivative(MultiIndex({2})) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(cj[1].derivative(MultiIndex({2})) == doctest::Approx(0.0).epsilon(1e-15));

  CHECK_THROWS_AS(eval_jet(parabola, {0.0}, 0), std::invalid_argument);
  CHECK_THROWS_AS(eval_jet(parabola, {0.0, 1.0}, 2), std::invalid_argument);
}

TEST_CASE("torus jets match finite differences") {
  Immersion torus = from_components({"(2 + 0.5*cos(u2))*cos(u1)",
                                     "(2 + 0.5*cos(u2))*sin(u1)",
                                     "0.5*sin(u2)"},
                                    2);
  const Vec point{0.3, -0.8};
  auto jets = eval_jet(torus, point, 2);
  for (int comp = 0; comp < 3; ++comp) {
    auto f = [&](const Vec& x) {
      return eval(torus.components[static_cast<size_t>(comp)], x);
    };
    for (const MultiIndex& alpha : multi_indices_up_to(2, 2)) {
      if (alpha.degree() == 0) continue;
      double fd = oracles::fd_partial(f, point, alpha, 1e-4);
      double exact = jets[static_cast<size_t>(comp)].derivative(alpha);
      CHECK(std::abs(exact - fd) <= 1e-6 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("jet evaluation is truncation-consistent") {
  // Evaluating at order R and dropping the top layer equals evaluating at
  // order R-1 directly.
  Immersion sphere = builtin_gallery()[4].spec.immersion;
  const Vec point{0.1, -0.2};
  for (int order = 2; order <= 4; ++order) {
    auto high = eval_jet(sphere, point, order);
    auto low = eval_jet(sphere, point, order - 1);
    for (size_t j = 0; j < high.size(); ++j) {
      Jet restricted = high[j].truncated(order - 1);
      for (size_t c = 0; c < restricted.coeffs().size(); ++c)
        CHECK(restricted.coeffs()[c] ==
              doctest::Approx(low[j].coeffs()[c]).epsilon(1e-14));
    }
  }
}

TEST_CASE("rank-maximal example generator") {
  SUBCASE("n=1, r=1 is the parabola") {
    Immersion im = extremal_example(1, 1);
    CHECK(im.dim_ambient == 2);
    CHECK(component_strings(im) == std::vector<std::string>{"u1", "u1^2"});
  }
  SUBCASE("n=2, r=1 lists the quadratic block in graded order") {
    Immersion im = extremal_example(2, 1);
    CHECK(im.dim_ambient == 5);
    CHECK(component_strings(im) ==
          std::vector<std::string>{"u1", "u2", "u1^2", "u1*u2", "u2^2"});
  }
  SUBCASE("n=2, r=2 adds the four cubics") {
    Immersion im = extremal_example(2, 2);
    CHECK(im.dim_ambient == 9);  // 2 + 3 + 4
    auto strings = component_strings(im);
    CHECK(strings[5] == "u1^3");
    CHECK(strings[6] == "u1^2*u2");
    CHECK(strings[7] == "u1*u2^2");
    CHECK(strings[8] == "u2^3");
  }
  SUBCASE("coefficients") {
    CHECK(extremal_coefficient_count(2, 2) == 7);
    std::vector<double> coeffs(7, 2.0);
    Immersion im = extremal_example(2, 2, coeffs);
    CHECK(eval_point(im, {1.0, 1.0})[2] == 2.0);
    coeffs[3] = 0.0;
    CHECK_THROWS_AS(extremal_example(2, 2, coeffs), std::invalid_argument);
    CHECK_THROWS_AS(extremal_example(2, 2, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(extremal_example(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(extremal_example(1, 0), std::invalid_argument);
  }
  SUBCASE("Jacobian at the origin is (I | 0)") {
    Immersion im = extremal_example(3, 2);
    auto jets = eval_jet(im, {0.0, 0.0, 0.0}, 1);
    for (int j = 0; j < im.dim_ambient; ++j) {
      for (int a = 0; a < 3; ++a) {
        double expected = j == a ? 1.0 : 0.0;
        CHECK(jets[static_cast<size_t>(j)].derivative(MultiIndex::unit(3, a)) ==
              expected);
      }
    }
  }
}

TEST_CASE("random polynomial immersions") {
  Immersion a = random_polynomial_immersion(2, 5, 3, 42);
  Immersion b = random_polynomial_immersion(2, 5, 3, 42);
  ImmersionSpec sa{a, {0.0, 0.0}, 2};
  ImmersionSpec sb{b, {0.0, 0.0}, 2};
  CHECK(save_spec(sa) == save_spec(sb));  // determinism
  CHECK(save_spec(sa) !=
        save_spec(ImmersionSpec{random_polynomial_immersion(2, 5, 3, 43),
                                {0.0, 0.0},
                                2}));

  CHECK(a.dim_ambient == 5);
  Vec at_zero = eval_point(a, {0.0, 0.0});
  for (double x : at_zero) CHECK(x == 0.0);  // zero constant terms

  // First n components are u_i plus higher-order terms.
  auto jets = eval_jet(a, {0.0, 0.0}, 1);
  CHECK(jets[0].derivative(MultiIndex({1, 0})) == 1.0);
  CHECK(jets[1].derivative(MultiIndex({0, 1})) == 1.0);

  CHECK_THROWS_AS(random_polynomial_immersion(2, 1, 3, 0), std::invalid_argument);
}

TEST_CASE("spec files") {
  SUBCASE("minimal file with defaults") {
    ImmersionSpec spec = load_spec(
        "name = parabola\n"
        "dim_domain = 1\n"
        "components = [\"u1\", \"u1^2\"]\n");
    CHECK(spec.immersion.name == "parabola");
    CHECK(spec.immersion.dim_ambient == 2);
    CHECK(spec.base_point == Vec{0.0});
    CHECK(spec.max_order == 2);
  }
  SUBCASE("comments, blank lines and multi-line lists") {
    ImmersionSpec spec = load_spec(
        "# a surface\n"
        "name = multi\n"
        "\n"
        "dim_domain = 2\n"
        "components = [\"u1\",\n"
        "  \"u2\",\n"
        "  \"u1*u2\"]\n"
        "base_point = [0.5, -0.5]\n"
        "max_order = 3\n");
    CHECK(spec.immersion.dim_ambient == 3);
    CHECK(spec.base_point == Vec{0.5, -0.5});
    CHECK(spec.max_order == 3);
  }
  SUBCASE("save/load round-trip") {
    ImmersionSpec spec;
    spec.immersion = extremal_example(2, 2);
    spec.base_point = {0.0, 0.0};
    spec.max_order = 2;
    std::string text = save_spec(spec);
    ImmersionSpec loaded = load_spec(text);
    CHECK(loaded.immersion.dim_ambient == 9);
    CHECK(save_spec(loaded) == text);
    for (size_t i = 0; i < spec.immersion.components.size(); ++i)
      CHECK(spec.immersion.components[i].structurally_equal(
          loaded.immersion.components[i]));
  }
  SUBCASE("errors carry line numbers") {
    CHECK_THROWS_AS(load_spec("name = x\ndim_domain = 1\n"), SpecFileError);
    try {
      load_spec("name = x\ndim_domain = 2\ncomponents = [\"u3\"]\n");
      FAIL("expected an error");
    } catch (const SpecFileError& err) {
      CHECK(err.line == 3);
      CHECK(std::string(err.what()).find("out of range") != std::string::npos);
    }
    CHECK_THROWS_AS(
        load_spec("name = x\ndim_domain = 0\ncomponents = [\"u1\"]\n"),
        SpecFileError);
    CHECK_THROWS_AS(load_spec("name = x\ndim_domain = 1\n"
                              "components = [\"u1\", \"u1\"]\nmax_order = 0\n"),
                    SpecFileError);
    CHECK_THROWS_AS(load_spec("name = x\ndim_domain = 1\n"
                              "components = [\"u1\", \"u1\"]\nbase_point = [1, 2]\n"),
                    SpecFileError);
    CHECK_THROWS_AS(load_spec("nonsense line\n"), SpecFileError);
    CHECK_THROWS_AS(load_spec("name = x\nwhat = 1\n"), SpecFileError);
    CHECK_THROWS_AS(load_spec("name = x\ndim_domain = 1\ncomponents = [\"u1\"\n"),
                    SpecFileError);
  }
}

TEST_CASE("domain rotation") {
  Immersion torus = from_components({"(2 + 0.5*cos(u2))*cos(u1)",
                                     "(2 + 0.5*cos(u2))*sin(u1)",
                                     "0.5*sin(u2)"},
                                    2);
  Mat q(2, 2);
  q(0, 0) = 0.6; q(0, 1) = 0.8;
  q(1, 0) = -0.8; q(1, 1) = 0.6;
  Immersion rotated = rotate_domain(torus, q);

  const Vec u{0.2, -0.4};
  Vec qu{q(0, 0) * u[0] + q(0, 1) * u[1], q(1, 0) * u[0] + q(1, 1) * u[1]};
  Vec lhs = eval_point(rotated, u);
  Vec rhs = eval_point(torus, qu);
  for (size_t i = 0; i < lhs.size(); ++i)
    CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-14));

  CHECK_THROWS_AS(rotate_domain(torus, Mat::identity(3)), std::invalid_argument);
}

TEST_CASE("gallery entries are well-formed") {
  const auto& gallery = builtin_gallery();
  CHECK(gallery.size() == 9);
  for (const GalleryEntry& entry : gallery) {
    CHECK(entry.spec.immersion.dim_ambient >= entry.spec.immersion.dim_domain);
    CHECK(static_cast<int>(entry.spec.base_point.size()) ==
          entry.spec.immersion.dim_domain);
    // Every gallery surface must round-trip through its spec file.
    std::string text = save_spec(entry.spec);
    ImmersionSpec loaded = load_spec(text);
    CHECK(save_spec(loaded) == text);
  }
}
