#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "osculant/linalg.hpp"

using namespace osculant;

namespace {

Mat symmetric_from(const std::vector<std::vector<double>>& rows) {
  Mat m(static_cast<int>(rows.size()), static_cast<int>(rows.size()));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
  return m;
}

double max_abs_diff(const Vec& a, const Vec& b) {
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("eigen-decomposition of small matrices") {
  SUBCASE("identity") {
    SymEigen e = sym_eigen(Mat::identity(3));
    CHECK(e.values == Vec{1.0, 1.0, 1.0});
  }
  SUBCASE("diagonal") {
    Mat d = symmetric_from({{4, 0}, {0, 1}});
    SymEigen e = sym_eigen(d);
    CHECK(e.values[0] == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(e.vectors(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(e.vectors(1, 1)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("[[2,1],[1,2]] has spectrum (3,1) with diagonal eigenvectors") {
    // Characteristic polynomial (2-x)^2 - 1 has roots 3 and 1.
    SymEigen e = sym_eigen(symmetric_from({{2, 1}, {1, 2}}));
    CHECK(e.values[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-14));
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(e.vectors(0, 0) * s + e.vectors(1, 0) * s) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(e.vectors(0, 1) * s - e.vectors(1, 1) * s) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("asymmetric input is rejected") {
    Mat bad = symmetric_from({{1, 2}, {0, 1}});
    CHECK_THROWS_AS(sym_eigen(bad), std::invalid_argument);
    Mat rect(2, 3);
    CHECK_THROWS_AS(sym_eigen(rect), std::invalid_argument);
  }
}

TEST_CASE("eigen reconstruction on random symmetric matrices") {
  std::mt19937_64 rng(11);
  auto u = [&rng]() { return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0; };
  for (int n : {2, 3, 5, 12, 40}) {
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) a(i, j) = a(j, i) = u();
    SymEigen e = sym_eigen(a);

    // Orthonormality.
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double dot_ij = 0.0;
        for (int r = 0; r < n; ++r) dot_ij += e.vectors(r, i) * e.vectors(r, j);
        CHECK(std::abs(dot_ij - (i == j ? 1.0 : 0.0)) <= 1e-10);
      }
    }
    // Reconstruction.
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k)
          acc += e.vectors(i, k) * e.values[static_cast<size_t>(k)] * e.vectors(j, k);
        worst = std::max(worst, std::abs(acc - a(i, j)));
      }
    }
    CHECK(worst <= 1e-9 * (1.0 + a.max_abs()));
    // Residual per eigenpair.
    for (int k = 0; k < n; ++k) {
      double res = 0.0;
      for (int i = 0; i < n; ++i) {
        double av = 0.0;
        for (int j = 0; j < n; ++j) av += a(i, j) * e.vectors(j, k);
        res = std::max(res, std::abs(av - e.values[static_cast<size_t>(k)] * e.vectors(i, k)));
      }
      CHECK(res <= 1e-10 * (1.0 + a.max_abs()));
    }
  }
}

TEST_CASE("positive rank counting") {
  RankTolerance tol;
  CHECK(rank_positive({3.0, 1.0, 1e-17}, tol) == 2);
  CHECK(rank_positive({0.0, 0.0, 0.0}, tol) == 0);
  CHECK(rank_positive({-1.0, -2.0}, tol) == 0);
  CHECK(rank_positive({}, tol) == 0);
  CHECK(rank_positive({1.0}, tol) == 1);
  CHECK_THROWS_AS(rank_positive({1.0}, RankTolerance{0.0}), std::invalid_argument);
  CHECK_THROWS_AS(rank_positive({1.0}, RankTolerance{1.5}), std::invalid_argument);
}

TEST_CASE("pivoted Gram-Schmidt") {
  RankTolerance tol;
  SUBCASE("greedy pivoting by residual norm") {
    std::vector<Vec> cols = {{1, 0, 0}, {2, 0, 0}, {0, 1, 0}};
    MgsResult r = mgs_pivoted(cols, {}, tol);
    REQUIRE(r.basis.size() == 2);
    // The norm-2 duplicate of e1 wins the first pivot.
    CHECK(r.pivots == std::vector<int>{1, 2});
    CHECK(span_distance(r.basis, {{1, 0, 0}, {0, 1, 0}}) <= 1e-12);
  }
  SUBCASE("zero columns give an empty basis") {
    std::vector<Vec> cols = {{0, 0}, {0, 0}};
    CHECK(mgs_pivoted(cols, {}, tol).basis.empty());
  }
  SUBCASE("`against` excludes its span") {
    std::vector<Vec> cols = {{1, 1, 0}, {0, 0, 3}};
    std::vector<Vec> against = {{1, 0, 0}};
    MgsResult r = mgs_pivoted(cols, against, tol);
    REQUIRE(r.basis.size() == 2);
    for (const Vec& b : r.basis) CHECK(std::abs(dot(b, against[0])) <= 1e-12);
  }
  SUBCASE("orthonormality invariant") {
    std::mt19937_64 rng(5);
    auto u = [&rng]() { return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0; };
    std::vector<Vec> cols;
    for (int j = 0; j < 6; ++j) {
      Vec c(8);
      for (double& x : c) x = u();
      cols.push_back(c);
      cols.push_back(c);  // duplicates must be rejected
    }
    MgsResult r = mgs_pivoted(cols, {}, tol);
    CHECK(r.basis.size() == 6);
    for (size_t i = 0; i < r.basis.size(); ++i)
      for (size_t j = 0; j < r.basis.size(); ++j)
        CHECK(std::abs(dot(r.basis[i], r.basis[j]) - (i == j ? 1.0 : 0.0)) <= 1e-10);
  }
}

TEST_CASE("pivoted MGS rank equals the exact integer oracle") {
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 200; ++rep) {
    int rows = 1 + static_cast<int>(rng() % 8);
    int cols = 1 + static_cast<int>(rng() % 8);
    int rank_cap = std::min(rows, cols);
    // Build as a product of two small integer matrices to get varied ranks.
    int inner = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(rank_cap));
    std::vector<std::vector<long long>> left(static_cast<size_t>(rows),
                                             std::vector<long long>(static_cast<size_t>(inner)));
    std::vector<std::vector<long long>> right(static_cast<size_t>(inner),
                                              std::vector<long long>(static_cast<size_t>(cols)));
    for (auto& row : left)
      for (auto& x : row) x = static_cast<long long>(rng() % 7) - 3;
    for (auto& row : right)
      for (auto& x : row) x = static_cast<long long>(rng() % 7) - 3;
    std::vector<std::vector<long long>> m(static_cast<size_t>(rows),
                                          std::vector<long long>(static_cast<size_t>(cols), 0));
    for (int i = 0; i < rows; ++i)
      for (int k = 0; k < inner; ++k)
        for (int j = 0; j < cols; ++j)
          m[static_cast<size_t>(i)][static_cast<size_t>(j)] +=
              left[static_cast<size_t>(i)][static_cast<size_t>(k)] *
              right[static_cast<size_t>(k)][static_cast<size_t>(j)];

    std::vector<Vec> columns;
    for (int j = 0; j < cols; ++j) {
      Vec c(static_cast<size_t>(rows));
      for (int i = 0; i < rows; ++i)
        c[static_cast<size_t>(i)] = static_cast<double>(m[static_cast<size_t>(i)][static_cast<size_t>(j)]);
      columns.push_back(std::move(c));
    }
    int mgs_rank = static_cast<int>(mgs_pivoted(columns, {}, RankTolerance{}).basis.size());
    CHECK(mgs_rank == oracles::exact_rank(m));
  }
}

TEST_CASE("projections") {
  CHECK(max_abs_diff(project_off({1, 1}, {{1, 0}}), {0, 1}) == 0.0);
  CHECK(project_onto({3, -2}, {}) == Vec{0, 0});
  Vec b1{0.6, 0.8};
  CHECK(max_abs_diff(project_onto(b1, {b1}), b1) <= 1e-15);
  CHECK_THROWS_AS(project_onto({1, 2, 3}, {{1, 0}}), std::invalid_argument);
}

TEST_CASE("span distance") {
  CHECK(span_distance({{1, 0}}, {{1, 0}}) == 0.0);
  CHECK(span_distance({{1, 0}}, {{0, 1}}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  const double s = 1.0 / std::sqrt(2.0);
  // Projectors [[1,0],[0,0]] and [[.5,.5],[.5,.5]] differ by Frobenius 1.
  CHECK(span_distance({{1, 0}}, {{s, s}}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(span_distance({}, {}) == 0.0);
}

TEST_CASE("jet-valued Gram-Schmidt") {
  RankTolerance tol;
  SUBCASE("a single unit-direction field normalizes exactly") {
    Jet one_plus_u = Jet::constant(1.0, 1, 2) + Jet::variable(0, 0.0, 1, 2);
    JetVec col{one_plus_u, Jet::constant(0.0, 1, 2)};
    JetMgsResult r = mgs_pivoted_jets({col}, {1}, tol);
    REQUIRE(r.frame.size() == 1);
    CHECK(r.frame[0][0].coeffs() == std::vector<double>{1.0, 0.0, 0.0});
    CHECK(r.frame[0][1].coeffs() == std::vector<double>{0.0, 0.0, 0.0});
    CHECK(r.level_of == std::vector<int>{1});
  }
  SUBCASE("circle Jacobian column yields the rotating unit tangent field") {
    // d/du (cos u, sin u) at 0 as order-1 jets: (-sin u, cos u).
    Jet f0 = cos(Jet::variable(0, 0.0, 1, 2));
    Jet f1 = sin(Jet::variable(0, 0.0, 1, 2));
    JetVec col{f0.derivative_field(0), f1.derivative_field(0)};
    JetMgsResult r = mgs_pivoted_jets({col}, {1}, tol);
    REQUIRE(r.frame.size() == 1);
    // Constant term (0, 1), linear coefficient (-1, 0): hand Gram-Schmidt of
    // the unit tangent of the circle.
    CHECK(r.frame[0][0].value() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(r.frame[0][1].value() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(jet_vec_linear_coeff(r.frame[0], 0)[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(jet_vec_linear_coeff(r.frame[0], 0)[1] == doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("dependent jet columns collapse to one field") {
    Jet v0 = Jet::variable(0, 1.0, 1, 2);
    Jet v1 = Jet::constant(0.5, 1, 2) + Jet::variable(0, 0.0, 1, 2);
    JetVec v{v0, v1};
    JetVec twice{2.0 * v0, 2.0 * v1};
    JetMgsResult r = mgs_pivoted_jets({v, twice}, {1, 1}, tol);
    CHECK(r.frame.size() == 1);
  }
  SUBCASE("blocks are processed in ascending order") {
    JetVec small{Jet::constant(1.0, 1, 1), Jet::constant(0.0, 1, 1)};
    JetVec big{Jet::constant(0.0, 1, 1), Jet::constant(10.0, 1, 1)};
    JetMgsResult r = mgs_pivoted_jets({small, big}, {1, 2}, tol);
    REQUIRE(r.pivots.size() == 2);
    // Global greedy would take the norm-10 column first; block order wins.
    CHECK(r.pivots == std::vector<int>{0, 1});
    CHECK(r.level_of == std::vector<int>{1, 2});
  }
  SUBCASE("frame fields are orthonormal as fields") {
    // Two curved columns sharing direction content.
    Jet u = Jet::variable(0, 0.0, 2, 3);
    Jet v = Jet::variable(1, 0.0, 2, 3);
    Jet one = Jet::constant(1.0, 2, 3);
    std::vector<JetVec> cols = {
        {one + u, v, u * v},
        {v, one - u, u},
    };
    JetMgsResult r = mgs_pivoted_jets(cols, {1, 1}, tol);
    REQUIRE(r.frame.size() == 2);
    for (size_t i = 0; i < r.frame.size(); ++i) {
      for (size_t j = 0; j < r.frame.size(); ++j) {
        Jet d = jet_dot(r.frame[i], r.frame[j]);
        for (size_t c = 0; c < d.coeffs().size(); ++c) {
          double expected = (i == j && c == 0) ? 1.0 : 0.0;
          CHECK(std::abs(d.coeffs()[c] - expected) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("linear solver") {
  Mat a = symmetric_from({{2, 1}, {1, 3}});
  Vec x = solve_linear(a, {5, 10});
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(3.0).epsilon(1e-14));
  Mat singular = symmetric_from({{1, 1}, {1, 1}});
  CHECK_THROWS_AS(solve_linear(singular, {1, 2}), std::runtime_error);
}
