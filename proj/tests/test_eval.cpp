#include <catch2/catch_amalgamated.hpp>

#include "ncfa/eval.hpp"
#include "ncfa/rng.hpp"
#include "oracles.hpp"

using namespace ncfa;

namespace {

MatrixTuple random_tuple(int n, int d, std::uint64_t seed, double scale = 1.0) {
  Rng rng(seed);
  MatrixTuple X(n, d);
  for (int j = 0; j < d; ++j) X.X[static_cast<std::size_t>(j)] = scale * rng.gaussian_matrix(n, n);
  return X;
}

FreeSeries random_poly(int d, int deg, std::uint64_t seed, int terms = 8) {
  Rng rng(seed);
  FreeSeries f(d, deg);
  for (int t = 0; t < terms; ++t) {
    int l = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(deg + 1));
    std::uint64_t idx = rng.next_u64() % words_of_length(d, l);
    f.add_coeff(Word::from_lex_index(d, l, idx), rng.gaussian_complex());
  }
  return f;
}

}  // namespace

TEST_CASE("eval_poly basics") {
  FreeSeries one(2, 0);
  one.set_coeff(Word(2), 1.0);
  MatrixTuple X = random_tuple(3, 2, 1);
  CHECK((eval_poly(one, X) - Mat::Identity(3, 3)).norm() < 1e-15);

  // z1 z2 at the partial shift pair
  Mat A = Mat::Zero(2, 2), B = Mat::Zero(2, 2);
  A(0, 1) = 1.0;
  B(1, 0) = 1.0;
  FreeSeries z1z2 = monomial(Word(2, {1, 2}));
  Mat got = eval_poly(z1z2, MatrixTuple({A, B}));
  CHECK(got(0, 0) == cplx(1.0, 0.0));
  CHECK(std::abs(got(0, 1)) + std::abs(got(1, 0)) + std::abs(got(1, 1)) == 0.0);

  FreeSeries lin(2, 1);
  lin.set_coeff(Word(2, {1}), 1.0);
  lin.set_coeff(Word(2, {2}), 1.0);
  CHECK(eval_poly(lin, MatrixTuple::scalars({2.0, 3.0}))(0, 0).real() == Catch::Approx(5.0));
}

TEST_CASE("eval_poly agrees with the word-by-word oracle") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    int d = 1 + static_cast<int>(seed % 3);
    int n = 1 + static_cast<int>(seed % 3);
    FreeSeries f = random_poly(d, 4, 900 + seed, 10);
    MatrixTuple X = random_tuple(n, d, 300 + seed);
    CHECK((eval_poly(f, X) - oracle::eval_poly_bruteforce(f, X)).norm() < 1e-12);
  }
}

TEST_CASE("eval_poly per-term fallback matches the graded path") {
  FreeSeries f = random_poly(2, 5, 4242, 12);
  MatrixTuple X = random_tuple(3, 2, 4242);
  Mat graded = eval_poly(f, X);
  Mat perterm = eval_poly(f, X, /*budget=*/1);
  CHECK((graded - perterm).norm() < 1e-12);
}

TEST_CASE("NC function axioms: direct sums and similarities") {
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    int d = 1 + static_cast<int>(seed % 3);
    FreeSeries f = random_poly(d, 4, 10000 + seed, 8);
    MatrixTuple X = random_tuple(2 + static_cast<int>(seed % 3), d, 20000 + seed);
    MatrixTuple Y = random_tuple(2 + static_cast<int>((seed / 3) % 3), d, 30000 + seed);

    Mat fXY = eval_poly(f, direct_sum(X, Y));
    Mat expected = Mat::Zero(X.n + Y.n, X.n + Y.n);
    expected.topLeftCorner(X.n, X.n) = eval_poly(f, X);
    expected.bottomRightCorner(Y.n, Y.n) = eval_poly(f, Y);
    if (operator_norm(Mat(fXY - expected)) > 1e-10) ++failures;

    Rng rng(40000 + seed);
    Mat S = rng.gaussian_matrix(X.n, X.n) + 3.0 * Mat::Identity(X.n, X.n);
    double cond = condition_number(S);
    MatrixTuple XS = similarity(X, S);
    Mat lhs = eval_poly(f, XS);
    Mat rhs = Eigen::PartialPivLU<Mat>(S).solve(eval_poly(f, X) * S);
    if (operator_norm(Mat(lhs - rhs)) > 1e-8 * cond) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("eval_series: trivial cases") {
  // entire series at the zero tuple: value I, bound 0 at degree 0
  FreeSeries invfact = inv_factorial_series(2);
  MatrixTuple zero(2, 2);
  SeriesEvalResult at0 = eval_series(invfact, zero, 1e-12);
  CHECK(at0.certified);
  CHECK(at0.degree == 0);
  CHECK(at0.bound == 0.0);
  CHECK((at0.value - Mat::Identity(2, 2)).norm() < 1e-15);

  // polynomials evaluate exactly with bound 0
  FreeSeries z1 = monomial(Word(2, {1}));
  MatrixTuple X = random_tuple(3, 2, 5);
  SeriesEvalResult res = eval_series(z1, X, 1e-12);
  CHECK(res.certified);
  CHECK(res.bound == 0.0);
  CHECK((res.value - X.X[0]).norm() == 0.0);
}

TEST_CASE("eval_series: scalar geometric series") {
  FreeSeries ones = all_ones_series(2);
  MatrixTuple X = MatrixTuple::scalars({0.3, 0.3});
  SeriesEvalResult res = eval_series(ones, X, 1e-8);
  REQUIRE(res.certified);
  CHECK(res.bound <= 1e-8);
  CHECK(std::abs(res.value(0, 0) - cplx(2.5, 0.0)) <= res.bound);
}

TEST_CASE("eval_series: certified bound is valid on a grid") {
  FreeSeries ones = all_ones_series(2);
  for (int i = 0; i <= 6; ++i)
    for (int j = 0; j <= 6; ++j) {
      double x = 0.45 * i / 6.0, y = 0.45 * j / 6.0;
      MatrixTuple X = MatrixTuple::scalars({x, y});
      SeriesEvalResult res = eval_series(ones, X, 1e-8);
      REQUIRE(res.certified);
      double closed = 1.0 / (1.0 - x - y);
      CHECK(std::abs(res.value(0, 0).real() - closed) <= res.bound);
      CHECK(res.bound <= 1e-8);
    }
}

TEST_CASE("eval_series: certified bound at matrix arguments") {
  // contractive 2x2 tuples against the Neumann oracle
  FreeSeries ones = all_ones_series(2);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    MatrixTuple X = random_tuple(2, 2, seed, 0.15);
    if (row_norm(X) > 0.6) continue;
    SeriesEvalResult res = eval_series(ones, X, 1e-9);
    REQUIRE(res.certified);
    Mat closed = oracle::neumann_inverse({X.X[0], X.X[1]}, Mat::Identity(2, 2));
    CHECK(operator_norm(Mat(res.value - closed)) <= res.bound + 1e-12);
  }
}

TEST_CASE("eval_series: unreachable tolerance reports the best bound") {
  // truncated data only: coefficients to degree 3, tail bounds past it
  FreeSeries f(2, 3);
  f.set_coeff(Word(2), 1.0);
  f.set_tail(TailProfile{{1.0, 1.0, 1.0}, 0.9});
  MatrixTuple X = MatrixTuple::scalars({0.4, 0.4});
  SeriesEvalResult res = eval_series(f, X, 1e-12);
  CHECK_FALSE(res.certified);
  CHECK(res.bound > 1e-12);
  CHECK(std::isfinite(res.bound));
  CHECK(!res.note.empty());
}

TEST_CASE("eval_series: non-summable tail is rejected") {
  FreeSeries f(1, 0);
  f.set_coeff(Word(1), 1.0);
  f.set_tail(TailProfile{{1.0}, 1.0});  // homogeneous mass does not decay
  MatrixTuple X = MatrixTuple::scalars({2.0});  // joint spectral radius 2
  SeriesEvalResult res = eval_series(f, X, 1e-6);
  CHECK_FALSE(res.certified);
  CHECK(res.note.find("summable") != std::string::npos);
}
