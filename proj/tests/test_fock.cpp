#include <catch2/catch_amalgamated.hpp>

#include "ncfa/fock.hpp"
#include "ncfa/rng.hpp"
#include "oracles.hpp"

using namespace ncfa;

TEST_CASE("basis dimensions and indexing") {
  FockBasis B(2, 3);
  CHECK(B.dim() == 15);  // (2^4 - 1)/(2 - 1)
  CHECK(FockBasis(1, 7).dim() == 8);
  CHECK(FockBasis(3, 4).dim() == (3 * 81 - 1) / 2);

  CHECK(B.index(Word(2)) == 0);  // the vacuum comes first
  for (Eigen::Index i = 0; i < B.dim(); ++i) CHECK(B.index(B.word(i)) == i);

  // degree-major: all of degree l precedes degree l+1
  CHECK(B.level_offset(1) == 1);
  CHECK(B.level_offset(2) == 3);
  CHECK(B.level_offset(3) == 7);
}

TEST_CASE("memory cap rejects oversized bases before allocation") {
  CHECK_THROWS_AS(FockBasis(2, 30), std::invalid_argument);
  CHECK_THROWS_AS(FockBasis(2, 17), std::invalid_argument);  // 2^18 - 1 just over the default cap
  CHECK_NOTHROW(FockBasis(2, 16));                           // 2^17 - 1 fits
  CHECK_NOTHROW(FockBasis(2, 17, 1u << 19));                 // explicit cap override
}

TEST_CASE("left creation at d=1, N=1") {
  FockBasis B(1, 1);
  Mat L = Mat(left_creation_matrix(B, 1));
  Mat expect = Mat::Zero(2, 2);
  expect(1, 0) = 1.0;
  CHECK((L - expect).norm() == 0.0);

  // applied to the vacuum: the basis vector of z1
  Vec vac = Vec::Zero(2);
  vac(0) = 1.0;
  Vec out = L * vac;
  CHECK(out(0) == cplx(0.0, 0.0));
  CHECK(out(1) == cplx(1.0, 0.0));
}

TEST_CASE("creation operators are isometries with orthogonal ranges below the top degree") {
  for (int d = 1; d <= 3; ++d)
    for (int N = 1; N <= (d == 3 ? 6 : 8); ++N) {
      FockBasis B(d, N);
      FockBasis Blow(d, N - 1);
      std::vector<SpMat> Ls;
      for (int j = 1; j <= d; ++j) Ls.push_back(left_creation_matrix(B, j));
      for (int i = 1; i <= d; ++i)
        for (int j = 1; j <= d; ++j) {
          Mat prod = Mat(SpMat(Ls[static_cast<std::size_t>(i - 1)].adjoint() * Ls[static_cast<std::size_t>(j - 1)]));
          Mat expect = Mat::Zero(B.dim(), B.dim());
          if (i == j) expect.topLeftCorner(Blow.dim(), Blow.dim()) = Mat::Identity(Blow.dim(), Blow.dim());
          CHECK((prod - expect).norm() == 0.0);
        }
    }
}

TEST_CASE("right creation concatenates on the right") {
  FockBasis B(2, 3);
  SpMat R2 = right_creation_matrix(B, 2);
  Word w(2, {1, 2});
  Vec e = Vec::Zero(B.dim());
  e(B.index(w)) = 1.0;
  Vec out = R2 * e;
  CHECK(out(B.index(Word(2, {1, 2, 2}))) == cplx(1.0, 0.0));
  CHECK(out.norm() == 1.0);
}

TEST_CASE("right shift is conjugate to the left shift via word transposition") {
  FockBasis B(2, 4);
  SpMat U(B.dim(), B.dim());
  std::vector<Eigen::Triplet<cplx>> trips;
  for (Eigen::Index i = 0; i < B.dim(); ++i)
    trips.emplace_back(B.index(B.word(i).transpose()), i, cplx(1.0, 0.0));
  U.setFromTriplets(trips.begin(), trips.end());
  for (int j = 1; j <= 2; ++j) {
    Mat lhs = Mat(SpMat(U * left_creation_matrix(B, j) * U));
    CHECK((lhs - Mat(right_creation_matrix(B, j))).norm() == 0.0);
  }
}

TEST_CASE("semicircular matrices: d=1 truncations") {
  FockBasis B1(1, 1);
  Mat s = Mat(semicircular_matrix(B1, 1));
  Mat expect(2, 2);
  expect << 0.0, 1.0, 1.0, 0.0;
  CHECK((s - expect).norm() == 0.0);
  CHECK(operator_norm(s) == Catch::Approx(1.0).epsilon(1e-12));

  // truncated norm 2 cos(pi/(N+2)), converging up to 2
  for (int N : {1, 2, 5, 10, 20, 50}) {
    FockBasis B(1, N);
    double got = operator_norm(Mat(semicircular_matrix(B, 1)));
    CHECK(got == Catch::Approx(2.0 * std::cos(M_PI / (N + 2))).margin(1e-10));
  }
}

TEST_CASE("semicircular moments match the catalan pattern") {
  FockBasis B(1, 8);
  SpMat s = semicircular_matrix(B, 1);
  SpMat p = SpMat(s * s);
  CHECK(vacuum_trace(p).real() == Catch::Approx(1.0).margin(1e-12));
  p = SpMat(p * s);
  CHECK(vacuum_trace(p).real() == Catch::Approx(0.0).margin(1e-12));
  p = SpMat(p * s);  // s^4
  CHECK(vacuum_trace(p).real() == Catch::Approx(2.0).margin(1e-12));
  p = SpMat(SpMat(p * s) * s);  // s^6
  CHECK(vacuum_trace(p).real() == Catch::Approx(5.0).margin(1e-12));
  p = SpMat(SpMat(p * s) * s);  // s^8
  CHECK(vacuum_trace(p).real() == Catch::Approx(14.0).margin(1e-12));
}

TEST_CASE("mixed moments match the non-crossing pairing oracle") {
  for (int k = 1; k <= 8; ++k) {
    FockBasis B(2, k);
    SpMat s1 = semicircular_matrix(B, 1);
    SpMat s2 = semicircular_matrix(B, 2);
    for (const auto& w : enumerate_words(2, k)) {
      SpMat prod(B.dim(), B.dim());
      prod.setIdentity();
      for (int a : w.letters()) prod = SpMat(prod * (a == 1 ? s1 : s2));
      double expect = static_cast<double>(oracle::pairing_count(w.letters()));
      CHECK(vacuum_trace(prod).real() == Catch::Approx(expect).margin(1e-10));
    }
  }
}

TEST_CASE("vacuum trace basics") {
  FockBasis B(2, 3);
  CHECK(vacuum_trace(Mat(Mat::Identity(B.dim(), B.dim()))) == cplx(1.0, 0.0));
  CHECK(vacuum_trace(left_creation_matrix(B, 1)) == cplx(0.0, 0.0));
  SpMat s1s2 = SpMat(semicircular_matrix(B, 1) * semicircular_matrix(B, 2));
  CHECK(std::abs(vacuum_trace(s1s2)) == 0.0);
  CHECK_THROWS_AS(vacuum_trace(Mat(Mat::Zero(2, 3))), std::invalid_argument);
}

TEST_CASE("left multiplication matrices") {
  FockBasis B(2, 4);
  FreeSeries one(2, 0);
  one.set_coeff(Word(2), 1.0);
  CHECK((Mat(left_mult_matrix(one, B, 1.0)) - Mat::Identity(B.dim(), B.dim())).norm() == 0.0);

  FreeSeries z1 = monomial(Word(2, {1}));
  CHECK((Mat(left_mult_matrix(z1, B, 1.0)) - Mat(left_creation_matrix(B, 1))).norm() == 0.0);

  // all-ones at r = 1/2 applied to the vacuum: (1/2)^|w| at every word
  FreeSeries ones = all_ones_series(2);
  Vec vac = Vec::Zero(B.dim());
  vac(0) = 1.0;
  Vec out = left_mult_matrix(ones, B, 0.5) * vac;
  for (Eigen::Index i = 0; i < B.dim(); ++i)
    CHECK(std::abs(out(i) - std::pow(0.5, B.word(i).length())) < 1e-15);

  // convolution oracle: f(rL) h equals the truncated product series
  FreeSeries f(2, 2);
  f.set_coeff(Word(2, {1}), cplx(0.5, 0.25));
  f.set_coeff(Word(2, {2, 1}), cplx(-1.0, 2.0));
  FreeSeries h(2, 2);
  h.set_coeff(Word(2), 1.0);
  h.set_coeff(Word(2, {2}), cplx(0.0, 1.0));
  FreeSeries expect = series_mul(with_cutoff(f, 4), with_cutoff(h, 4));
  Vec hv = series_to_fock(h, B);
  Vec got = left_mult_matrix(f, B, 1.0) * hv;
  CHECK((got - series_to_fock(expect, B)).norm() < 1e-14);

  CHECK(dropped_mass(ones, 4) > 0.0);
  CHECK(dropped_mass(partial_sum(materialized(ones, 3), 3), 4) == 0.0);
}

TEST_CASE("hardy seminorms") {
  FockBasis B(2, 6);
  FreeSeries one(2, 0);
  one.set_coeff(Word(2), 1.0);
  CHECK(seminorm_rho(one, 0.7, B) == Catch::Approx(1.0));

  FreeSeries z1 = monomial(Word(2, {1}));
  for (double r : {0.3, 0.8, 1.0, 1.5})
    CHECK(seminorm_rho(z1, r, FockBasis(2, 3)) == Catch::Approx(r).epsilon(1e-12));

  FreeSeries sum(2, 1);
  sum.set_coeff(Word(2, {1}), 1.0);
  sum.set_coeff(Word(2, {2}), 1.0);
  CHECK(seminorm_rho(sum, 1.0, B) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-10));

  // nondecreasing in the truncation degree
  Rng rng(5150);
  for (int rep = 0; rep < 4; ++rep) {
    FreeSeries f(2, 3);
    for (int t = 0; t < 5; ++t) {
      int l = static_cast<int>(rng.next_u64() % 4);
      f.add_coeff(Word::from_lex_index(2, l, rng.next_u64() % words_of_length(2, l)), rng.gaussian_complex());
    }
    double prev = 0.0;
    for (int N = 3; N <= 8; ++N) {
      double cur = seminorm_rho(f, 0.9, FockBasis(2, N));
      CHECK(cur >= prev - 1e-11);
      prev = cur;
    }
  }
}

TEST_CASE("szego vectors") {
  FockBasis B(2, 6);
  MatrixTuple zero(1, 2);
  Vec one1(1);
  one1(0) = 1.0;
  Vec K0 = szego_vector(zero, one1, one1, B);
  CHECK(K0(0) == cplx(1.0, 0.0));
  CHECK(K0.tail(B.dim() - 1).norm() == 0.0);

  // scalar d=1 geometric kernel
  FockBasis B1(1, 10);
  Vec K1 = szego_vector(MatrixTuple::scalars({0.5}), one1, one1, B1);
  for (int l = 0; l <= 10; ++l) CHECK(std::abs(K1(l) - std::pow(0.5, l)) < 1e-15);

  // reproducing identity against the independent polynomial evaluator
  Rng rng(777);
  for (int rep = 0; rep < 30; ++rep) {
    int n = 1 + static_cast<int>(rng.next_u64() % 3);
    MatrixTuple Z(n, 2);
    for (int j = 0; j < 2; ++j) Z.X[static_cast<std::size_t>(j)] = rng.gaussian_matrix(n, n);
    double target = 0.2 + 0.7 * rng.uniform01();
    double rn = row_norm(Z);
    for (auto& m : Z.X) m *= target / std::max(rn, 1e-12);
    Vec y = rng.gaussian_vector(n), v = rng.gaussian_vector(n);
    FreeSeries f(2, 6);
    for (int t = 0; t < 6; ++t) {
      int l = static_cast<int>(rng.next_u64() % 7);
      f.add_coeff(Word::from_lex_index(2, l, rng.next_u64() % words_of_length(2, l)), rng.gaussian_complex());
    }
    Vec K = szego_vector(Z, y, v, B);
    cplx lhs = fock_inner(K, series_to_fock(f, B));
    cplx rhs = (y.adjoint() * oracle::eval_poly_bruteforce(f, Z) * v)(0, 0);
    CHECK(std::abs(lhs - rhs) < 1e-10);

    // kernel norm bound at the truncation
    double r = row_norm(Z);
    CHECK(K.norm() <= y.norm() * v.norm() / std::sqrt(1.0 - r * r) * (1.0 + 1e-12));
  }

  // stacked variant is the blockwise kernel
  MatrixTuple Z(2, 2);
  Rng rng2(9);
  for (int j = 0; j < 2; ++j) Z.X[static_cast<std::size_t>(j)] = 0.2 * rng2.gaussian_matrix(2, 2);
  Vec ystack = rng2.gaussian_vector(4), v2 = rng2.gaussian_vector(2);
  Mat K = szego_vector_stacked(Z, ystack, v2, B);
  CHECK((K.col(0) - szego_vector(Z, ystack.head(2), v2, B)).norm() == 0.0);
  CHECK((K.col(1) - szego_vector(Z, ystack.tail(2), v2, B)).norm() == 0.0);
}
