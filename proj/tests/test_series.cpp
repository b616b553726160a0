#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "ncfa/rng.hpp"
#include "ncfa/series.hpp"
#include "ncfa/series_io.hpp"
#include "oracles.hpp"

using namespace ncfa;

namespace {

FreeSeries random_sparse(int d, int cutoff, std::uint64_t seed, int terms = 8) {
  Rng rng(seed);
  FreeSeries f(d, cutoff);
  for (int t = 0; t < terms; ++t) {
    int l = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(cutoff + 1));
    std::uint64_t idx = rng.next_u64() % words_of_length(d, l);
    f.add_coeff(Word::from_lex_index(d, l, idx), rng.gaussian_complex());
  }
  return f;
}

double coeff_distance(const FreeSeries& a, const FreeSeries& b) {
  int cutoff = std::min(a.cutoff(), b.cutoff());
  double worst = 0.0;
  for (int l = 0; l <= cutoff; ++l) {
    std::uint64_t count = words_of_length(a.d(), l);
    for (std::uint64_t k = 0; k < count; ++k) {
      Word w = Word::from_lex_index(a.d(), l, k);
      worst = std::max(worst, std::abs(a.coeff(w) - b.coeff(w)));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("additive identities") {
  FreeSeries f = random_sparse(2, 4, 11);
  FreeSeries zero(2, 4);
  CHECK(coeff_distance(series_add(f, zero), f) == 0.0);

  FreeSeries z1 = monomial(Word(2, {1}));
  FreeSeries z2 = monomial(Word(2, {2}));
  FreeSeries s = series_add(with_cutoff(z1, 1), with_cutoff(z2, 1));
  CHECK(s.coeff(Word(2, {1})) == cplx(1.0, 0.0));
  CHECK(s.coeff(Word(2, {2})) == cplx(1.0, 0.0));

  FreeSeries geo = materialized(all_ones_series(2), 3);
  FreeSeries diff = series_add(geo, series_scale(geo, -1.0));
  CHECK(coeff_distance(diff, FreeSeries(2, 3)) == 0.0);
  CHECK(diff.finitely_supported());

  CHECK_THROWS_AS(series_add(FreeSeries(2, 1), FreeSeries(3, 1)), std::invalid_argument);
}

TEST_CASE("multiplication: unit, monomials, telescoping product") {
  FreeSeries f = random_sparse(2, 4, 17);
  FreeSeries one(2, 4);
  one.set_coeff(Word(2), 1.0);
  CHECK(coeff_distance(series_mul(one, f), f) < 1e-15);

  FreeSeries z1z2 = series_mul(with_cutoff(monomial(Word(2, {1})), 2), with_cutoff(monomial(Word(2, {2})), 2));
  CHECK(z1z2.coeff(Word(2, {1, 2})) == cplx(1.0, 0.0));
  CHECK(z1z2.level(2).size() == 1);

  // (1 + z1 + z1^2)(1 - z1) = 1 - z1^3
  FreeSeries a(1, 3), b(1, 3);
  a.set_coeff(Word(1), 1.0);
  a.set_coeff(Word(1, {1}), 1.0);
  a.set_coeff(Word(1, {1, 1}), 1.0);
  b.set_coeff(Word(1), 1.0);
  b.set_coeff(Word(1, {1}), -1.0);
  FreeSeries prod = series_mul(a, b);
  FreeSeries expect = oracle::mul_bruteforce(a, b, 3);
  CHECK(coeff_distance(prod, expect) == 0.0);
  CHECK(prod.coeff(Word(1)) == cplx(1.0, 0.0));
  CHECK(prod.coeff(Word(1, {1})) == cplx(0.0, 0.0));
  CHECK(prod.coeff(Word(1, {1, 1})) == cplx(0.0, 0.0));
  CHECK(prod.coeff(Word(1, {1, 1, 1})) == cplx(-1.0, 0.0));
}

TEST_CASE("multiplication agrees with brute-force convolution on random series") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    int d = 1 + static_cast<int>(seed % 3);
    FreeSeries f = random_sparse(d, 4, 1000 + seed);
    FreeSeries g = random_sparse(d, 4, 2000 + seed);
    CHECK(coeff_distance(series_mul(f, g), oracle::mul_bruteforce(f, g, 4)) < 1e-13);
  }
}

TEST_CASE("multiplication is associative and distributes over addition") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    int d = 1 + static_cast<int>(seed % 3);
    int cutoff = 5;
    FreeSeries f = random_sparse(d, cutoff, 3 * seed + 1, 6);
    FreeSeries g = random_sparse(d, cutoff, 3 * seed + 2, 6);
    FreeSeries h = random_sparse(d, cutoff, 3 * seed + 3, 6);
    CHECK(coeff_distance(series_mul(series_mul(f, g), h), series_mul(f, series_mul(g, h))) < 1e-12);
    CHECK(coeff_distance(series_mul(f, series_add(g, h)),
                         series_add(series_mul(f, g), series_mul(f, h))) < 1e-12);
  }
}

TEST_CASE("homogeneous norms") {
  FreeSeries ones = all_ones_series(2);
  CHECK(ones.homogeneous_norm(3) == Catch::Approx(std::pow(2.0, 1.5)).epsilon(1e-12));

  FreeSeries zero(2, 4);
  for (int l = 0; l <= 4; ++l) CHECK(zero.homogeneous_norm(l) == 0.0);

  FreeSeries invfact = inv_factorial_series(2);
  CHECK(invfact.homogeneous_norm(2) == Catch::Approx(1.0).epsilon(1e-12));

  // no tail data beyond the cutoff: error
  FreeSeries poly(2, 2);
  poly.set_coeff(Word(2, {1}), 1.0);
  CHECK_THROWS_AS(poly.homogeneous_norm(3), std::out_of_range);

  // triangle inequality under addition
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    FreeSeries f = random_sparse(2, 4, 500 + seed);
    FreeSeries g = random_sparse(2, 4, 600 + seed);
    FreeSeries s = series_add(f, g);
    for (int l = 0; l <= 4; ++l)
      CHECK(s.homogeneous_norm(l) <= f.homogeneous_norm(l) + g.homogeneous_norm(l) + 1e-12);
  }
}

TEST_CASE("radius estimates") {
  // all-ones: the l-th root of the degree-l mass is sqrt(d) at every degree
  CHECK(radius_estimate(all_ones_series(2), 10, 40) == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
  CHECK(radius_estimate(all_ones_series(3), 10, 40) == Catch::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-6));

  // finitely supported series are entire: windows past the support see zero mass
  FreeSeries z1 = monomial(Word(2, {1}));
  CHECK(std::isinf(radius_estimate(z1, 10, 40)));
  FreeSeries p = random_sparse(3, 4, 7);
  CHECK(std::isinf(radius_estimate(p, 10, 40)));

  // 1/l!-series: windowed estimates grow without bound as the window climbs
  FreeSeries invfact = inv_factorial_series(2);
  double r_low = radius_estimate(invfact, 10, 40);
  double r_mid = radius_estimate(invfact, 20, 40);
  double r_high = radius_estimate(invfact, 38, 40);
  CHECK(r_low > 3.0);
  CHECK(r_low < r_mid);
  CHECK(r_mid < r_high);
  CHECK(r_high >= 10.0);

  CHECK_THROWS_AS(radius_estimate(invfact, 8, 5), std::invalid_argument);
}

TEST_CASE("rescaling") {
  FreeSeries f(1, 2);
  f.set_coeff(Word(1, {1}), 1.0);
  f.set_coeff(Word(1, {1, 1}), 1.0);
  FreeSeries half = series_rescale(f, 0.5);
  CHECK(half.coeff(Word(1, {1})) == cplx(0.5, 0.0));
  CHECK(half.coeff(Word(1, {1, 1})) == cplx(0.25, 0.0));

  FreeSeries g = random_sparse(2, 4, 99);
  CHECK(coeff_distance(series_rescale(g, 1.0), g) == 0.0);

  // radius scales like 1/r
  FreeSeries ones = all_ones_series(2);
  CHECK(radius_estimate(series_rescale(ones, 0.5), 10, 40) ==
        Catch::Approx(std::sqrt(2.0)).epsilon(1e-6));
  for (double r : {0.25, 0.5, 2.0, 3.0}) {
    double base = radius_estimate(ones, 10, 30);
    double scaled = radius_estimate(series_rescale(ones, r), 10, 30);
    CHECK(scaled == Catch::Approx(base / r).epsilon(1e-9));
  }
}

TEST_CASE("partial and Cesaro sums") {
  FreeSeries f(2, 3);
  f.set_coeff(Word(2), 1.0);
  f.set_coeff(Word(2, {1}), 1.0);
  FreeSeries c1 = cesaro_sum(f, 1);
  CHECK(c1.coeff(Word(2)) == cplx(1.0, 0.0));
  CHECK(c1.coeff(Word(2, {1})) == cplx(0.5, 0.0));

  FreeSeries g = random_sparse(2, 4, 5);
  FreeSeries full = partial_sum(g, g.cutoff());
  CHECK(coeff_distance(full, g) == 0.0);
  CHECK(full.finitely_supported());

  FreeSeries zero(2, 4);
  CHECK(coeff_distance(partial_sum(zero, 2), FreeSeries(2, 2)) == 0.0);
  CHECK_THROWS_AS(partial_sum(g, 5), std::invalid_argument);

  // degree-l weight of the n-th Cesaro sum is (n+1-l)/(n+1)
  FreeSeries h = random_sparse(2, 4, 8);
  FreeSeries c = cesaro_sum(h, 3);
  for (int l = 0; l <= 3; ++l)
    for (const auto& [k, v] : h.level(l))
      CHECK(std::abs(c.coeff(Word::from_lex_index(2, l, k)) - v * (4.0 - l) / 4.0) < 1e-15);
}

TEST_CASE("file round trip is bit exact") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    FreeSeries f = random_sparse(2, 5, 400 + seed);
    if (seed % 2 == 0) f.set_tail(TailProfile{{0.25, 1e-3, 7.0}, seed % 4 == 0 ? 0.5 : 0.0});
    std::stringstream ss;
    save_series(f, ss);
    FreeSeries g = load_series(ss);
    CHECK(g.d() == f.d());
    CHECK(g.cutoff() == f.cutoff());
    CHECK(coeff_distance(f, g) == 0.0);
    for (int l = 0; l <= f.cutoff() + 5; ++l) {
      auto a = f.homogeneous_norm_opt(l);
      auto b = g.homogeneous_norm_opt(l);
      REQUIRE(a.has_value() == b.has_value());
      if (a) CHECK(*a == *b);  // exact: 17 significant digits round-trip
    }
  }
}

TEST_CASE("tail propagation stays conservative through arithmetic") {
  // compare propagated bounds against exact norms of materialized products
  FreeSeries ones = all_ones_series(2);
  FreeSeries f = materialized(ones, 6);
  FreeSeries sum = series_add(ones, ones);
  FreeSeries prod = series_mul(ones, ones);
  for (int l = 1; l <= 6; ++l) {
    double exact_sum = 2.0 * std::sqrt(words_of_length(2, l));
    CHECK(sum.homogeneous_norm(l) >= exact_sum - 1e-12);
    // (ones*ones)_l has coefficient l+1 on every word
    double exact_prod = (l + 1.0) * std::sqrt(words_of_length(2, l));
    CHECK(prod.homogeneous_norm(l) >= exact_prod - 1e-9);
  }
  // and the geometric continuation keeps dominating past the table
  const auto& t = *prod.tail();
  int H = prod.cutoff() + static_cast<int>(t.bounds.size());
  for (int l = H + 1; l <= H + 20; ++l) {
    double exact = (l + 1.0) * std::pow(2.0, l / 2.0);
    CHECK(prod.homogeneous_norm(l) >= exact - 1e-6 * prod.homogeneous_norm(l));
  }
}
