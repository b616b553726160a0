#pragma once

// Evaluation of free polynomials and series at matrix tuples. Series
// evaluation returns a certified error bound built from iterates of the
// adjunction map: ||sum_{|w|=l} f_w X^w|| <= sqrt||Ad^l(I)|| * sqrt(sum |f_w|^2),
// summed over the dropped degrees. The infinite remainder past the explicit
// tail data is controlled through submultiplicativity of m -> ||Ad^m(I)||.

#include <map>
#include <string>
#include <utility>

#include "ncfa/linalg.hpp"
#include "ncfa/series.hpp"
#include "ncfa/tuple.hpp"

namespace ncfa {

namespace detail {

// Memoized evaluation of monomials X^w by binary splitting. The memo is
// bounded by `budget` bytes; past it, values are recomputed instead.
class WordEvaluator {
 public:
  WordEvaluator(const MatrixTuple& X, std::size_t budget_bytes) : X_(X), budget_(budget_bytes) {}

  Mat eval(int length, std::uint64_t lex_index) {
    if (length == 0) return Mat::Identity(X_.n, X_.n);
    if (length == 1) return X_.X[static_cast<std::size_t>(lex_index)];
    auto key = std::make_pair(length, lex_index);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    int right_len = length / 2;
    int left_len = length - right_len;
    std::uint64_t dr = words_of_length(X_.d, right_len);
    Mat value = eval(left_len, lex_index / dr) * eval(right_len, lex_index % dr);
    std::size_t entry_bytes = static_cast<std::size_t>(X_.n) * static_cast<std::size_t>(X_.n) * 16 + 64;
    if ((memo_.size() + 1) * entry_bytes <= budget_) memo_.emplace(key, value);
    return value;
  }

 private:
  const MatrixTuple& X_;
  std::size_t budget_;
  std::map<std::pair<int, std::uint64_t>, Mat> memo_;
};

}  // namespace detail

constexpr std::size_t kDefaultEvalBudget = std::size_t(64) << 20;

// sum_w f_w X^w for an exact polynomial (zero tail). Builds the full graded
// monomial table when d^l * n^2 fits the budget, otherwise falls back to
// memoized per-term products.
inline Mat eval_poly(const FreeSeries& f, const MatrixTuple& X,
                     std::size_t budget_bytes = kDefaultEvalBudget) {
  if (f.d() != X.d) throw std::invalid_argument("eval_poly: dimension mismatch");
  if (!f.finitely_supported()) throw std::invalid_argument("eval_poly: series has nonzero tail bounds");
  int top = f.cutoff();
  while (top > 0 && f.level(top).empty()) --top;

  std::size_t n2 = static_cast<std::size_t>(X.n) * static_cast<std::size_t>(X.n) * 16;
  bool graded_fits = true;
  std::uint64_t count = 1;
  for (int l = 1; l <= top && graded_fits; ++l) {
    count *= static_cast<std::uint64_t>(X.d);
    if (count > budget_bytes / std::max<std::size_t>(n2, 1)) graded_fits = false;
  }

  Mat acc = Mat::Zero(X.n, X.n);
  for (const auto& [k, v] : f.level(0)) {
    (void)k;
    acc += v * Mat::Identity(X.n, X.n);
  }
  if (graded_fits) {
    std::vector<Mat> prev{Mat::Identity(X.n, X.n)};
    for (int l = 1; l <= top; ++l) {
      std::uint64_t dl = words_of_length(X.d, l - 1);
      std::vector<Mat> cur(static_cast<std::size_t>(dl) * static_cast<std::size_t>(X.d));
      for (int j = 0; j < X.d; ++j)
        for (std::uint64_t r = 0; r < dl; ++r)
          cur[static_cast<std::size_t>(j) * dl + r] = X.X[static_cast<std::size_t>(j)] * prev[r];
      for (const auto& [k, v] : f.level(l)) acc += v * cur[k];
      prev = std::move(cur);
    }
  } else {
    detail::WordEvaluator we(X, budget_bytes);
    for (int l = 1; l <= top; ++l)
      for (const auto& [k, v] : f.level(l)) acc += v * we.eval(l, k);
  }
  return acc;
}

struct SeriesEvalResult {
  Mat value;
  double bound = std::numeric_limits<double>::infinity();
  int degree = -1;       // highest degree included in the partial sum
  bool certified = false;
  std::string note;
};

namespace detail {

// Tracks g_m = sqrt||Ad^m(I)|| on demand.
class AdjunctionGrowth {
 public:
  explicit AdjunctionGrowth(const MatrixTuple& X) : X_(X), M_(Mat::Identity(X.n, X.n)) {
    g_.push_back(1.0);
  }
  double g(int m) {
    while (static_cast<int>(g_.size()) <= m) step();
    return g_[static_cast<std::size_t>(m)];
  }

 private:
  void step() {
    M_ = adjunction(X_, M_);
    Eigen::SelfAdjointEigenSolver<Mat> es(M_, Eigen::EigenvaluesOnly);
    double s = std::max(es.eigenvalues().maxCoeff(), 0.0);
    g_.push_back(std::sqrt(s));
  }
  const MatrixTuple& X_;
  Mat M_;
  std::vector<double> g_;
};

// sum_{j>=1} g_{H+j} q^j <= g_H * ((sum_{r<k} g_r q^r) / (1 - g_k q^k) - 1),
// minimized over block sizes k. Returns +inf when no block certifies
// summability (joint spectral radius too large for the tail ratio).
inline double geometric_remainder_factor(AdjunctionGrowth& growth, double q, int k_max = 96) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= k_max; ++k) {
    double gk = growth.g(k);
    double blk = gk * std::pow(q, k);
    if (blk >= 1.0) continue;
    double s = 0.0;
    for (int r = 0; r < k; ++r) s += growth.g(r) * std::pow(q, r);
    best = std::min(best, s / (1.0 - blk) - 1.0);
  }
  return best;
}

}  // namespace detail

// Partial-sum evaluation to the first degree at which the certified tail
// bound drops below tol. `certified == false` carries the best achieved
// bound when tol is unreachable from the available coefficient data.
inline SeriesEvalResult eval_series(const FreeSeries& f, const MatrixTuple& X, double tol,
                                    int degree_cap = 4096,
                                    std::size_t budget_bytes = kDefaultEvalBudget) {
  if (f.d() != X.d) throw std::invalid_argument("eval_series: dimension mismatch");
  if (!(tol > 0.0)) throw std::invalid_argument("eval_series: tol must be positive");

  detail::AdjunctionGrowth growth(X);
  detail::WordEvaluator words(X, budget_bytes);

  const int table_end = f.cutoff() + (f.tail() ? static_cast<int>(f.tail()->bounds.size()) : 0);
  const double q = (f.tail() && f.tail()->geo_ratio != 0.0) ? f.tail()->geo_ratio : 0.0;
  const long long value_horizon = std::min<long long>(f.value_horizon(), degree_cap);

  // b(l): exact stored norm through the cutoff, tail bound beyond, zero when
  // no data (exact polynomial).
  auto b = [&](int l) -> double {
    auto v = f.homogeneous_norm_opt(l);
    return v ? *v : 0.0;
  };

  double geo_factor = 0.0;
  if (q > 0.0) {
    geo_factor = detail::geometric_remainder_factor(growth, q);
    if (!std::isfinite(geo_factor)) {
      SeriesEvalResult res;
      res.value = Mat::Zero(X.n, X.n);
      res.note = "tail bound not summable: joint spectral radius of X too large for the tail ratio";
      return res;
    }
  }

  // The certificate covers the floating-point summation too: the rounding
  // slack scales with the absolute mass of the terms actually accumulated.
  double summed_mass = 0.0;
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  auto tail_after = [&](int n) -> double {
    double s = 0.0;
    int hi = std::max(n, table_end);
    for (int l = n + 1; l <= hi; ++l) s += growth.g(l) * b(l);
    if (q > 0.0) s += b(hi) * growth.g(hi) * geo_factor;
    if (s == 0.0) return 0.0;  // nothing truncated: exact polynomial evaluation
    return s * (1.0 + 1e-10) + 64.0 * kEps * (summed_mass + 1.0);
  };

  Mat value = Mat::Zero(X.n, X.n);
  Mat ypow;  // (X_1 + ... + X_d)^l for the radial extension
  Mat ysum;
  if (f.radial()) {
    ysum = Mat::Zero(X.n, X.n);
    for (const auto& Xj : X.X) ysum += Xj;
    ypow = Mat::Identity(X.n, X.n);
  }

  double best_bound = std::numeric_limits<double>::infinity();
  int best_degree = -1;
  for (int n = 0; n <= value_horizon; ++n) {
    if (n <= f.cutoff()) {
      for (const auto& [k, v] : f.level(n)) {
        Mat term = words.eval(n, k);
        summed_mass += std::abs(v) * term.norm();
        value += v * term;
      }
    } else if (auto a = f.radial_coeff(n)) {
      summed_mass += std::abs(*a) * ypow.norm();
      value += *a * ypow;
    }
    if (f.radial() && n >= 0) ypow = (n < value_horizon) ? Mat(ysum * ypow) : ypow;
    double bound = tail_after(n);
    if (bound < best_bound) {
      best_bound = bound;
      best_degree = n;
    }
    if (bound <= tol) {
      SeriesEvalResult res;
      res.value = std::move(value);
      res.bound = bound;
      res.degree = n;
      res.certified = true;
      return res;
    }
  }
  SeriesEvalResult res;
  res.value = std::move(value);
  res.bound = best_bound;
  res.degree = static_cast<int>(value_horizon);
  res.certified = false;
  res.note = "tolerance unreachable within stored degrees; best bound " + std::to_string(best_bound) +
             " at degree " + std::to_string(best_degree);
  return res;
}

}  // namespace ncfa
