#pragma once

// Truncated free formal power series: sparse coefficient storage per degree,
// arithmetic with conservative tail-bound propagation, homogeneous norms,
// rescaling, partial/Cesaro sums and the Cauchy-Hadamard radius estimator.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ncfa/word.hpp"

namespace ncfa {

using cplx = std::complex<double>;

// Upper bounds on the homogeneous l2-norms beyond the explicit cutoff.
// bounds[i] covers degree cutoff+1+i; past the table the bound continues
// geometrically as base * geo_ratio^(l - H) where base is the last table
// entry (or the exact norm at the cutoff when the table is empty) and
// H = cutoff + bounds.size(). geo_ratio == 0 means the series carries no
// mass beyond the table.
struct TailProfile {
  std::vector<double> bounds;
  double geo_ratio = 0.0;
};

// Exact coefficient rule for degrees beyond the cutoff where every word of
// the same length shares one coefficient ("radial" series such as the
// all-ones/geometric series). coeff[i] is the common coefficient at degree
// cutoff+1+i; past the table it continues as coeff.back() * geo_ratio^k.
// This is what makes dense-but-structured series evaluable at high degree
// without enumerating d^l words.
struct RadialRule {
  std::vector<cplx> coeff;
  cplx geo_ratio = 0.0;
};

class FreeSeries {
 public:
  FreeSeries(int d, int cutoff) : d_(d), cutoff_(cutoff) {
    if (d < 1) throw std::invalid_argument("FreeSeries: d must be >= 1");
    if (cutoff < 0) throw std::invalid_argument("FreeSeries: cutoff must be >= 0");
    by_degree_.resize(static_cast<std::size_t>(cutoff) + 1);
  }

  int d() const { return d_; }
  int cutoff() const { return cutoff_; }

  void set_coeff(const Word& w, cplx value) {
    if (w.d() != d_) throw std::invalid_argument("set_coeff: alphabet mismatch");
    if (w.length() > cutoff_) throw std::invalid_argument("set_coeff: degree exceeds cutoff");
    auto& level = by_degree_[static_cast<std::size_t>(w.length())];
    if (value == cplx(0.0, 0.0))
      level.erase(w.lex_index());
    else
      level[w.lex_index()] = value;
  }

  void add_coeff(const Word& w, cplx value) { set_coeff(w, coeff(w) + value); }

  cplx coeff(const Word& w) const {
    if (w.d() != d_) throw std::invalid_argument("coeff: alphabet mismatch");
    if (w.length() <= cutoff_) {
      const auto& level = by_degree_[static_cast<std::size_t>(w.length())];
      auto it = level.find(w.lex_index());
      return it == level.end() ? cplx(0.0, 0.0) : it->second;
    }
    if (auto a = radial_coeff(w.length())) return *a;
    throw std::out_of_range("coeff: degree beyond stored data");
  }

  // Coefficients of the homogeneous part of one degree, keyed by lex index.
  const std::map<std::uint64_t, cplx>& level(int degree) const {
    return by_degree_.at(static_cast<std::size_t>(degree));
  }

  const std::optional<TailProfile>& tail() const { return tail_; }
  void set_tail(std::optional<TailProfile> t) {
    if (t) {
      for (double b : t->bounds)
        if (!(b >= 0.0) || !std::isfinite(b)) throw std::invalid_argument("tail bounds must be finite and nonnegative");
      if (t->geo_ratio < 0.0 || !std::isfinite(t->geo_ratio)) throw std::invalid_argument("tail ratio must be finite and nonnegative");
    }
    tail_ = std::move(t);
  }

  const std::optional<RadialRule>& radial() const { return radial_; }
  void set_radial(std::optional<RadialRule> r) { radial_ = std::move(r); }

  // Common coefficient at a degree covered by the radial rule, if any.
  std::optional<cplx> radial_coeff(int degree) const {
    if (!radial_ || degree <= cutoff_) return std::nullopt;
    const auto& rr = *radial_;
    int i = degree - cutoff_ - 1;
    if (i < static_cast<int>(rr.coeff.size())) return rr.coeff[static_cast<std::size_t>(i)];
    if (rr.coeff.empty() || rr.geo_ratio == cplx(0.0, 0.0)) return std::nullopt;
    cplx a = rr.coeff.back();
    for (int k = static_cast<int>(rr.coeff.size()); k <= i; ++k) a *= rr.geo_ratio;
    return a;
  }

  // Highest degree (possibly huge) at which exact coefficients exist.
  // Radial rules with a nonzero ratio extend indefinitely.
  long long value_horizon() const {
    if (!radial_) return cutoff_;
    if (!radial_->coeff.empty() && radial_->geo_ratio != cplx(0.0, 0.0))
      return std::numeric_limits<long long>::max();
    return cutoff_ + static_cast<long long>(radial_->coeff.size());
  }

  bool finitely_supported() const {
    if (!tail_) return true;
    if (tail_->geo_ratio != 0.0) {
      double base = tail_->bounds.empty() ? stored_norm(cutoff_) : tail_->bounds.back();
      if (base != 0.0) return false;
    }
    for (double b : tail_->bounds)
      if (b != 0.0) return false;
    return true;
  }

  // l2 norm of the stored degree-l coefficients (exact for l <= cutoff).
  double stored_norm(int degree) const {
    double s = 0.0;
    for (const auto& [k, v] : by_degree_.at(static_cast<std::size_t>(degree))) s += std::norm(v);
    return std::sqrt(s);
  }

  // sqrt(sum_{|w|=l} |f_w|^2); the tail profile supplies degrees beyond the
  // cutoff. Throws when no data covers the requested degree.
  double homogeneous_norm(int degree) const {
    auto v = homogeneous_norm_opt(degree);
    if (!v) throw std::out_of_range("homogeneous_norm: degree beyond cutoff with no tail bound");
    return *v;
  }

  std::optional<double> homogeneous_norm_opt(int degree) const {
    if (degree < 0) throw std::invalid_argument("homogeneous_norm: negative degree");
    if (degree <= cutoff_) return stored_norm(degree);
    if (!tail_) return std::nullopt;
    const auto& t = *tail_;
    int i = degree - cutoff_ - 1;
    if (i < static_cast<int>(t.bounds.size())) return t.bounds[static_cast<std::size_t>(i)];
    if (t.geo_ratio == 0.0) return 0.0;
    double base = t.bounds.empty() ? stored_norm(cutoff_) : t.bounds.back();
    int base_degree = cutoff_ + static_cast<int>(t.bounds.size());
    return base * std::pow(t.geo_ratio, degree - base_degree);
  }

 private:
  int d_;
  int cutoff_;
  std::vector<std::map<std::uint64_t, cplx>> by_degree_;
  std::optional<TailProfile> tail_;
  std::optional<RadialRule> radial_;
};

namespace detail {

// Tail bound used by arithmetic: degrees beyond all data count as 0 for
// polynomials (absent tail) so that sums/products of polynomials stay exact.
inline double norm_or_zero(const FreeSeries& f, int degree) {
  auto v = f.homogeneous_norm_opt(degree);
  return v ? *v : 0.0;
}

// Degrees for which either stored coefficients or tail data exist; the
// geometric continuation is cut at `horizon_cap` table entries when merged.
inline int tail_table_end(const FreeSeries& f) {
  return f.cutoff() + (f.tail() ? static_cast<int>(f.tail()->bounds.size()) : 0);
}

inline bool has_geo(const FreeSeries& f) { return f.tail() && f.tail()->geo_ratio != 0.0; }

}  // namespace detail

inline FreeSeries series_add(const FreeSeries& f, const FreeSeries& g) {
  if (f.d() != g.d()) throw std::invalid_argument("series_add: dimension mismatch");
  int cutoff = std::min(f.cutoff(), g.cutoff());
  FreeSeries out(f.d(), cutoff);
  for (int l = 0; l <= cutoff; ++l) {
    for (const auto& [k, v] : f.level(l)) out.add_coeff(Word::from_lex_index(f.d(), l, k), v);
    for (const auto& [k, v] : g.level(l)) out.add_coeff(Word::from_lex_index(g.d(), l, k), v);
  }
  // Triangle inequality, entrywise. Anything either side stores above the
  // common cutoff moves into the result's tail table.
  bool f_has = f.tail().has_value() || f.cutoff() > cutoff;
  bool g_has = g.tail().has_value() || g.cutoff() > cutoff;
  if (f_has || g_has) {
    int table_end = std::max({detail::tail_table_end(f), detail::tail_table_end(g), cutoff});
    TailProfile t;
    for (int l = cutoff + 1; l <= table_end; ++l)
      t.bounds.push_back(detail::norm_or_zero(f, l) + detail::norm_or_zero(g, l));
    // Conservative merge of geometric continuations: max ratio dominates both.
    // Past the longer table each side is purely geometric, so the summed base
    // entry continues validly; an explicit base entry guards against stored
    // cancellation at the cutoff when both tables are empty.
    double rf = detail::has_geo(f) ? f.tail()->geo_ratio : 0.0;
    double rg = detail::has_geo(g) ? g.tail()->geo_ratio : 0.0;
    t.geo_ratio = std::max(rf, rg);
    if (t.geo_ratio != 0.0 && t.bounds.empty())
      t.bounds.push_back(detail::norm_or_zero(f, cutoff + 1) + detail::norm_or_zero(g, cutoff + 1));
    out.set_tail(std::move(t));
  }
  return out;
}

inline FreeSeries series_scale(const FreeSeries& f, cplx a) {
  FreeSeries out(f.d(), f.cutoff());
  for (int l = 0; l <= f.cutoff(); ++l)
    for (const auto& [k, v] : f.level(l)) out.set_coeff(Word::from_lex_index(f.d(), l, k), a * v);
  if (f.tail()) {
    TailProfile t = *f.tail();
    for (double& b : t.bounds) b *= std::abs(a);
    out.set_tail(std::move(t));
  }
  if (f.radial()) {
    RadialRule r = *f.radial();
    for (cplx& c : r.coeff) c *= a;
    out.set_radial(std::move(r));
  }
  return out;
}

inline FreeSeries series_mul(const FreeSeries& f, const FreeSeries& g) {
  if (f.d() != g.d()) throw std::invalid_argument("series_mul: dimension mismatch");
  int cutoff = std::min(f.cutoff(), g.cutoff());
  FreeSeries out(f.d(), cutoff);
  for (int la = 0; la <= std::min(cutoff, f.cutoff()); ++la) {
    for (const auto& [ka, va] : f.level(la)) {
      Word wa = Word::from_lex_index(f.d(), la, ka);
      for (int lb = 0; lb + la <= cutoff; ++lb)
        for (const auto& [kb, vb] : g.level(lb))
          out.add_coeff(wa.concat(Word::from_lex_index(g.d(), lb, kb)), va * vb);
    }
  }
  bool f_has = f.tail().has_value() || f.cutoff() > cutoff;
  bool g_has = g.tail().has_value() || g.cutoff() > cutoff;
  if (f_has || g_has) {
    // |(fg)_l| <= sum_{a+b=l} |f_a||g_b|; each factor's norm comes from its
    // stored coefficients or its own tail bound.
    int table_end = std::max({detail::tail_table_end(f), detail::tail_table_end(g), cutoff});
    bool geo = detail::has_geo(f) || detail::has_geo(g);
    // With a geometric factor the product tail is not geometric; extend the
    // explicit table far enough for downstream consumers and continue with
    // a safely inflated ratio.
    if (geo) table_end += 64;
    TailProfile t;
    for (int l = cutoff + 1; l <= table_end; ++l) {
      double s = 0.0;
      for (int a = 0; a <= l; ++a) s += detail::norm_or_zero(f, a) * detail::norm_or_zero(g, l - a);
      t.bounds.push_back(s);
    }
    if (geo) {
      double rf = detail::has_geo(f) ? f.tail()->geo_ratio : 0.0;
      double rg = detail::has_geo(g) ? g.tail()->geo_ratio : 0.0;
      // (l+1) max(rf,rg)^l grows slower than any ratio above the max; 1.5x
      // headroom keeps the continuation a valid upper bound from the base on.
      t.geo_ratio = std::max(rf, rg) * 1.5;
      if (!t.bounds.empty() && t.bounds.back() == 0.0) t.geo_ratio = 0.0;
    }
    out.set_tail(std::move(t));
  }
  return out;
}

// f(r z): coefficient at w scales by r^|w|, tails by r^l.
inline FreeSeries series_rescale(const FreeSeries& f, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("series_rescale: r must be positive");
  FreeSeries out(f.d(), f.cutoff());
  double rl = 1.0;
  for (int l = 0; l <= f.cutoff(); ++l) {
    for (const auto& [k, v] : f.level(l)) out.set_coeff(Word::from_lex_index(f.d(), l, k), rl * v);
    rl *= r;
  }
  if (f.tail()) {
    TailProfile t = *f.tail();
    double s = rl;  // rl = r^(cutoff+1) after the coefficient loop
    for (double& b : t.bounds) {
      b *= s;
      s *= r;
    }
    t.geo_ratio *= r;
    out.set_tail(std::move(t));
  }
  if (f.radial()) {
    RadialRule rr = *f.radial();
    cplx s = rl;
    for (cplx& c : rr.coeff) {
      c *= s;
      s *= r;
    }
    rr.geo_ratio *= r;
    out.set_radial(std::move(rr));
  }
  return out;
}

// Keeps degrees <= n; the result is an exact polynomial.
inline FreeSeries partial_sum(const FreeSeries& f, int n) {
  if (n < 0 || n > f.cutoff()) throw std::invalid_argument("partial_sum: n out of range");
  FreeSeries out(f.d(), n);
  for (int l = 0; l <= n; ++l)
    for (const auto& [k, v] : f.level(l)) out.set_coeff(Word::from_lex_index(f.d(), l, k), v);
  return out;
}

// (1/(n+1)) sum_{m<=n} partial_sum(f, m): degree-l part weighted by (n+1-l)/(n+1).
inline FreeSeries cesaro_sum(const FreeSeries& f, int n) {
  if (n < 0 || n > f.cutoff()) throw std::invalid_argument("cesaro_sum: n out of range");
  FreeSeries out(f.d(), n);
  for (int l = 0; l <= n; ++l) {
    double w = static_cast<double>(n + 1 - l) / static_cast<double>(n + 1);
    for (const auto& [k, v] : f.level(l)) out.set_coeff(Word::from_lex_index(f.d(), l, k), w * v);
  }
  return out;
}

// Reciprocal of max_{l in window} (sum_{|w|=l} |f_w|^2)^(1/2l), the finite
// window stand-in for the limsup radius formula. Degrees with no stored or
// tail data count as zero mass, so finitely supported series report +inf
// for windows past their support. Roots below `floor` are treated as zero.
// This is a heuristic estimator: a finite window cannot certify the limsup.
inline double radius_estimate(const FreeSeries& f, int window_lo, int window_hi,
                              double floor = 1e-15) {
  if (window_lo > window_hi) throw std::invalid_argument("radius_estimate: empty window");
  if (window_lo < 0) throw std::invalid_argument("radius_estimate: negative window");
  double max_root = 0.0;
  for (int l = std::max(window_lo, 1); l <= window_hi; ++l) {
    double h = detail::norm_or_zero(f, l);
    if (h <= 0.0) continue;
    max_root = std::max(max_root, std::pow(h, 1.0 / static_cast<double>(l)));
  }
  if (max_root <= floor) return std::numeric_limits<double>::infinity();
  return 1.0 / max_root;
}

// ---- structured constructors -------------------------------------------

// sum_w z^w: every coefficient 1. Exact at all degrees via the radial rule;
// homogeneous norms are d^(l/2).
inline FreeSeries all_ones_series(int d) {
  FreeSeries f(d, 0);
  f.set_coeff(Word(d), 1.0);
  f.set_radial(RadialRule{{cplx(1.0, 0.0)}, cplx(1.0, 0.0)});
  f.set_tail(TailProfile{{std::sqrt(static_cast<double>(d))}, std::sqrt(static_cast<double>(d))});
  return f;
}

// f_w = 1/|w|!: an entire series with super-geometric coefficient decay.
inline FreeSeries inv_factorial_series(int d, int horizon = 170) {
  FreeSeries f(d, 0);
  f.set_coeff(Word(d), 1.0);
  RadialRule rr;
  TailProfile t;
  double fact = 1.0;
  double sq = std::sqrt(static_cast<double>(d));
  double dl = sq;
  for (int l = 1; l <= horizon; ++l) {
    fact *= static_cast<double>(l);
    rr.coeff.push_back(cplx(1.0 / fact, 0.0));
    t.bounds.push_back(dl / fact);
    dl *= sq;
  }
  // 1/(l+1)! = (1/l!) / (l+1) <= (1/l!) * ratio for l >= horizon.
  t.geo_ratio = sq / static_cast<double>(horizon + 1);
  rr.geo_ratio = 0.0;
  f.set_radial(std::move(rr));
  f.set_tail(std::move(t));
  return f;
}

// Single monomial c * z^w.
inline FreeSeries monomial(const Word& w, cplx c = cplx(1.0, 0.0), int cutoff = -1) {
  FreeSeries f(w.d(), cutoff < 0 ? w.length() : cutoff);
  f.set_coeff(w, c);
  return f;
}

// Explicit polynomial truncation: materializes every coefficient of degree
// <= n, including those supplied by a radial rule. Exponential in n.
inline FreeSeries materialized(const FreeSeries& f, int n) {
  FreeSeries out(f.d(), n);
  for (int l = 0; l <= n; ++l) {
    if (l <= f.cutoff()) {
      for (const auto& [k, v] : f.level(l)) out.set_coeff(Word::from_lex_index(f.d(), l, k), v);
    } else if (auto a = f.radial_coeff(l); a && *a != cplx(0.0, 0.0)) {
      std::uint64_t count = words_of_length(f.d(), l);
      for (std::uint64_t k = 0; k < count; ++k) out.set_coeff(Word::from_lex_index(f.d(), l, k), *a);
    }
  }
  return out;
}

// Re-embeds an exact polynomial at a larger cutoff (lossless).
inline FreeSeries with_cutoff(const FreeSeries& f, int cutoff) {
  if (cutoff < f.cutoff()) throw std::invalid_argument("with_cutoff: would drop stored degrees");
  if (!f.finitely_supported()) throw std::invalid_argument("with_cutoff: only exact polynomials can be re-embedded");
  FreeSeries out(f.d(), cutoff);
  for (int l = 0; l <= f.cutoff(); ++l)
    for (const auto& [k, v] : f.level(l)) out.set_coeff(Word::from_lex_index(f.d(), l, k), v);
  return out;
}

}  // namespace ncfa
