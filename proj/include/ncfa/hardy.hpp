#pragma once

// Finite-section observables of shift-invariant subspace theory: kernels of
// row multipliers F(rL), wandering-subspace dimensions and their profile in
// r, directional-variety sampling and the ideal-membership check they feed.
//
// Truncation discipline: a row F of degree degF only sees inputs of degree
// <= N - degF faithfully, and wandering comparisons shift kernel vectors up
// by one degree, so they are restricted one degree lower still. All rank
// decisions carry the spectral gap around the threshold.

#include <optional>
#include <string>
#include <vector>

#include "ncfa/eval.hpp"
#include "ncfa/fock.hpp"
#include "ncfa/linalg.hpp"
#include "ncfa/rng.hpp"
#include "ncfa/series.hpp"

namespace ncfa {

inline int row_degree(const std::vector<FreeSeries>& F) {
  int deg = 0;
  for (const auto& f : F)
    for (int l = f.cutoff(); l >= 0; --l)
      if (!f.level(l).empty()) {
        deg = std::max(deg, l);
        break;
      }
  return deg;
}

// The block row [f_1(rL) ... f_n(rL)] : (truncated H^2)^n -> truncated H^2.
inline SpMat row_multiplier_matrix(const std::vector<FreeSeries>& F, double r, const FockBasis& B) {
  if (F.empty()) throw std::invalid_argument("row_multiplier_matrix: empty row");
  for (const auto& f : F)
    if (f.d() != B.d()) throw std::invalid_argument("row_multiplier_matrix: dimension mismatch");
  SpMat out(B.dim(), B.dim() * static_cast<Eigen::Index>(F.size()));
  std::vector<Eigen::Triplet<cplx>> trips;
  for (std::size_t i = 0; i < F.size(); ++i) {
    SpMat block = left_mult_matrix(F[i], B, r);
    for (int c = 0; c < block.outerSize(); ++c)
      for (SpMat::InnerIterator it(block, c); it; ++it)
        trips.emplace_back(it.row(), static_cast<Eigen::Index>(i) * B.dim() + it.col(), it.value());
  }
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

struct KernelWanderingResult {
  int kernel_dim = 0;      // dim Ker F(rL) on inputs of degree <= window
  int low_kernel_dim = 0;  // kernel vectors supported on degree <= window-1
  int wandering_dim = 0;   // dim (K minus the right-shifted kernel)
  int window = 0;          // N - degF
  double sigma_gap = std::numeric_limits<double>::infinity();
  bool window_ok = true;
  std::string note;
};

namespace detail {

// Columns of the row-multiplier matrix restricted to inputs of degree <= w,
// as a dense matrix (component-blocked).
inline Mat restricted_row_matrix(const std::vector<FreeSeries>& F, double r, const FockBasis& B, int w) {
  FockBasis Bw(B.d(), w);
  Mat out(B.dim(), Bw.dim() * static_cast<Eigen::Index>(F.size()));
  for (std::size_t i = 0; i < F.size(); ++i) {
    SpMat block = left_mult_matrix(F[i], B, r);
    out.middleCols(static_cast<Eigen::Index>(i) * Bw.dim(), Bw.dim()) = Mat(block.leftCols(Bw.dim()));
  }
  return out;
}

}  // namespace detail

// Kernel of F(rL) on the truncation-faithful window, then the dimension of
// K minus sum_j (R_j x I)(K restricted one degree lower).
inline KernelWanderingResult kernel_wandering_dim(const std::vector<FreeSeries>& F, double r,
                                                  const FockBasis& B, double tol = 1e-8) {
  KernelWanderingResult res;
  int degF = row_degree(F);
  res.window = B.degree() - degF;
  if (res.window < 1) {
    res.window_ok = false;
    res.note = "window too small: truncation degree " + std::to_string(B.degree()) +
               " cannot separate artifacts for a row of degree " + std::to_string(degF);
    return res;
  }
  int n_comp = static_cast<int>(F.size());
  FockBasis Bw(B.d(), res.window);
  Mat M = detail::restricted_row_matrix(F, r, B, res.window);
  NullSpace ker = null_space(M, tol);
  res.kernel_dim = static_cast<int>(ker.basis.cols());
  res.sigma_gap = ker.decision.gap();
  if (res.kernel_dim == 0) return res;

  // Kernel vectors supported on degrees <= window-1: null combinations of
  // the top-degree rows of the kernel basis.
  FockBasis Blow(B.d(), res.window - 1);
  Eigen::Index top_rows = Bw.dim() - Blow.dim();
  Mat top(top_rows * n_comp, res.kernel_dim);
  for (int i = 0; i < n_comp; ++i)
    top.middleRows(static_cast<Eigen::Index>(i) * top_rows, top_rows) =
        ker.basis.middleRows(static_cast<Eigen::Index>(i) * Bw.dim() + Blow.dim(), top_rows);
  NullSpace low_combo = null_space(top, tol);
  Mat low_basis = ker.basis * low_combo.basis;  // orthonormal: unitary-times-orthonormal
  res.low_kernel_dim = static_cast<int>(low_basis.cols());
  if (res.low_kernel_dim == 0) {
    res.wandering_dim = res.kernel_dim;
    res.window_ok = false;
    res.note = "no kernel vectors clear of the top degree; wandering count may include truncation artifacts";
    return res;
  }

  // Shift the low kernel by each R_j and project onto the kernel.
  std::vector<SpMat> Rs;
  for (int j = 1; j <= B.d(); ++j) Rs.push_back(right_creation_matrix(Bw, j));
  Mat shifted(Bw.dim() * n_comp, static_cast<Eigen::Index>(res.low_kernel_dim) * B.d());
  for (int j = 0; j < B.d(); ++j)
    for (int c = 0; c < res.low_kernel_dim; ++c) {
      Vec col = low_basis.col(c);
      Vec out(Bw.dim() * n_comp);
      for (int i = 0; i < n_comp; ++i)
        out.segment(static_cast<Eigen::Index>(i) * Bw.dim(), Bw.dim()) =
            Rs[static_cast<std::size_t>(j)] * col.segment(static_cast<Eigen::Index>(i) * Bw.dim(), Bw.dim());
      shifted.col(static_cast<Eigen::Index>(j) * res.low_kernel_dim + c) = out;
    }
  Mat projected = ker.basis.adjoint() * shifted;
  int shifted_rank = rank_svd(projected, tol);
  res.wandering_dim = res.kernel_dim - shifted_rank;
  return res;
}

inline std::vector<std::pair<double, KernelWanderingResult>> ell_profile(
    const std::vector<FreeSeries>& F, const std::vector<double>& r_grid, const FockBasis& B,
    double tol = 1e-8) {
  std::vector<std::pair<double, KernelWanderingResult>> out;
  out.reserve(r_grid.size());
  for (double r : r_grid) out.emplace_back(r, kernel_wandering_dim(F, r, B, tol));
  return out;
}

// Wandering dimension of the closed range of F(rL) within the faithful
// window; bounded by the number of row components.
inline int range_wandering_dim(const std::vector<FreeSeries>& F, double r, const FockBasis& B,
                               double tol = 1e-8) {
  int degF = row_degree(F);
  int window = B.degree() - degF;
  if (window < 1) throw std::invalid_argument("range_wandering_dim: window too small");
  Mat M = detail::restricted_row_matrix(F, r, B, window);
  // Range vectors live in H^2_{<= N}; keep those supported below the top so
  // shifting by R_j stays inside the model.
  NullSpace range = column_space(M, tol);
  if (range.basis.cols() == 0) return 0;
  FockBasis Blow(B.d(), B.degree() - 1);
  Mat top = range.basis.bottomRows(B.dim() - Blow.dim());
  NullSpace low_combo = null_space(top, tol);
  Mat low_basis = range.basis * low_combo.basis;
  Mat shifted(B.dim(), low_basis.cols() * B.d());
  for (int j = 1; j <= B.d(); ++j) {
    SpMat R = right_creation_matrix(B, j);
    for (Eigen::Index c = 0; c < low_basis.cols(); ++c)
      shifted.col(static_cast<Eigen::Index>(j - 1) * low_basis.cols() + c) = R * low_basis.col(c);
  }
  Mat projected = range.basis.adjoint() * shifted;
  return static_cast<int>(range.basis.cols()) - rank_svd(projected, tol);
}

// ---- directional varieties -------------------------------------------------

struct VarietySample {
  MatrixTuple X;
  Vec y;            // left direction: y^* f(X) = 0 for all generators
  double residual;  // max_i ||y^* f_i(X)|| / ||y||
};

namespace detail {
inline bool letter_used(const std::vector<FreeSeries>& gens, int j) {
  for (const auto& f : gens)
    for (int l = 1; l <= f.cutoff(); ++l)
      for (const auto& [k, v] : f.level(l)) {
        (void)v;
        Word w = Word::from_lex_index(f.d(), l, k);
        for (int a : w.letters())
          if (a == j) return true;
      }
  return false;
}
inline bool has_constant_term(const std::vector<FreeSeries>& gens) {
  for (const auto& f : gens)
    if (!f.level(0).empty()) return true;
  return false;
}
}  // namespace detail

// Draws tuples X with a planted common left-null direction (when the
// generators permit one: every generator free of constant term) and then
// extracts the left null space of the stacked row [f_1(X) ... f_m(X)] by
// singular-value threshold. Generator sets containing a unit never admit a
// null direction and produce an empty sample list.
inline std::vector<VarietySample> variety_sample(const std::vector<FreeSeries>& gens, int level,
                                                 int trials, std::uint64_t seed, double tol = 1e-10) {
  if (gens.empty()) throw std::invalid_argument("variety_sample: no generators");
  if (level < 1) throw std::invalid_argument("variety_sample: level must be >= 1");
  int d = gens[0].d();
  for (const auto& g : gens)
    if (g.d() != d) throw std::invalid_argument("variety_sample: mixed dimensions");
  bool plantable = !detail::has_constant_term(gens);

  std::vector<VarietySample> out;
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(level), static_cast<std::uint64_t>(t), 0xbead));
    MatrixTuple X(level, d);
    double scale = 1.0 / std::sqrt(static_cast<double>(level));
    for (int j = 0; j < d; ++j) X.X[static_cast<std::size_t>(j)] = scale * rng.gaussian_matrix(level, level);
    if (plantable) {
      // plant y^* X_j = 0 on every letter the generators use
      Vec y = rng.gaussian_vector(level).normalized();
      for (int j = 1; j <= d; ++j)
        if (detail::letter_used(gens, j)) {
          Mat& Xj = X.X[static_cast<std::size_t>(j - 1)];
          Xj -= y * (y.adjoint() * Xj);
        }
    }
    Mat stacked(level, static_cast<Eigen::Index>(gens.size()) * level);
    for (std::size_t i = 0; i < gens.size(); ++i)
      stacked.middleCols(static_cast<Eigen::Index>(i) * level, level) = eval_poly(gens[i], X);
    // left null space = null space of the adjoint
    NullSpace ns = null_space(Mat(stacked.adjoint()), tol);
    for (Eigen::Index c = 0; c < ns.basis.cols(); ++c) {
      VarietySample s{X, ns.basis.col(c), 0.0};
      double worst = 0.0;
      for (std::size_t i = 0; i < gens.size(); ++i)
        worst = std::max(worst,
                         (s.y.adjoint() * stacked.middleCols(static_cast<Eigen::Index>(i) * level, level)).norm());
      s.residual = worst;
      out.push_back(std::move(s));
    }
  }
  return out;
}

struct NullstellensatzReport {
  int samples = 0;
  double max_violation = 0.0;
  std::vector<double> per_sample;  // ||y^* h(X)|| / ||y||, the sup over unit v
};

// Violations ||y^* h(X)|| / ||y|| at each sample; this is the supremum of
// |y^* h(X) v| / (||y|| ||v||) over all directions v.
inline NullstellensatzReport nullstellensatz_check_element(const FreeSeries& h,
                                                           const std::vector<VarietySample>& samples) {
  NullstellensatzReport rep;
  rep.samples = static_cast<int>(samples.size());
  for (const auto& s : samples) {
    Mat hx = eval_poly(h, s.X);
    double v = (s.y.adjoint() * hx).norm() / s.y.norm();
    rep.per_sample.push_back(v);
    rep.max_violation = std::max(rep.max_violation, v);
  }
  return rep;
}

// Checks the containment direction of the ideal/variety duality: h in the
// right ideal generated by the f_i must annihilate every variety sample from
// the left. h is formed as sum f_i g_i by series arithmetic at a common
// cutoff large enough to be exact.
inline NullstellensatzReport nullstellensatz_check(const std::vector<FreeSeries>& gens,
                                                   const std::vector<FreeSeries>& coeffs,
                                                   const std::vector<VarietySample>& samples) {
  if (gens.size() != coeffs.size()) throw std::invalid_argument("nullstellensatz_check: need one coefficient per generator");
  if (gens.empty()) throw std::invalid_argument("nullstellensatz_check: no generators");
  int need = 0;
  for (std::size_t i = 0; i < gens.size(); ++i)
    need = std::max(need, row_degree({gens[i]}) + row_degree({coeffs[i]}));
  FreeSeries h(gens[0].d(), need);
  for (std::size_t i = 0; i < gens.size(); ++i)
    h = series_add(h, series_mul(with_cutoff(gens[i], need), with_cutoff(coeffs[i], need)));
  return nullstellensatz_check_element(h, samples);
}

}  // namespace ncfa
