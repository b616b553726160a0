#pragma once

// Degree-truncated full Fock space over C^d: basis indexing, left/right
// creation operators, free semicircular tuples s_j = L_j + L_j^*, vacuum
// trace, left-multiplication matrices f(rL), Hardy seminorms and Szego
// kernel vectors. Everything here is a finite compression: creation past
// the top degree maps to zero, so computed norms increase towards their
// infinite-dimensional values as the truncation degree grows.

#include <vector>

#include "ncfa/eval.hpp"
#include "ncfa/linalg.hpp"
#include "ncfa/series.hpp"
#include "ncfa/tuple.hpp"
#include "ncfa/word.hpp"

namespace ncfa {

constexpr std::uint64_t kDefaultFockDimCap = 200000;

// Basis of the degree <= N truncation, ordered degree-major then
// lexicographic. Index 0 is the vacuum (empty word).
class FockBasis {
 public:
  FockBasis(int d, int N, std::uint64_t dim_cap = kDefaultFockDimCap) : d_(d), N_(N) {
    if (d < 1 || N < 0) throw std::invalid_argument("FockBasis: need d >= 1, N >= 0");
    std::uint64_t dim = dimension(d, N);
    if (dim > dim_cap)
      throw std::invalid_argument("FockBasis: dimension " + std::to_string(dim) +
                                  " exceeds the memory cap " + std::to_string(dim_cap));
    offset_.resize(static_cast<std::size_t>(N) + 2);
    offset_[0] = 0;
    std::uint64_t count = 1;
    for (int l = 0; l <= N; ++l) {
      offset_[static_cast<std::size_t>(l) + 1] = offset_[static_cast<std::size_t>(l)] + count;
      count *= static_cast<std::uint64_t>(d);
    }
  }

  static std::uint64_t dimension(int d, int N) {
    std::uint64_t dim = 0, count = 1;
    for (int l = 0; l <= N; ++l) {
      if (dim > UINT64_MAX - count) throw std::overflow_error("FockBasis: dimension overflows");
      dim += count;
      if (l < N && count > UINT64_MAX / static_cast<std::uint64_t>(d))
        throw std::overflow_error("FockBasis: dimension overflows");
      if (l < N) count *= static_cast<std::uint64_t>(d);
    }
    return dim;
  }

  int d() const { return d_; }
  int degree() const { return N_; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(offset_[static_cast<std::size_t>(N_) + 1]); }

  Eigen::Index level_offset(int l) const { return static_cast<Eigen::Index>(offset_.at(static_cast<std::size_t>(l))); }
  Eigen::Index level_size(int l) const {
    return static_cast<Eigen::Index>(offset_.at(static_cast<std::size_t>(l) + 1) - offset_.at(static_cast<std::size_t>(l)));
  }

  Eigen::Index index(const Word& w) const {
    if (w.d() != d_ || w.length() > N_) throw std::invalid_argument("FockBasis::index: word outside the basis");
    return level_offset(w.length()) + static_cast<Eigen::Index>(w.lex_index());
  }
  Eigen::Index index(int length, std::uint64_t lex) const {
    return level_offset(length) + static_cast<Eigen::Index>(lex);
  }

  Word word(Eigen::Index idx) const {
    for (int l = 0; l <= N_; ++l)
      if (idx < level_offset(l) + level_size(l))
        return Word::from_lex_index(d_, l, static_cast<std::uint64_t>(idx - level_offset(l)));
    throw std::out_of_range("FockBasis::word: index out of range");
  }

 private:
  int d_, N_;
  std::vector<std::uint64_t> offset_;
};

// L_j: z^w -> z^{jw} for |w| < N, 0 at the top degree.
inline SpMat left_creation_matrix(const FockBasis& B, int j) {
  if (j < 1 || j > B.d()) throw std::invalid_argument("left_creation_matrix: letter out of range");
  SpMat L(B.dim(), B.dim());
  std::vector<Eigen::Triplet<cplx>> trips;
  for (int l = 0; l + 1 <= B.degree(); ++l) {
    std::uint64_t count = static_cast<std::uint64_t>(B.level_size(l));
    // prepending letter j: lex index gains (j-1) d^l in the most significant digit
    std::uint64_t shift = static_cast<std::uint64_t>(j - 1) * count;
    for (std::uint64_t k = 0; k < count; ++k)
      trips.emplace_back(B.index(l + 1, shift + k), B.index(l, k), cplx(1.0, 0.0));
  }
  L.setFromTriplets(trips.begin(), trips.end());
  return L;
}

// R_j: z^w -> z^{wj} likewise.
inline SpMat right_creation_matrix(const FockBasis& B, int j) {
  if (j < 1 || j > B.d()) throw std::invalid_argument("right_creation_matrix: letter out of range");
  SpMat R(B.dim(), B.dim());
  std::vector<Eigen::Triplet<cplx>> trips;
  for (int l = 0; l + 1 <= B.degree(); ++l) {
    std::uint64_t count = static_cast<std::uint64_t>(B.level_size(l));
    for (std::uint64_t k = 0; k < count; ++k)
      trips.emplace_back(B.index(l + 1, k * static_cast<std::uint64_t>(B.d()) + static_cast<std::uint64_t>(j - 1)),
                         B.index(l, k), cplx(1.0, 0.0));
  }
  R.setFromTriplets(trips.begin(), trips.end());
  return R;
}

// s_j = L_j + L_j^*. This normalization reproduces the even moments
// tau(s^k) = 2/(k+2) binom(k, k/2) exactly once the truncation degree
// reaches k, and ||s_j|| -> 2.
inline SpMat semicircular_matrix(const FockBasis& B, int j) {
  SpMat L = left_creation_matrix(B, j);
  return L + SpMat(L.adjoint());
}

// <vacuum, M vacuum>: the normalized vacuum trace functional.
inline cplx vacuum_trace(const Mat& M) {
  if (M.rows() == 0 || M.rows() != M.cols()) throw std::invalid_argument("vacuum_trace: size mismatch");
  return M(0, 0);
}
inline cplx vacuum_trace(const SpMat& M) {
  if (M.rows() == 0 || M.rows() != M.cols()) throw std::invalid_argument("vacuum_trace: size mismatch");
  return M.coeff(0, 0);
}

// Mass of f invisible at truncation degree N (l2 norm over dropped degrees,
// infinite-tail part summed when geometric).
inline double dropped_mass(const FreeSeries& f, int N) {
  double s2 = 0.0;
  int hi = f.cutoff() + (f.tail() ? static_cast<int>(f.tail()->bounds.size()) : 0);
  for (int l = N + 1; l <= hi; ++l) {
    auto h = f.homogeneous_norm_opt(l);
    if (h) s2 += *h * *h;
  }
  if (f.tail() && f.tail()->geo_ratio != 0.0) {
    double r2 = f.tail()->geo_ratio * f.tail()->geo_ratio;
    auto base = f.homogeneous_norm_opt(std::max(hi, N));
    if (base && r2 < 1.0) s2 += (*base * *base) * r2 / (1.0 - r2);
    else if (base && *base > 0.0) return std::numeric_limits<double>::infinity();
  }
  return std::sqrt(s2);
}

// f(rL) = sum_w f_w r^|w| L^w as a sparse matrix: entry at (index(aw), index(w))
// is f_a r^|a|. Degrees of f above N act as zero under the truncation; use
// dropped_mass to audit what was cut.
inline SpMat left_mult_matrix(const FreeSeries& f, const FockBasis& B, double r) {
  if (f.d() != B.d()) throw std::invalid_argument("left_mult_matrix: dimension mismatch");
  if (!(r > 0.0)) throw std::invalid_argument("left_mult_matrix: r must be positive");
  std::vector<Eigen::Triplet<cplx>> trips;
  double rl = 1.0;
  for (int la = 0; la <= std::min(f.cutoff(), B.degree()); ++la) {
    for (const auto& [ka, va] : f.level(la)) {
      cplx scaled = va * rl;
      for (int lw = 0; la + lw <= B.degree(); ++lw) {
        std::uint64_t count = static_cast<std::uint64_t>(B.level_size(lw));
        // lex(aw) = lex(a) * d^{|w|} + lex(w)
        std::uint64_t base = ka * count;
        for (std::uint64_t k = 0; k < count; ++k)
          trips.emplace_back(B.index(la + lw, base + k), B.index(lw, k), scaled);
      }
    }
    rl *= r;
  }
  // Radial extension beyond the stored cutoff (degrees <= N only).
  if (f.radial()) {
    for (int la = f.cutoff() + 1; la <= B.degree(); ++la, rl *= r) {
      auto a = f.radial_coeff(la);
      if (!a || *a == cplx(0.0, 0.0)) continue;
      cplx scaled = *a * rl;
      std::uint64_t countA = static_cast<std::uint64_t>(B.level_size(la));
      for (std::uint64_t ka = 0; ka < countA; ++ka)
        for (int lw = 0; la + lw <= B.degree(); ++lw) {
          std::uint64_t count = static_cast<std::uint64_t>(B.level_size(lw));
          std::uint64_t base = ka * count;
          for (std::uint64_t k = 0; k < count; ++k)
            trips.emplace_back(B.index(la + lw, base + k), B.index(lw, k), scaled);
        }
    }
  }
  SpMat M(B.dim(), B.dim());
  M.setFromTriplets(trips.begin(), trips.end());
  return M;
}

// rho_r(f) at truncation degree N: the largest singular value of f(rL).
// Nondecreasing in N; callers track several N for convergence.
inline double seminorm_rho(const FreeSeries& f, double r, const FockBasis& B) {
  return operator_norm(left_mult_matrix(f, B, r));
}

// Szego kernel vector K{Z,y,v}: coefficient conj(y^* Z^w v) at z^w, degrees
// <= N. The vector reproduces point evaluations: <K, f> = y^* f(Z) v for
// polynomials f of degree <= N.
inline Vec szego_vector(const MatrixTuple& Z, const Vec& y, const Vec& v, const FockBasis& B) {
  if (Z.d != B.d()) throw std::invalid_argument("szego_vector: dimension mismatch");
  if (y.size() != Z.n || v.size() != Z.n) throw std::invalid_argument("szego_vector: vector size mismatch");
  Vec K(B.dim());
  // walk degrees with the prefix recursion v_w = Z^w v -> v_{jw} = Z_j v_w
  std::vector<Vec> prev{v};
  K(0) = std::conj(y.dot(v));  // y.dot(v) = y^* v
  for (int l = 1; l <= B.degree(); ++l) {
    std::uint64_t dl = static_cast<std::uint64_t>(B.level_size(l - 1));
    std::vector<Vec> cur(static_cast<std::size_t>(dl) * static_cast<std::size_t>(Z.d));
    for (int j = 0; j < Z.d; ++j)
      for (std::uint64_t k = 0; k < dl; ++k)
        cur[static_cast<std::size_t>(j) * dl + k] = Z.X[static_cast<std::size_t>(j)] * prev[k];
    for (std::uint64_t k = 0; k < static_cast<std::uint64_t>(B.level_size(l)); ++k)
      K(B.index(l, k)) = std::conj(y.dot(cur[k]));
    prev = std::move(cur);
  }
  return K;
}

// Vector-multiplicity variant: y stacked as k blocks of length n yields the
// stacked kernel (one block of coefficients per component).
inline Mat szego_vector_stacked(const MatrixTuple& Z, const Vec& y_stacked, const Vec& v, const FockBasis& B) {
  if (y_stacked.size() % Z.n != 0) throw std::invalid_argument("szego_vector_stacked: y must stack n-blocks");
  Eigen::Index k = y_stacked.size() / Z.n;
  Mat K(B.dim(), k);
  for (Eigen::Index i = 0; i < k; ++i) K.col(i) = szego_vector(Z, y_stacked.segment(i * Z.n, Z.n), v, B);
  return K;
}

// <g, f> = sum_w conj(g_w) f_w for truncated Fock vectors.
inline cplx fock_inner(const Vec& g, const Vec& f) { return g.dot(f); }

// Fock-space vector of a polynomial's coefficients.
inline Vec series_to_fock(const FreeSeries& f, const FockBasis& B) {
  if (f.d() != B.d()) throw std::invalid_argument("series_to_fock: dimension mismatch");
  Vec out = Vec::Zero(B.dim());
  for (int l = 0; l <= std::min(f.cutoff(), B.degree()); ++l)
    for (const auto& [k, v] : f.level(l)) out(B.index(l, k)) = v;
  return out;
}

}  // namespace ncfa
