#pragma once

// Shared dense/sparse linear algebra: operator norms, rank decisions with
// reported spectral gaps, Kronecker products. Eigen does the heavy lifting.

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <Eigen/Sparse>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace ncfa {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using SpMat = Eigen::SparseMatrix<std::complex<double>>;

inline bool is_hermitian(const Mat& m, double tol = 1e-13) {
  if (m.rows() != m.cols()) return false;
  double scale = m.cwiseAbs().maxCoeff();
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(scale, 1.0);
}

// Largest singular value. Hermitian inputs go through the symmetric
// eigensolver, everything else through SVD.
inline double operator_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  if (is_hermitian(m)) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  if (m.rows() == 1 || m.cols() == 1) return std::sqrt(m.squaredNorm());
  Eigen::BDCSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

namespace detail {
// Deterministic start vector for power iterations.
inline Vec power_start(Eigen::Index n) {
  Vec v(n);
  std::uint64_t s = 0x9e3779b97f4a7c15ULL;
  for (Eigen::Index i = 0; i < n; ++i) {
    s ^= s >> 12;
    s ^= s << 25;
    s ^= s >> 27;
    double re = static_cast<double>(s * 0x2545F4914F6CDD1DULL >> 11) * 0x1.0p-53 - 0.5;
    s ^= s >> 12;
    s ^= s << 25;
    s ^= s >> 27;
    double im = static_cast<double>(s * 0x2545F4914F6CDD1DULL >> 11) * 0x1.0p-53 - 0.5;
    v(i) = std::complex<double>(re, im);
  }
  v.normalize();
  return v;
}
}  // namespace detail

// Power iteration on M^*M; returns sqrt of the dominant eigenvalue. Used as
// an independent cross-check of the SVD route and as the only viable route
// for large sparse operators.
template <typename Op>
double operator_norm_power_impl(const Op& m, int max_iter, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Vec v = detail::power_start(m.cols());
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vec w = m * v;
    Vec u = m.adjoint() * w;
    double nl = std::sqrt(u.norm());
    if (nl == 0.0) return 0.0;
    u /= u.norm();
    double delta = std::abs(nl - lambda);
    lambda = nl;
    v = u;
    if (it > 4 && delta <= tol * std::max(lambda, 1e-300)) break;
  }
  return lambda;
}

inline double operator_norm_power(const Mat& m, int max_iter = 20000, double tol = 1e-13) {
  return operator_norm_power_impl(m, max_iter, tol);
}

inline double operator_norm(const SpMat& m, int max_iter = 20000, double tol = 1e-13) {
  // Small sparse matrices are cheaper dense.
  if (m.rows() <= 768 && m.cols() <= 768) return operator_norm(Mat(m));
  return operator_norm_power_impl(m, max_iter, tol);
}

// Rank decision with the spectral gap around the relative threshold exposed,
// so borderline calls are visible to callers.
struct RankDecision {
  int rank = 0;
  double sigma_kept = 0.0;     // smallest singular value counted nonzero
  double sigma_dropped = 0.0;  // largest singular value counted zero
  double gap() const {
    if (rank == 0) return std::numeric_limits<double>::infinity();
    if (sigma_dropped <= 0.0) return std::numeric_limits<double>::infinity();
    return sigma_kept / sigma_dropped;
  }
};

inline RankDecision rank_decision(const Eigen::VectorXd& singular_values, Eigen::Index total_cols,
                                  double rel_tol) {
  RankDecision rd;
  double smax = singular_values.size() > 0 ? singular_values(0) : 0.0;
  double thr = rel_tol * smax;
  for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
    if (singular_values(i) > thr && singular_values(i) > 0.0) {
      rd.rank++;
      rd.sigma_kept = singular_values(i);
    } else {
      rd.sigma_dropped = std::max(rd.sigma_dropped, singular_values(i));
    }
  }
  (void)total_cols;
  return rd;
}

// Orthonormal basis of the (right) null space of a under the relative
// threshold; columns beyond min(rows, cols) are exact null directions.
struct NullSpace {
  Mat basis;
  RankDecision decision;
};

inline NullSpace null_space(const Mat& a, double rel_tol = 1e-8) {
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  NullSpace ns;
  ns.decision = rank_decision(svd.singularValues(), a.cols(), rel_tol);
  Eigen::Index nullity = a.cols() - ns.decision.rank;
  ns.basis = svd.matrixV().rightCols(nullity);
  return ns;
}

// Orthonormal basis of the column space under the relative threshold.
inline NullSpace column_space(const Mat& a, double rel_tol = 1e-8) {
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU);
  NullSpace cs;
  cs.decision = rank_decision(svd.singularValues(), a.cols(), rel_tol);
  cs.basis = svd.matrixU().leftCols(cs.decision.rank);
  return cs;
}

inline int rank_svd(const Mat& a, double rel_tol = 1e-8) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(a);
  return rank_decision(svd.singularValues(), a.cols(), rel_tol).rank;
}

// Independent rank route via column-pivoted QR, for cross-checks.
inline int rank_cpqr(const Mat& a, double rel_tol = 1e-8) {
  if (a.size() == 0) return 0;
  Eigen::ColPivHouseholderQR<Mat> qr(a);
  qr.setThreshold(rel_tol);
  return static_cast<int>(qr.rank());
}

// (arg ⊗ coeff) Kronecker product; the argument block indexes the slow axis.
inline Mat kron(const Mat& arg, const Mat& coeff) {
  Mat out(arg.rows() * coeff.rows(), arg.cols() * coeff.cols());
  for (Eigen::Index i = 0; i < arg.rows(); ++i)
    for (Eigen::Index j = 0; j < arg.cols(); ++j)
      out.block(i * coeff.rows(), j * coeff.cols(), coeff.rows(), coeff.cols()) = arg(i, j) * coeff;
  return out;
}

}  // namespace ncfa
