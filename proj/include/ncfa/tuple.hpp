#pragma once

// Points of the NC universe: d-tuples of n x n complex matrices, the row
// norm, the adjunction map T -> sum X_j T X_j^*, and the joint spectral
// radius computed from iterates of the adjunction map.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncfa/linalg.hpp"

namespace ncfa {

struct MatrixTuple {
  int n = 0;
  int d = 0;
  std::vector<Mat> X;

  MatrixTuple() = default;
  MatrixTuple(int n_, int d_) : n(n_), d(d_), X(static_cast<std::size_t>(d_), Mat::Zero(n_, n_)) {
    if (n_ < 1 || d_ < 1) throw std::invalid_argument("MatrixTuple: n, d must be >= 1");
  }
  explicit MatrixTuple(std::vector<Mat> mats) : X(std::move(mats)) {
    if (X.empty()) throw std::invalid_argument("MatrixTuple: empty tuple");
    n = static_cast<int>(X[0].rows());
    d = static_cast<int>(X.size());
    for (const auto& m : X)
      if (m.rows() != n || m.cols() != n) throw std::invalid_argument("MatrixTuple: components must be square of equal size");
  }

  static MatrixTuple scalars(std::vector<cplx> xs) {
    std::vector<Mat> mats;
    for (cplx x : xs) {
      Mat m(1, 1);
      m(0, 0) = x;
      mats.push_back(m);
    }
    return MatrixTuple(std::move(mats));
  }
};

// sum_j X_j T X_j^*
inline Mat adjunction(const MatrixTuple& X, const Mat& T) {
  if (T.rows() != X.n || T.cols() != X.n) throw std::invalid_argument("adjunction: size mismatch");
  Mat out = Mat::Zero(X.n, X.n);
  for (const auto& Xj : X.X) out += Xj * T * Xj.adjoint();
  return out;
}

// Norm of (X_1 ... X_d) as an operator from nd-space to n-space:
// sqrt || sum X_j X_j^* ||.
inline double row_norm(const MatrixTuple& X) {
  Mat s = adjunction(X, Mat::Identity(X.n, X.n));
  Eigen::SelfAdjointEigenSolver<Mat> es(s, Eigen::EigenvaluesOnly);
  double lmax = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(lmax, 0.0));
}

struct JsrResult {
  double value = 0.0;           // converged estimate of the joint spectral radius
  int iterations = 0;           // adjunction applications performed
  bool converged = false;
  // Gelfand roots ||Ad^m(I)||^(1/2m) and their running minimum; by
  // submultiplicativity every entry of the envelope is a certified upper
  // bound on the radius.
  std::vector<double> roots;
  std::vector<double> upper_envelope;
};

// Gelfand sequence on the adjunction map. The raw roots converge only like
// O(1/m), so the returned value uses the geometric mean of the norm growth
// over the trailing half of the trajectory (equivalently, Richardson
// extrapolation of the roots in 1/m), which converges at the spectral-gap
// rate. The raw roots stay available as a certified upper envelope.
inline JsrResult joint_spectral_radius(const MatrixTuple& X, int m_max = 4000, double tol = 1e-10) {
  if (m_max < 2) throw std::invalid_argument("joint_spectral_radius: m_max must be >= 2");
  JsrResult res;
  Mat M = Mat::Identity(X.n, X.n);
  std::vector<double> logg(1, 0.0);  // log ||Ad^m(I)||, m = 0..
  double acc = 0.0;
  double env = std::numeric_limits<double>::infinity();
  double refined_prev = -1.0;
  int stable = 0;
  for (int m = 1; m <= m_max; ++m) {
    M = adjunction(X, M);
    Eigen::SelfAdjointEigenSolver<Mat> es(M, Eigen::EigenvaluesOnly);
    double s = es.eigenvalues().maxCoeff();
    res.iterations = m;
    if (s <= 0.0) {
      // Nilpotent adjunction: Ad^m(I) vanished exactly.
      res.value = 0.0;
      res.converged = true;
      res.roots.push_back(0.0);
      res.upper_envelope.push_back(0.0);
      return res;
    }
    M /= s;
    acc += std::log(s);
    logg.push_back(acc);
    double root = std::exp(acc / (2.0 * m));
    env = std::min(env, root);
    res.roots.push_back(root);
    res.upper_envelope.push_back(env);
    if (m >= 4) {
      int h = m / 2;
      double refined = std::exp((logg[static_cast<std::size_t>(m)] - logg[static_cast<std::size_t>(h)]) /
                                (2.0 * (m - h)));
      if (refined_prev >= 0.0 &&
          std::abs(refined - refined_prev) <= tol * std::max(refined, 1e-300)) {
        if (++stable >= 3) {
          res.value = refined;
          res.converged = true;
          return res;
        }
      } else {
        stable = 0;
      }
      refined_prev = refined;
    }
  }
  res.value = refined_prev >= 0.0 ? refined_prev : env;
  res.converged = false;
  return res;
}

inline MatrixTuple direct_sum(const MatrixTuple& X, const MatrixTuple& Y) {
  if (X.d != Y.d) throw std::invalid_argument("direct_sum: dimension mismatch");
  MatrixTuple out(X.n + Y.n, X.d);
  for (int j = 0; j < X.d; ++j) {
    out.X[static_cast<std::size_t>(j)].topLeftCorner(X.n, X.n) = X.X[static_cast<std::size_t>(j)];
    out.X[static_cast<std::size_t>(j)].bottomRightCorner(Y.n, Y.n) = Y.X[static_cast<std::size_t>(j)];
  }
  return out;
}

// Componentwise S^{-1} X_j S; rejects S whose condition number exceeds the cap.
inline MatrixTuple similarity(const MatrixTuple& X, const Mat& S, double cond_cap = 1e8) {
  if (S.rows() != X.n || S.cols() != X.n) throw std::invalid_argument("similarity: size mismatch");
  Eigen::BDCSVD<Mat> svd(S, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double smin = svd.singularValues()(svd.singularValues().size() - 1);
  double smax = svd.singularValues()(0);
  if (!(smin > 0.0) || smax / smin > cond_cap)
    throw std::invalid_argument("similarity: S numerically singular (condition cap exceeded)");
  Eigen::PartialPivLU<Mat> lu(S);
  MatrixTuple out(X.n, X.d);
  for (int j = 0; j < X.d; ++j) out.X[static_cast<std::size_t>(j)] = lu.solve(X.X[static_cast<std::size_t>(j)] * S);
  return out;
}

inline double condition_number(const Mat& S) {
  Eigen::BDCSVD<Mat> svd(S);
  double smin = svd.singularValues()(svd.singularValues().size() - 1);
  return smin > 0.0 ? svd.singularValues()(0) / smin : std::numeric_limits<double>::infinity();
}

// ---- text format ----------------------------------------------------------
// #nctuple n=<n> d=<d>
// then d blocks of n rows, each row n comma-separated re+imi entries.

namespace detail {
inline std::string fmt_entry(cplx v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", v.real(), v.imag());
  return buf;
}

inline cplx parse_entry(const std::string& tok) {
  // re, or re+imi / re-imi with the sign splitting the two parts.
  const char* s = tok.c_str();
  char* end = nullptr;
  double re = std::strtod(s, &end);
  if (end == s) throw std::runtime_error("tuple parse: bad entry " + tok);
  while (*end == ' ') ++end;
  if (*end == '\0') return cplx(re, 0.0);
  const char* imstart = end;
  char* imend = nullptr;
  double im = std::strtod(imstart, &imend);
  if (imend == imstart || *imend != 'i') throw std::runtime_error("tuple parse: bad entry " + tok);
  return cplx(re, im);
}
}  // namespace detail

inline void save_tuple(const MatrixTuple& X, std::ostream& os) {
  os << "#nctuple n=" << X.n << " d=" << X.d << "\n";
  for (const auto& m : X.X)
    for (int i = 0; i < X.n; ++i) {
      for (int j = 0; j < X.n; ++j) {
        if (j) os << ",";
        os << detail::fmt_entry(m(i, j));
      }
      os << "\n";
    }
}

inline void save_tuple(const MatrixTuple& X, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_tuple: cannot open " + path);
  save_tuple(X, os);
}

inline MatrixTuple load_tuple(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("load_tuple: empty input");
  int n = 0, d = 0;
  if (std::sscanf(line.c_str(), "#nctuple n=%d d=%d", &n, &d) != 2)
    throw std::runtime_error("load_tuple: bad header: " + line);
  MatrixTuple X(n, d);
  for (int b = 0; b < d; ++b)
    for (int i = 0; i < n; ++i) {
      if (!std::getline(is, line)) throw std::runtime_error("load_tuple: truncated file");
      std::stringstream ss(line);
      std::string tok;
      for (int j = 0; j < n; ++j) {
        if (!std::getline(ss, tok, ',')) throw std::runtime_error("load_tuple: short row");
        X.X[static_cast<std::size_t>(b)](i, j) = detail::parse_entry(tok);
      }
    }
  return X;
}

inline MatrixTuple load_tuple_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_tuple: cannot open " + path);
  return load_tuple(is);
}

}  // namespace ncfa
