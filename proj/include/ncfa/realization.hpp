#pragma once

// NC rational/meromorphic expressions as syntax trees and their linear-pencil
// realizations (A_0..A_k, b, c): f = b^* (A_0 + sum A_j z_j)^{-1} c, built by
// structural induction. Evaluation substitutes matrix arguments through the
// Kronecker pencil sum X_j (x) A_j and goes through a linear solve.

#include <memory>
#include <string>
#include <vector>

#include "ncfa/eval.hpp"
#include "ncfa/linalg.hpp"
#include "ncfa/series.hpp"
#include "ncfa/tuple.hpp"

namespace ncfa {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Node kinds: Const(c), Var(i) (coordinate argument), Leaf (an entire series
// used as an argument), Add, Mul, Inv.
struct Expr {
  enum class Kind { Const, Var, Leaf, Add, Mul, Inv };
  Kind kind;
  cplx value{};                              // Const
  int var = 0;                               // Var (1-based)
  std::shared_ptr<const FreeSeries> series;  // Leaf
  ExprPtr a, b;

  static ExprPtr constant(cplx c) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Const;
    e->value = c;
    return e;
  }
  static ExprPtr variable(int i) {
    if (i < 1) throw std::invalid_argument("Expr: variable index must be >= 1");
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Var;
    e->var = i;
    return e;
  }
  static ExprPtr leaf(FreeSeries s) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Leaf;
    e->series = std::make_shared<const FreeSeries>(std::move(s));
    return e;
  }
  static ExprPtr add(ExprPtr x, ExprPtr y) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Add;
    e->a = std::move(x);
    e->b = std::move(y);
    return e;
  }
  static ExprPtr mul(ExprPtr x, ExprPtr y) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Mul;
    e->a = std::move(x);
    e->b = std::move(y);
    return e;
  }
  static ExprPtr inv(ExprPtr x) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Inv;
    e->a = std::move(x);
    return e;
  }
  static ExprPtr neg(ExprPtr x) { return mul(constant(-1.0), std::move(x)); }
  static ExprPtr sub(ExprPtr x, ExprPtr y) { return add(std::move(x), neg(std::move(y))); }
};

// Pencil data: k+1 coefficient matrices A[0..k] of size m and vectors b, c.
struct Realization {
  int m = 0;
  int k = 0;
  std::vector<Mat> A;  // A[0] is the constant block
  Vec b, c;
};

// What each pencil variable slot stands for: a coordinate of the evaluated
// tuple, or an entire-series leaf.
struct ArgBinding {
  int coordinate = 0;  // 1-based; 0 when a series leaf
  std::shared_ptr<const FreeSeries> series;
};

struct BoundRealization {
  Realization R;
  std::vector<ArgBinding> args;  // size k
};

namespace detail {

inline void collect_slots(const ExprPtr& e, int& max_var,
                          std::vector<std::shared_ptr<const FreeSeries>>& leaves) {
  switch (e->kind) {
    case Expr::Kind::Const:
      return;
    case Expr::Kind::Var:
      max_var = std::max(max_var, e->var);
      return;
    case Expr::Kind::Leaf: {
      for (const auto& s : leaves)
        if (s == e->series) return;
      leaves.push_back(e->series);
      return;
    }
    case Expr::Kind::Inv:
      collect_slots(e->a, max_var, leaves);
      return;
    default:
      collect_slots(e->a, max_var, leaves);
      collect_slots(e->b, max_var, leaves);
      return;
  }
}

// Structural induction on the tree. Slot indices are fixed beforehand so
// sub-realizations agree on the meaning of each pencil variable.
inline Realization realize_node(const ExprPtr& e, int k,
                                const std::vector<std::shared_ptr<const FreeSeries>>& leaves,
                                int first_leaf_slot) {
  auto zero_pencil = [&](int m) {
    Realization r;
    r.m = m;
    r.k = k;
    r.A.assign(static_cast<std::size_t>(k) + 1, Mat::Zero(m, m));
    r.b = Vec::Zero(m);
    r.c = Vec::Zero(m);
    return r;
  };
  switch (e->kind) {
    case Expr::Kind::Const: {
      Realization r = zero_pencil(1);
      r.A[0](0, 0) = 1.0;
      r.b(0) = 1.0;
      r.c(0) = e->value;
      return r;
    }
    case Expr::Kind::Var:
    case Expr::Kind::Leaf: {
      int slot = e->var;
      if (e->kind == Expr::Kind::Leaf) {
        slot = 0;
        for (std::size_t i = 0; i < leaves.size(); ++i)
          if (leaves[i] == e->series) slot = first_leaf_slot + static_cast<int>(i);
      }
      Realization r = zero_pencil(2);
      r.A[0] = Mat::Identity(2, 2);
      r.A[static_cast<std::size_t>(slot)](0, 1) = -1.0;
      r.b(0) = 1.0;
      r.c(1) = 1.0;
      return r;
    }
    case Expr::Kind::Add: {
      Realization f = realize_node(e->a, k, leaves, first_leaf_slot);
      Realization g = realize_node(e->b, k, leaves, first_leaf_slot);
      Realization r = zero_pencil(f.m + g.m);
      for (int j = 0; j <= k; ++j) {
        r.A[static_cast<std::size_t>(j)].topLeftCorner(f.m, f.m) = f.A[static_cast<std::size_t>(j)];
        r.A[static_cast<std::size_t>(j)].bottomRightCorner(g.m, g.m) = g.A[static_cast<std::size_t>(j)];
      }
      r.b.head(f.m) = f.b;
      r.b.tail(g.m) = g.b;
      r.c.head(f.m) = f.c;
      r.c.tail(g.m) = g.c;
      return r;
    }
    case Expr::Kind::Mul: {
      Realization f = realize_node(e->a, k, leaves, first_leaf_slot);
      Realization g = realize_node(e->b, k, leaves, first_leaf_slot);
      Realization r = zero_pencil(f.m + g.m);
      for (int j = 0; j <= k; ++j) {
        r.A[static_cast<std::size_t>(j)].topLeftCorner(f.m, f.m) = f.A[static_cast<std::size_t>(j)];
        r.A[static_cast<std::size_t>(j)].bottomRightCorner(g.m, g.m) = g.A[static_cast<std::size_t>(j)];
      }
      // coupling block -c_f b_g^* rides on the constant coefficient
      r.A[0].block(0, f.m, f.m, g.m) = -f.c * g.b.adjoint();
      r.b.head(f.m) = f.b;
      r.c.tail(g.m) = g.c;
      return r;
    }
    case Expr::Kind::Inv: {
      Realization f = realize_node(e->a, k, leaves, first_leaf_slot);
      Realization r = zero_pencil(f.m + 1);
      for (int j = 0; j <= k; ++j) r.A[static_cast<std::size_t>(j)].topLeftCorner(f.m, f.m) = f.A[static_cast<std::size_t>(j)];
      r.A[0].block(0, f.m, f.m, 1) = f.c;
      r.A[0].block(f.m, 0, 1, f.m) = f.b.adjoint();
      // bottom-right entry of the pencil inverse is -1/f, so c = -e_{m+1}
      r.b(f.m) = 1.0;
      r.c(f.m) = -1.0;
      return r;
    }
  }
  throw std::logic_error("realize: unknown node kind");
}

}  // namespace detail

inline BoundRealization realize(const ExprPtr& e) {
  int max_var = 0;
  std::vector<std::shared_ptr<const FreeSeries>> leaves;
  detail::collect_slots(e, max_var, leaves);
  int k = max_var + static_cast<int>(leaves.size());
  BoundRealization br;
  br.R = detail::realize_node(e, k, leaves, max_var + 1);
  br.args.resize(static_cast<std::size_t>(k));
  for (int i = 1; i <= max_var; ++i) br.args[static_cast<std::size_t>(i - 1)].coordinate = i;
  for (std::size_t i = 0; i < leaves.size(); ++i)
    br.args[static_cast<std::size_t>(max_var) + i].series = leaves[i];
  return br;
}

// I_n (x) A_0 + sum_j args_j (x) A_j, with the matrix argument on the slow
// (left) Kronecker axis throughout.
inline Mat pencil_apply(const Realization& R, const std::vector<Mat>& args) {
  if (static_cast<int>(args.size()) != R.k) throw std::invalid_argument("pencil_apply: argument count mismatch");
  Eigen::Index n = args.empty() ? 1 : args[0].rows();
  for (const auto& a : args)
    if (a.rows() != n || a.cols() != n) throw std::invalid_argument("pencil_apply: arguments must be square of equal size");
  Mat P = kron(Mat::Identity(n, n), R.A[0]);
  for (int j = 1; j <= R.k; ++j) P += kron(args[static_cast<std::size_t>(j - 1)], R.A[static_cast<std::size_t>(j)]);
  return P;
}

struct DomainCheck {
  bool invertible = false;  // LU saw no exact singularity
  double rcond = 0.0;       // reciprocal condition estimate
  bool ok = false;          // invertible and rcond above the threshold
};

inline DomainCheck domain_check_matrix(const Mat& pencil, double rcond_threshold = 1e-8) {
  DomainCheck dc;
  Eigen::PartialPivLU<Mat> lu(pencil);
  double diag_min = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  dc.invertible = diag_min > 0.0;
  dc.rcond = dc.invertible ? lu.rcond() : 0.0;
  dc.ok = dc.invertible && dc.rcond >= rcond_threshold;
  return dc;
}

inline DomainCheck domain_check(const Realization& R, const std::vector<Mat>& args,
                                double rcond_threshold = 1e-8) {
  return domain_check_matrix(pencil_apply(R, args), rcond_threshold);
}

struct MeroResult {
  Mat value;
  bool ok = false;
  DomainCheck domain;
  double leaf_bound = 0.0;  // certified error accumulated from series leaves
  std::string note;
};

// (I (x) b^*) Z where Z solves pencil * Z = I (x) c.
inline Mat pencil_value(const Realization& R, const Eigen::PartialPivLU<Mat>& lu, Eigen::Index n) {
  Mat rhs = kron(Mat::Identity(n, n), Mat(R.c));
  Mat Z = lu.solve(rhs);
  Mat out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (int p = 0; p < R.m; ++p) s += std::conj(R.b(p)) * Z(i * R.m + p, j);
      out(i, j) = s;
    }
  return out;
}

inline Mat pencil_value(const Realization& R, const Mat& pencil, Eigen::Index n) {
  return pencil_value(R, Eigen::PartialPivLU<Mat>(pencil), n);
}

// One factorization serves both the domain decision and the solve.
inline MeroResult eval_realization(const BoundRealization& br, const MatrixTuple& X, double tol,
                                   double rcond_threshold = 1e-8) {
  MeroResult res;
  std::vector<Mat> args;
  args.reserve(br.args.size());
  for (const auto& binding : br.args) {
    if (binding.coordinate > 0) {
      if (binding.coordinate > X.d) {
        res.note = "expression uses coordinate " + std::to_string(binding.coordinate) +
                   " but the tuple has d = " + std::to_string(X.d);
        return res;
      }
      args.push_back(X.X[static_cast<std::size_t>(binding.coordinate - 1)]);
    } else {
      SeriesEvalResult leaf = eval_series(*binding.series, X, tol);
      if (!leaf.certified) {
        res.note = "leaf series evaluation failed: " + leaf.note;
        res.leaf_bound = leaf.bound;
        return res;
      }
      res.leaf_bound = std::max(res.leaf_bound, leaf.bound);
      args.push_back(std::move(leaf.value));
    }
  }
  Mat pencil = pencil_apply(br.R, args);
  Eigen::PartialPivLU<Mat> lu(pencil);
  double diag_min = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  res.domain.invertible = diag_min > 0.0;
  res.domain.rcond = res.domain.invertible ? lu.rcond() : 0.0;
  res.domain.ok = res.domain.invertible && res.domain.rcond >= rcond_threshold;
  if (!res.domain.ok) {
    res.note = "pencil outside the domain (rcond " + std::to_string(res.domain.rcond) + ")";
    return res;
  }
  res.value = pencil_value(br.R, lu, X.n);
  res.ok = true;
  return res;
}

inline MeroResult eval_meromorphic(const ExprPtr& e, const MatrixTuple& X, double tol = 1e-10,
                                   double rcond_threshold = 1e-8) {
  return eval_realization(realize(e), X, tol, rcond_threshold);
}

struct AgreementReport {
  bool applicable = false;  // both evaluations in-domain
  bool pass = false;
  double difference = std::numeric_limits<double>::quiet_NaN();
  double tol = 0.0;
  MeroResult first, second;
};

// Numerical form of the statement that a meromorphic expression's value does
// not depend on the chosen representation: evaluate two realizations at the
// same point and compare. Out-of-domain points are reported as not
// applicable rather than failures.
inline AgreementReport representation_agreement(const BoundRealization& r1, const BoundRealization& r2,
                                                const MatrixTuple& X, double tol = 1e-7,
                                                double rcond_threshold = 1e-8) {
  AgreementReport rep;
  rep.tol = tol;
  rep.first = eval_realization(r1, X, tol * 1e-3, rcond_threshold);
  rep.second = eval_realization(r2, X, tol * 1e-3, rcond_threshold);
  if (!rep.first.ok || !rep.second.ok) return rep;
  rep.applicable = true;
  rep.difference = operator_norm(Mat(rep.first.value - rep.second.value));
  rep.pass = rep.difference <= tol;
  return rep;
}

inline AgreementReport representation_agreement(const ExprPtr& e1, const ExprPtr& e2,
                                                const MatrixTuple& X, double tol = 1e-7,
                                                double rcond_threshold = 1e-8) {
  return representation_agreement(realize(e1), realize(e2), X, tol, rcond_threshold);
}

}  // namespace ncfa
