#pragma once

// Deterministic expression corpus and algebraic identity pairs shared by the
// realization tests and the acceptance suite.

#include "ncfa/ncfa.hpp"
#include "ncfa/rng.hpp"

namespace corpus {

using namespace ncfa;

inline ExprPtr c(double v) { return Expr::constant(v); }
inline ExprPtr v(int i) { return Expr::variable(i); }

inline ExprPtr random_expr(Rng& rng, int depth, int k) {
  if (depth == 0 || rng.next_u64() % 5 == 0) {
    if (rng.next_u64() % 3 == 0) {
      double re = 0.2 + rng.uniform01();
      return c(rng.next_u64() % 2 == 0 ? re : -re);
    }
    return v(1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(k)));
  }
  switch (rng.next_u64() % 4) {
    case 0:
      return Expr::add(random_expr(rng, depth - 1, k), random_expr(rng, depth - 1, k));
    case 1:
      return Expr::mul(random_expr(rng, depth - 1, k), random_expr(rng, depth - 1, k));
    case 2:
      return Expr::inv(random_expr(rng, depth - 1, k));
    default:
      return Expr::sub(random_expr(rng, depth - 1, k), random_expr(rng, depth - 1, k));
  }
}

// Scalar k-tuples in a modest disk around the origin.
inline MatrixTuple random_scalar_point(Rng& rng, int k, double scale = 0.6) {
  std::vector<cplx> xs;
  for (int i = 0; i < k; ++i) xs.push_back(scale * rng.gaussian_complex());
  return MatrixTuple::scalars(xs);
}

inline MatrixTuple random_matrix_point(Rng& rng, int n, int k, double row_target) {
  MatrixTuple X(n, k);
  for (int j = 0; j < k; ++j) X.X[static_cast<std::size_t>(j)] = rng.gaussian_matrix(n, n);
  double rn = row_norm(X);
  for (auto& m : X.X) m *= row_target / std::max(rn, 1e-12);
  return X;
}

// 60 expressions of depth <= 4 in up to 3 arguments, each usable at randomly
// sampled scalar points. Seeded trees that turn out to have (numerically)
// empty sampled domains are skipped deterministically.
inline std::vector<ExprPtr> expression_corpus() {
  std::vector<ExprPtr> out;
  // hand-built cases exercising every node kind and nesting pattern
  out.push_back(c(5.0));
  out.push_back(v(1));
  out.push_back(Expr::add(v(1), v(2)));
  out.push_back(Expr::mul(v(1), v(2)));
  out.push_back(Expr::sub(c(1.0), v(1)));
  out.push_back(Expr::inv(Expr::sub(c(1.0), v(1))));
  out.push_back(Expr::inv(Expr::sub(c(1.0), Expr::add(v(1), v(2)))));
  out.push_back(Expr::mul(v(1), Expr::inv(Expr::sub(c(1.0), Expr::mul(v(2), v(1))))));
  out.push_back(Expr::mul(Expr::inv(Expr::sub(c(1.0), Expr::mul(v(1), v(2)))), v(1)));
  out.push_back(Expr::inv(Expr::add(c(2.0), Expr::mul(v(1), v(1)))));
  out.push_back(Expr::add(Expr::mul(c(2.0), v(3)), Expr::mul(v(1), v(2))));
  out.push_back(Expr::inv(Expr::inv(Expr::add(c(1.5), v(1)))));
  out.push_back(Expr::sub(Expr::mul(v(1), v(2)), Expr::mul(v(2), v(1))));
  out.push_back(Expr::inv(Expr::sub(c(3.0), Expr::mul(v(1), Expr::inv(Expr::add(c(2.0), v(2)))))));

  Rng gen(0xc0ffee);
  std::uint64_t tree_seed = 1;
  while (out.size() < 60) {
    Rng tree_rng(seed_mix(0xc0ffee, tree_seed++));
    ExprPtr e = random_expr(tree_rng, 4, 3);
    // keep only trees with a sampleable domain
    BoundRealization br = realize(e);
    int usable = 0;
    Rng pt(seed_mix(0xfeed, tree_seed));
    for (int t = 0; t < 40 && usable < 5; ++t) {
      MatrixTuple X = random_scalar_point(pt, 3);
      if (eval_realization(br, X, 1e-10).ok) ++usable;
    }
    if (usable >= 5) out.push_back(e);
  }
  return out;
}

// Pairs of algebraically equal expressions with structurally distinct trees.
inline std::vector<std::pair<ExprPtr, ExprPtr>> identity_pairs() {
  std::vector<std::pair<ExprPtr, ExprPtr>> out;
  // x (1 - yx)^{-1}  =  (1 - xy)^{-1} x
  out.emplace_back(Expr::mul(v(1), Expr::inv(Expr::sub(c(1.0), Expr::mul(v(2), v(1))))),
                   Expr::mul(Expr::inv(Expr::sub(c(1.0), Expr::mul(v(1), v(2)))), v(1)));
  // (x^{-1})^{-1} = x
  out.emplace_back(Expr::inv(Expr::inv(v(1))), v(1));
  // (1-x)^{-1} = 1 + x (1-x)^{-1}
  out.emplace_back(Expr::inv(Expr::sub(c(1.0), v(1))),
                   Expr::add(c(1.0), Expr::mul(v(1), Expr::inv(Expr::sub(c(1.0), v(1))))));
  // x commutes with resolvents of itself
  out.emplace_back(Expr::mul(v(1), Expr::inv(Expr::sub(c(1.0), v(1)))),
                   Expr::mul(Expr::inv(Expr::sub(c(1.0), v(1))), v(1)));
  // (xy)^{-1} = y^{-1} x^{-1}
  out.emplace_back(Expr::inv(Expr::mul(v(1), v(2))), Expr::mul(Expr::inv(v(2)), Expr::inv(v(1))));
  // (1-x-y)^{-1} = (1-x)^{-1} (1 - y(1-x)^{-1})^{-1}
  out.emplace_back(Expr::inv(Expr::sub(Expr::sub(c(1.0), v(1)), v(2))),
                   Expr::mul(Expr::inv(Expr::sub(c(1.0), v(1))),
                             Expr::inv(Expr::sub(c(1.0), Expr::mul(v(2), Expr::inv(Expr::sub(c(1.0), v(1))))))));
  // (1+xy)^{-1} = 1 - x (1+yx)^{-1} y
  out.emplace_back(Expr::inv(Expr::add(c(1.0), Expr::mul(v(1), v(2)))),
                   Expr::sub(c(1.0), Expr::mul(Expr::mul(v(1), Expr::inv(Expr::add(c(1.0), Expr::mul(v(2), v(1))))), v(2))));
  // (x+y)^2 expanded
  out.emplace_back(Expr::mul(Expr::add(v(1), v(2)), Expr::add(v(1), v(2))),
                   Expr::add(Expr::add(Expr::mul(v(1), v(1)), Expr::mul(v(1), v(2))),
                             Expr::add(Expr::mul(v(2), v(1)), Expr::mul(v(2), v(2)))));
  // x^{-1} x = 1
  out.emplace_back(Expr::mul(Expr::inv(v(1)), v(1)), c(1.0));
  // associativity of products
  out.emplace_back(Expr::mul(Expr::mul(v(1), v(2)), v(3)), Expr::mul(v(1), Expr::mul(v(2), v(3))));
  return out;
}

}  // namespace corpus
