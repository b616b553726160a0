#pragma once

// Seeded self-adjoint Gaussian ensembles and the strong/trace convergence
// experiments against truncated-Fock references. Trials are independent
// streams keyed by (master seed, n, trial, component); tables are identical
// under any scheduling and carry the generator tag.

#include <atomic>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ncfa/eval.hpp"
#include "ncfa/fock.hpp"
#include "ncfa/realization.hpp"
#include "ncfa/rng.hpp"
#include "ncfa/series.hpp"
#include "ncfa/tuple.hpp"

namespace ncfa {

struct EnsembleSpec {
  int n = 1;
  int d = 1;
  double variance = 0.0;  // 0 means the default 1/n
  std::uint64_t master_seed = 0;

  double entry_variance() const { return variance > 0.0 ? variance : 1.0 / static_cast<double>(n); }
};

// One self-adjoint matrix with i.i.d. entries of mean zero and the spec'd
// variance: real diagonal, conjugate-symmetric complex off-diagonal with
// variance split evenly between real and imaginary parts.
inline Mat sample_sgrm(const EnsembleSpec& spec, int trial, int component = 0) {
  Rng rng(derive_seed(spec.master_seed, static_cast<std::uint64_t>(spec.n),
                      static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(component)));
  double sd = std::sqrt(spec.entry_variance());
  double sd_off = sd * 0.7071067811865475244;
  Mat H(spec.n, spec.n);
  for (int i = 0; i < spec.n; ++i) {
    H(i, i) = sd * rng.gaussian();
    for (int j = i + 1; j < spec.n; ++j) {
      cplx z(sd_off * rng.gaussian(), sd_off * rng.gaussian());
      H(i, j) = z;
      H(j, i) = std::conj(z);
    }
  }
  return H;
}

inline MatrixTuple sample_tuple(const EnsembleSpec& spec, int trial) {
  MatrixTuple X(spec.n, spec.d);
  for (int j = 0; j < spec.d; ++j) X.X[static_cast<std::size_t>(j)] = sample_sgrm(spec, trial, j + 1);
  return X;
}

// Invertibility criterion for operators: T is invertible when
// || ||T||^2 I - T^* T || < ||T||^2.
struct InvertibilityMargin {
  double deviation = 0.0;  // || ||T||^2 I - T^* T ||
  double norm_sq = 0.0;    // ||T||^2
  bool satisfied = false;
};

inline InvertibilityMargin invertibility_margin(const Mat& T) {
  InvertibilityMargin m;
  m.norm_sq = std::pow(operator_norm(T), 2);
  Mat dev = m.norm_sq * Mat::Identity(T.cols(), T.cols()) - Mat(T.adjoint() * T);
  m.deviation = operator_norm(dev);
  m.satisfied = m.deviation < m.norm_sq;
  return m;
}

// ---- experiment harness -----------------------------------------------------

using ExperimentTarget = std::variant<FreeSeries, ExprPtr>;

struct TrialRecord {
  int n = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  double value = std::numeric_limits<double>::quiet_NaN();
  double reference = 0.0;
  double gap = std::numeric_limits<double>::quiet_NaN();
  bool in_domain = false;
};

struct PerNSummary {
  int n = 0;
  int trials = 0;
  int in_domain = 0;
  double mean = 0.0;
  double sd = 0.0;
  double mean_gap = 0.0;
  double frac_in_domain = 0.0;
};

struct ExperimentTable {
  std::string kind;  // "strongconv" or "traceconv"
  double reference = 0.0;
  int fock_N = 0;
  std::uint64_t master_seed = 0;
  std::string generator = kGeneratorTag;
  std::vector<TrialRecord> rows;
  std::vector<PerNSummary> summary;
};

namespace detail {

inline void parallel_tasks(int count, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  int nthreads = std::min(threads, count);
  pool.reserve(static_cast<std::size_t>(nthreads));
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

inline Mat eval_poly_sparse_tuple(const FreeSeries& f, const std::vector<SpMat>& S) {
  // per-term sparse products; fine for the low-degree polynomials used in
  // experiment references
  Eigen::Index dim = S.at(0).rows();
  Mat acc = Mat::Zero(dim, dim);
  for (int l = 0; l <= f.cutoff(); ++l)
    for (const auto& [k, v] : f.level(l)) {
      Word w = Word::from_lex_index(f.d(), l, k);
      if (l == 0) {
        acc += v * Mat::Identity(dim, dim);
        continue;
      }
      SpMat prod = S[static_cast<std::size_t>(w.letter(0) - 1)];
      for (int i = 1; i < l; ++i) prod = prod * S[static_cast<std::size_t>(w.letter(i) - 1)];
      acc += v * Mat(prod);
    }
  return acc;
}

constexpr Eigen::Index kDenseFockLimit = 2500;

}  // namespace detail

// || target(s_1..s_d) || at the given truncation degree. Polynomial targets
// work at any basis size that fits memory; pencil targets need the dense
// Fock dimension to stay small.
inline double fock_reference_norm(const ExperimentTarget& target, int d, int fock_N,
                                  std::uint64_t dim_cap = kDefaultFockDimCap) {
  FockBasis B(d, fock_N, dim_cap);
  if (std::holds_alternative<FreeSeries>(target)) {
    const FreeSeries& f = std::get<FreeSeries>(target);
    if (f.d() != d) throw std::invalid_argument("fock_reference_norm: dimension mismatch");
    std::vector<SpMat> S;
    for (int j = 1; j <= d; ++j) S.push_back(semicircular_matrix(B, j));
    if (B.dim() <= detail::kDenseFockLimit) {
      MatrixTuple st(static_cast<int>(B.dim()), d);
      for (int j = 0; j < d; ++j) st.X[static_cast<std::size_t>(j)] = Mat(S[static_cast<std::size_t>(j)]);
      return operator_norm(eval_poly(f, st));
    }
    Mat value = detail::eval_poly_sparse_tuple(f, S);
    return operator_norm(value);
  }
  const ExprPtr& e = std::get<ExprPtr>(target);
  if (B.dim() > detail::kDenseFockLimit)
    throw std::invalid_argument("fock_reference_norm: pencil reference needs Fock dimension <= " +
                                std::to_string(detail::kDenseFockLimit));
  MatrixTuple st(static_cast<int>(B.dim()), d);
  for (int j = 1; j <= d; ++j) st.X[static_cast<std::size_t>(j - 1)] = Mat(semicircular_matrix(B, j));
  MeroResult res = eval_meromorphic(e, st, 1e-12);
  if (!res.ok)
    throw std::runtime_error("fock_reference_norm: the semicircular tuple is outside the expression domain: " + res.note);
  return operator_norm(res.value);
}

// tau(target(s)) at the given truncation degree.
inline double fock_reference_trace(const ExperimentTarget& target, int d, int fock_N,
                                   std::uint64_t dim_cap = kDefaultFockDimCap) {
  FockBasis B(d, fock_N, dim_cap);
  if (std::holds_alternative<FreeSeries>(target)) {
    const FreeSeries& f = std::get<FreeSeries>(target);
    std::vector<SpMat> S;
    for (int j = 1; j <= d; ++j) S.push_back(semicircular_matrix(B, j));
    return detail::eval_poly_sparse_tuple(f, S)(0, 0).real();
  }
  const ExprPtr& e = std::get<ExprPtr>(target);
  if (B.dim() > detail::kDenseFockLimit)
    throw std::invalid_argument("fock_reference_trace: pencil reference needs Fock dimension <= " +
                                std::to_string(detail::kDenseFockLimit));
  MatrixTuple st(static_cast<int>(B.dim()), d);
  for (int j = 1; j <= d; ++j) st.X[static_cast<std::size_t>(j - 1)] = Mat(semicircular_matrix(B, j));
  MeroResult res = eval_meromorphic(e, st, 1e-12);
  if (!res.ok)
    throw std::runtime_error("fock_reference_trace: the semicircular tuple is outside the expression domain: " + res.note);
  return vacuum_trace(res.value).real();
}

namespace detail {

enum class Statistic { OperatorNorm, NormalizedTrace };

inline ExperimentTable run_experiment(const ExperimentTarget& target, int d,
                                      const std::vector<int>& n_list, int trials, int fock_N,
                                      std::uint64_t master_seed, Statistic stat, int threads,
                                      double rcond_threshold) {
  ExperimentTable table;
  table.kind = stat == Statistic::OperatorNorm ? "strongconv" : "traceconv";
  table.fock_N = fock_N;
  table.master_seed = master_seed;
  table.reference = stat == Statistic::OperatorNorm ? fock_reference_norm(target, d, fock_N)
                                                    : fock_reference_trace(target, d, fock_N);

  std::optional<BoundRealization> br;
  if (std::holds_alternative<ExprPtr>(target)) br = realize(std::get<ExprPtr>(target));

  struct Task {
    int n, trial;
  };
  std::vector<Task> tasks;
  for (int n : n_list)
    for (int t = 0; t < trials; ++t) tasks.push_back({n, t});
  table.rows.resize(tasks.size());

  auto run_one = [&](int i) {
    const Task& task = tasks[static_cast<std::size_t>(i)];
    EnsembleSpec spec;
    spec.n = task.n;
    spec.d = d;
    spec.master_seed = master_seed;
    TrialRecord rec;
    rec.n = task.n;
    rec.trial = task.trial;
    rec.seed = derive_seed(master_seed, static_cast<std::uint64_t>(task.n), static_cast<std::uint64_t>(task.trial));
    rec.reference = table.reference;
    MatrixTuple X = sample_tuple(spec, task.trial);
    Mat value;
    bool ok = true;
    if (br) {
      MeroResult res = eval_realization(*br, X, 1e-10, rcond_threshold);
      ok = res.ok;
      if (ok) value = std::move(res.value);
    } else {
      value = eval_poly(std::get<FreeSeries>(target), X);
    }
    rec.in_domain = ok;
    if (ok) {
      rec.value = stat == Statistic::OperatorNorm
                      ? operator_norm(value)
                      : value.trace().real() / static_cast<double>(task.n);
      rec.gap = std::abs(rec.value - rec.reference);
    }
    table.rows[static_cast<std::size_t>(i)] = rec;
  };
  parallel_tasks(static_cast<int>(tasks.size()), threads, run_one);

  for (int n : n_list) {
    PerNSummary s;
    s.n = n;
    double sum = 0.0, sum2 = 0.0, gap = 0.0;
    for (const auto& r : table.rows) {
      if (r.n != n) continue;
      ++s.trials;
      if (!r.in_domain) continue;
      ++s.in_domain;
      sum += r.value;
      sum2 += r.value * r.value;
      gap += r.gap;
    }
    if (s.in_domain > 0) {
      s.mean = sum / s.in_domain;
      double var = sum2 / s.in_domain - s.mean * s.mean;
      s.sd = std::sqrt(std::max(var, 0.0));
      s.mean_gap = gap / s.in_domain;
    }
    s.frac_in_domain = s.trials > 0 ? static_cast<double>(s.in_domain) / s.trials : 0.0;
    table.summary.push_back(s);
  }
  return table;
}

}  // namespace detail

inline ExperimentTable strong_convergence_experiment(const ExperimentTarget& target, int d,
                                                     const std::vector<int>& n_list, int trials,
                                                     int fock_N, std::uint64_t master_seed,
                                                     int threads = 1, double rcond_threshold = 1e-8) {
  return detail::run_experiment(target, d, n_list, trials, fock_N, master_seed,
                                detail::Statistic::OperatorNorm, threads, rcond_threshold);
}

inline ExperimentTable trace_convergence_experiment(const ExperimentTarget& target, int d,
                                                    const std::vector<int>& n_list, int trials,
                                                    int fock_N, std::uint64_t master_seed,
                                                    int threads = 1, double rcond_threshold = 1e-8) {
  return detail::run_experiment(target, d, n_list, trials, fock_N, master_seed,
                                detail::Statistic::NormalizedTrace, threads, rcond_threshold);
}

// ---- output ----------------------------------------------------------------

inline std::string experiment_csv(const ExperimentTable& table) {
  std::ostringstream os;
  char buf[64];
  os << "n,trial,seed,value,reference,gap,in_domain\n";
  for (const auto& r : table.rows) {
    os << r.n << "," << r.trial << "," << r.seed << ",";
    std::snprintf(buf, sizeof buf, "%.17g", r.value);
    os << buf << ",";
    std::snprintf(buf, sizeof buf, "%.17g", r.reference);
    os << buf << ",";
    std::snprintf(buf, sizeof buf, "%.17g", r.gap);
    os << buf << "," << (r.in_domain ? 1 : 0) << "\n";
  }
  return os.str();
}

inline nlohmann::json experiment_json(const ExperimentTable& table) {
  nlohmann::json j;
  j["schema"] = 1;
  j["kind"] = table.kind;
  j["reference"] = table.reference;
  j["fock_N"] = table.fock_N;
  j["master_seed"] = table.master_seed;
  j["generator"] = table.generator;
  j["per_n"] = nlohmann::json::array();
  for (const auto& s : table.summary) {
    nlohmann::json e;
    e["n"] = s.n;
    e["trials"] = s.trials;
    e["in_domain"] = s.in_domain;
    e["mean"] = s.mean;
    e["sd"] = s.sd;
    e["mean_gap"] = s.mean_gap;
    e["frac_in_domain"] = s.frac_in_domain;
    j["per_n"].push_back(e);
  }
  return j;
}

// Atomic write: temp file in the same directory, then rename.
inline void atomic_write_file(const std::string& path, const std::string& contents) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw std::runtime_error("atomic_write_file: cannot open " + tmp);
    os << contents;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("atomic_write_file: rename failed for " + path);
}

}  // namespace ncfa
