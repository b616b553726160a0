// ncfa: command-line front end for the free-analysis toolkit.
//
// Subcommands map 1:1 onto library operations; outputs are CSV tables plus a
// JSON summary embedding the fully resolved configuration (schema=1), so any
// run is reproducible from its own artifacts. Exit codes: 0 success,
// 2 validation error, 3 numeric failure (best achieved bound in the payload).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "ncfa/ncfa.hpp"

namespace {

using nlohmann::json;
using namespace ncfa;

std::string human(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string machine(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

[[noreturn]] void fail(int code, const std::string& msg, json extra = {}) {
  json record = std::move(extra);
  record["error"] = msg;
  record["code"] = code;
  std::cerr << record.dump() << "\n";
  std::exit(code);
}

std::string out_path(const std::string& flag, const std::string& fallback_name) {
  if (!flag.empty()) return flag;
  const char* dir = std::getenv("NCFA_OUT_DIR");
  std::string base = dir && *dir ? dir : ".";
  return base + "/" + fallback_name;
}

void write_json(const std::string& path, const json& j) { atomic_write_file(path, j.dump(2) + "\n"); }

std::pair<int, int> parse_window(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--window", "expected lo:hi");
  return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
}

std::vector<double> parse_grid(const std::string& s) {
  // lo:hi:count
  std::stringstream ss(s);
  std::string a, b, c;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c, ':'))
    throw CLI::ValidationError("--rgrid", "expected lo:hi:count");
  double lo = std::stod(a), hi = std::stod(b);
  int count = std::stoi(c);
  if (count < 1 || !(lo <= hi)) throw CLI::ValidationError("--rgrid", "bad grid");
  std::vector<double> g;
  for (int i = 0; i < count; ++i)
    g.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  return g;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  if (out.empty()) throw CLI::ValidationError("--n", "empty list");
  return out;
}

std::vector<FreeSeries> load_series_list(const std::string& csv_paths) {
  std::vector<FreeSeries> out;
  std::stringstream ss(csv_paths);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(load_series_file(tok));
  if (out.empty()) throw CLI::ValidationError("series list", "no files given");
  return out;
}

ExprPtr load_expr_arg(const std::string& arg) {
  // literal S-expression, or a path to a file holding one
  SeriesLoader loader = [](const std::string& p) { return load_series_file(p); };
  std::string text = arg;
  if (!arg.empty() && arg[0] != '(') {
    std::ifstream is(arg);
    if (!is) throw std::runtime_error("cannot open expression file " + arg);
    std::stringstream buf;
    buf << is.rdbuf();
    text = buf.str();
  }
  return parse_expr(text, loader);
}

void validate_fock_dim(int d, int N) {
  std::uint64_t dim = FockBasis::dimension(d, N);
  if (dim > kDefaultFockDimCap)
    fail(2, "Fock dimension " + std::to_string(dim) + " exceeds the cap " + std::to_string(kDefaultFockDimCap));
}

json base_config(const std::string& command) {
  json j;
  j["schema"] = 1;
  j["command"] = command;
  j["generator"] = kGeneratorTag;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"free-analysis toolkit: series, Fock truncations, pencils, random-matrix experiments"};
  app.require_subcommand(1);
  app.set_config("--config");

  std::string series_path, tuple_path, expr_arg, expr2_arg, window_arg = "0:0", out_arg, json_arg;
  std::string row_arg, gens_arg, coeffs_arg, word_arg, nlist_arg = "100,200,400", rgrid_arg = "0.1:0.9:9";
  double tol = 1e-8, r_param = 1.0, rcond = 1e-8;
  int N = 6, d = 1, level = 2, trials = 20, fock_N = 40, mmax = 4000, samples = 50, threads = 1;
  std::uint64_t seed = 1;

  auto* radius = app.add_subcommand("radius", "Cauchy-Hadamard radius estimate over a degree window");
  radius->add_option("--series", series_path)->required();
  radius->add_option("--window", window_arg)->required();
  radius->add_option("--json", json_arg);

  auto* eval = app.add_subcommand("eval", "evaluate a series or expression at a matrix tuple with a certified bound");
  eval->add_option("--series", series_path);
  eval->add_option("--expr", expr_arg);
  eval->add_option("--tuple", tuple_path)->required();
  eval->add_option("--tol", tol);
  eval->add_option("--json", json_arg);

  auto* jsr = app.add_subcommand("jsr", "joint spectral radius of a matrix tuple");
  jsr->add_option("--tuple", tuple_path)->required();
  jsr->add_option("--mmax", mmax);
  jsr->add_option("--tol", tol);
  jsr->add_option("--json", json_arg);

  auto* rcheck = app.add_subcommand("realize-check", "cross-representation agreement at a tuple");
  rcheck->add_option("--expr1", expr_arg)->required();
  rcheck->add_option("--expr2", expr2_arg)->required();
  rcheck->add_option("--tuple", tuple_path)->required();
  rcheck->add_option("--tol", tol);
  rcheck->add_option("--json", json_arg);

  auto* fock_norm = app.add_subcommand("fock-norm", "Hardy seminorm of a series and semicircular norms at one truncation");
  fock_norm->add_option("--series", series_path)->required();
  fock_norm->add_option("--N", N)->required();
  fock_norm->add_option("--r", r_param);
  fock_norm->add_option("--json", json_arg);

  auto* moments = app.add_subcommand("moments", "vacuum trace of a word in the semicircular tuple");
  moments->add_option("--d", d)->required();
  moments->add_option("--N", N)->required();
  moments->add_option("--word", word_arg)->required();
  moments->add_option("--json", json_arg);

  auto* rho_cmd = app.add_subcommand("rho", "seminorm profile over a grid of radii");
  rho_cmd->add_option("--series", series_path)->required();
  rho_cmd->add_option("--N", N)->required();
  rho_cmd->add_option("--rgrid", rgrid_arg);
  rho_cmd->add_option("--out", out_arg);
  rho_cmd->add_option("--json", json_arg);

  auto* szego = app.add_subcommand("szego-check", "kernel reproducing identity and norm bound on random samples");
  szego->add_option("--d", d);
  szego->add_option("--N", N);
  szego->add_option("--samples", samples);
  szego->add_option("--seed", seed);
  szego->add_option("--json", json_arg);

  auto* wandering = app.add_subcommand("wandering", "kernel and wandering dimensions of a row multiplier over radii");
  wandering->add_option("--row", row_arg)->required();
  wandering->add_option("--N", N)->required();
  wandering->add_option("--rgrid", rgrid_arg);
  wandering->add_option("--tol", tol);
  wandering->add_option("--out", out_arg);
  wandering->add_option("--json", json_arg);

  auto* variety = app.add_subcommand("variety", "sample directional-variety points of a generator set");
  variety->add_option("--gens", gens_arg)->required();
  variety->add_option("--level", level);
  variety->add_option("--trials", trials);
  variety->add_option("--seed", seed);
  variety->add_option("--out", out_arg);
  variety->add_option("--json", json_arg);

  auto* nullst = app.add_subcommand("nullstellensatz", "ideal-membership violations over variety samples");
  nullst->add_option("--gens", gens_arg)->required();
  nullst->add_option("--coeffs", coeffs_arg)->required();
  nullst->add_option("--level", level);
  nullst->add_option("--trials", trials);
  nullst->add_option("--seed", seed);
  nullst->add_option("--json", json_arg);

  auto* strong = app.add_subcommand("strongconv", "operator-norm convergence experiment against a Fock reference");
  strong->add_option("--expr", expr_arg);
  strong->add_option("--series", series_path);
  strong->add_option("--d", d);
  strong->add_option("--n", nlist_arg);
  strong->add_option("--trials", trials);
  strong->add_option("--fockN", fock_N);
  strong->add_option("--seed", seed);
  strong->add_option("--threads", threads);
  strong->add_option("--rcond", rcond);
  strong->add_option("--out", out_arg);

  auto* trace = app.add_subcommand("traceconv", "normalized-trace convergence experiment against the vacuum trace");
  trace->add_option("--expr", expr_arg);
  trace->add_option("--series", series_path);
  trace->add_option("--d", d);
  trace->add_option("--n", nlist_arg);
  trace->add_option("--trials", trials);
  trace->add_option("--fockN", fock_N);
  trace->add_option("--seed", seed);
  trace->add_option("--threads", threads);
  trace->add_option("--rcond", rcond);
  trace->add_option("--out", out_arg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    json rec;
    rec["error"] = e.what();
    rec["code"] = 2;
    std::cerr << rec.dump() << "\n";
    return 2;
  }

  try {
    if (radius->parsed()) {
      FreeSeries f = load_series_file(series_path);
      auto [lo, hi] = parse_window(window_arg);
      if (lo > hi || lo < 0) fail(2, "radius: bad window");
      double R = radius_estimate(f, lo, hi);
      std::cout << "R=" << human(R) << "\n";
      if (!json_arg.empty()) {
        json j = base_config("radius");
        j["config"] = {{"series", series_path}, {"window_lo", lo}, {"window_hi", hi}};
        j["R"] = R;
        write_json(json_arg, j);
      }
      return 0;
    }

    if (eval->parsed()) {
      if (series_path.empty() == expr_arg.empty()) fail(2, "eval: give exactly one of --series / --expr");
      MatrixTuple X = load_tuple_file(tuple_path);
      if (!(tol > 0)) fail(2, "eval: tol must be positive");
      json j = base_config("eval");
      j["config"] = {{"tuple", tuple_path}, {"tol", tol}};
      if (!series_path.empty()) {
        FreeSeries f = load_series_file(series_path);
        if (f.d() != X.d) fail(2, "eval: series and tuple dimension mismatch");
        SeriesEvalResult res = eval_series(f, X, tol);
        j["config"]["series"] = series_path;
        j["bound"] = res.bound;
        j["degree"] = res.degree;
        j["certified"] = res.certified;
        if (!res.certified)
          fail(3, "eval: tolerance unreachable; " + res.note, json{{"bound", res.bound}, {"degree", res.degree}});
        std::cout << "norm=" << human(operator_norm(res.value)) << " bound=" << human(res.bound)
                  << " degree=" << res.degree << "\n";
        if (X.n == 1) std::cout << "value=" << human(res.value(0, 0).real()) << "+" << human(res.value(0, 0).imag()) << "i\n";
        json entries = json::array();
        for (int i = 0; i < X.n; ++i)
          for (int k = 0; k < X.n; ++k)
            entries.push_back({machine(res.value(i, k).real()), machine(res.value(i, k).imag())});
        j["value"] = entries;
      } else {
        ExprPtr e = load_expr_arg(expr_arg);
        MeroResult res = eval_meromorphic(e, X, tol);
        j["config"]["expr"] = expr_arg;
        if (!res.ok) fail(3, "eval: " + res.note, json{{"rcond", res.domain.rcond}, {"leaf_bound", res.leaf_bound}});
        j["rcond"] = res.domain.rcond;
        j["leaf_bound"] = res.leaf_bound;
        std::cout << "norm=" << human(operator_norm(res.value)) << " rcond=" << human(res.domain.rcond) << "\n";
        if (X.n == 1) std::cout << "value=" << human(res.value(0, 0).real()) << "+" << human(res.value(0, 0).imag()) << "i\n";
        json entries = json::array();
        for (int i = 0; i < X.n; ++i)
          for (int k = 0; k < X.n; ++k)
            entries.push_back({machine(res.value(i, k).real()), machine(res.value(i, k).imag())});
        j["value"] = entries;
      }
      if (!json_arg.empty()) write_json(json_arg, j);
      return 0;
    }

    if (jsr->parsed()) {
      MatrixTuple X = load_tuple_file(tuple_path);
      if (mmax < 2) fail(2, "jsr: mmax must be >= 2");
      JsrResult res = joint_spectral_radius(X, mmax, tol);
      std::cout << "rho=" << human(res.value) << " iterations=" << res.iterations
                << " converged=" << (res.converged ? 1 : 0) << "\n";
      if (!json_arg.empty()) {
        json j = base_config("jsr");
        j["config"] = {{"tuple", tuple_path}, {"mmax", mmax}, {"tol", tol}};
        j["rho"] = res.value;
        j["iterations"] = res.iterations;
        j["converged"] = res.converged;
        j["upper_envelope_tail"] = json::array();
        std::size_t start = res.upper_envelope.size() > 8 ? res.upper_envelope.size() - 8 : 0;
        for (std::size_t i = start; i < res.upper_envelope.size(); ++i)
          j["upper_envelope_tail"].push_back(res.upper_envelope[i]);
        write_json(json_arg, j);
      }
      return 0;
    }

    if (rcheck->parsed()) {
      ExprPtr e1 = load_expr_arg(expr_arg);
      ExprPtr e2 = load_expr_arg(expr2_arg);
      MatrixTuple X = load_tuple_file(tuple_path);
      AgreementReport rep = representation_agreement(e1, e2, X, tol);
      if (!rep.applicable) {
        std::cout << "applicable=0\n";
      } else {
        std::cout << "applicable=1 difference=" << human(rep.difference) << " pass=" << (rep.pass ? 1 : 0) << "\n";
      }
      if (!json_arg.empty()) {
        json j = base_config("realize-check");
        j["config"] = {{"expr1", expr_arg}, {"expr2", expr2_arg}, {"tuple", tuple_path}, {"tol", tol}};
        j["applicable"] = rep.applicable;
        j["pass"] = rep.pass;
        j["difference"] = rep.difference;
        write_json(json_arg, j);
      }
      return rep.applicable && !rep.pass ? 3 : 0;
    }

    if (fock_norm->parsed()) {
      FreeSeries f = load_series_file(series_path);
      validate_fock_dim(f.d(), N);
      FockBasis B(f.d(), N);
      double rho = seminorm_rho(f, r_param, B);
      std::cout << "rho=" << human(rho) << " N=" << N << "\n";
      json norms = json::array();
      for (int jv = 1; jv <= f.d(); ++jv) {
        double s = operator_norm(SpMat(semicircular_matrix(B, jv)));
        norms.push_back(s);
        std::cout << "s" << jv << "_norm=" << human(s) << "\n";
      }
      if (!json_arg.empty()) {
        json j = base_config("fock-norm");
        j["config"] = {{"series", series_path}, {"N", N}, {"r", r_param}};
        j["rho"] = rho;
        j["semicircular_norms"] = norms;
        j["dropped_mass"] = dropped_mass(f, N);
        write_json(json_arg, j);
      }
      return 0;
    }

    if (moments->parsed()) {
      validate_fock_dim(d, N);
      Word w = word_arg == "e" ? Word(d) : Word::decode(d, word_arg);
      FockBasis B(d, N);
      SpMat prod(B.dim(), B.dim());
      prod.setIdentity();
      for (int a : w.letters()) prod = SpMat(prod * semicircular_matrix(B, a));
      cplx tau = vacuum_trace(prod);
      std::cout << "tau=" << human(tau.real()) << "\n";
      if (!json_arg.empty()) {
        json j = base_config("moments");
        j["config"] = {{"d", d}, {"N", N}, {"word", word_arg}};
        j["tau_re"] = tau.real();
        j["tau_im"] = tau.imag();
        write_json(json_arg, j);
      }
      return 0;
    }

    if (rho_cmd->parsed()) {
      FreeSeries f = load_series_file(series_path);
      validate_fock_dim(f.d(), N);
      FockBasis B(f.d(), N);
      std::vector<double> grid = parse_grid(rgrid_arg);
      std::ostringstream csv;
      csv << "r,rho\n";
      for (double r : grid) csv << machine(r) << "," << machine(seminorm_rho(f, r, B)) << "\n";
      std::string path = out_path(out_arg, "rho.csv");
      atomic_write_file(path, csv.str());
      std::cout << "wrote " << path << "\n";
      if (!json_arg.empty()) {
        json j = base_config("rho");
        j["config"] = {{"series", series_path}, {"N", N}, {"rgrid", rgrid_arg}};
        j["out"] = path;
        write_json(json_arg, j);
      }
      return 0;
    }

    if (szego->parsed()) {
      validate_fock_dim(d, N);
      FockBasis B(d, N);
      double max_err = 0.0, max_ratio = 0.0;
      bool bound_ok = true;
      for (int t = 0; t < samples; ++t) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(t), 0x5ce60));
        int n = 1 + static_cast<int>(rng.next_u64() % 3);
        MatrixTuple Z(n, d);
        for (int jv = 0; jv < d; ++jv) Z.X[static_cast<std::size_t>(jv)] = rng.gaussian_matrix(n, n);
        double rn = row_norm(Z);
        double target = 0.2 + 0.7 * rng.uniform01();
        for (auto& m : Z.X) m *= target / std::max(rn, 1e-12);
        Vec y = rng.gaussian_vector(n), v = rng.gaussian_vector(n);
        FreeSeries f(d, N);
        for (int term = 0; term < 6; ++term) {
          int l = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(N + 1));
          std::uint64_t idx = rng.next_u64() % words_of_length(d, l);
          f.add_coeff(Word::from_lex_index(d, l, idx), rng.gaussian_complex());
        }
        Vec K = szego_vector(Z, y, v, B);
        cplx lhs = fock_inner(K, series_to_fock(f, B));
        cplx rhs = (y.adjoint() * eval_poly(f, Z) * v)(0, 0);
        max_err = std::max(max_err, std::abs(lhs - rhs));
        double r = row_norm(Z);
        double bound = y.norm() * v.norm() / std::sqrt(1.0 - r * r);
        max_ratio = std::max(max_ratio, K.norm() / bound);
        if (K.norm() > bound * (1 + 1e-12)) bound_ok = false;
      }
      std::cout << "max_error=" << human(max_err) << " max_norm_ratio=" << human(max_ratio)
                << " bound_ok=" << (bound_ok ? 1 : 0) << "\n";
      if (!json_arg.empty()) {
        json j = base_config("szego-check");
        j["config"] = {{"d", d}, {"N", N}, {"samples", samples}, {"seed", seed}};
        j["max_error"] = max_err;
        j["max_norm_ratio"] = max_ratio;
        j["bound_ok"] = bound_ok;
        write_json(json_arg, j);
      }
      return bound_ok ? 0 : 3;
    }

    if (wandering->parsed()) {
      std::vector<FreeSeries> F = load_series_list(row_arg);
      validate_fock_dim(F[0].d(), N);
      FockBasis B(F[0].d(), N);
      std::vector<double> grid = parse_grid(rgrid_arg);
      auto profile = ell_profile(F, grid, B, tol);
      std::ostringstream csv;
      csv << "r,kernel_dim,wandering_dim,sigma_gap\n";
      for (const auto& [r, res] : profile)
        csv << machine(r) << "," << res.kernel_dim << "," << res.wandering_dim << "," << machine(res.sigma_gap) << "\n";
      std::string path = out_path(out_arg, "wandering.csv");
      atomic_write_file(path, csv.str());
      std::cout << "wrote " << path << "\n";
      if (!json_arg.empty()) {
        json j = base_config("wandering");
        j["config"] = {{"row", row_arg}, {"N", N}, {"rgrid", rgrid_arg}, {"tol", tol}};
        j["out"] = path;
        write_json(json_arg, j);
      }
      return 0;
    }

    if (variety->parsed()) {
      std::vector<FreeSeries> gens = load_series_list(gens_arg);
      if (level < 1 || trials < 1) fail(2, "variety: level and trials must be >= 1");
      auto pts = variety_sample(gens, level, trials, seed);
      std::ostringstream csv;
      csv << "sample,level,residual\n";
      for (std::size_t i = 0; i < pts.size(); ++i)
        csv << i << "," << level << "," << machine(pts[i].residual) << "\n";
      std::string path = out_path(out_arg, "variety.csv");
      atomic_write_file(path, csv.str());
      std::cout << "samples=" << pts.size() << " wrote " << path << "\n";
      if (!json_arg.empty()) {
        json j = base_config("variety");
        j["config"] = {{"gens", gens_arg}, {"level", level}, {"trials", trials}, {"seed", seed}};
        j["samples"] = pts.size();
        j["out"] = path;
        write_json(json_arg, j);
      }
      return 0;
    }

    if (nullst->parsed()) {
      std::vector<FreeSeries> gens = load_series_list(gens_arg);
      std::vector<FreeSeries> coeffs = load_series_list(coeffs_arg);
      if (gens.size() != coeffs.size()) fail(2, "nullstellensatz: need one coefficient series per generator");
      auto pts = variety_sample(gens, level, trials, seed);
      auto rep = nullstellensatz_check(gens, coeffs, pts);
      FreeSeries one(gens[0].d(), 0);
      one.set_coeff(Word(gens[0].d()), 1.0);
      auto control = nullstellensatz_check_element(one, pts);
      std::cout << "samples=" << rep.samples << " max_violation=" << human(rep.max_violation)
                << " control_min=" << human(control.per_sample.empty() ? 0.0 : *std::min_element(control.per_sample.begin(), control.per_sample.end()))
                << "\n";
      if (!json_arg.empty()) {
        json j = base_config("nullstellensatz");
        j["config"] = {{"gens", gens_arg}, {"coeffs", coeffs_arg}, {"level", level}, {"trials", trials}, {"seed", seed}};
        j["samples"] = rep.samples;
        j["max_violation"] = rep.max_violation;
        j["control_violations"] = control.per_sample;
        write_json(json_arg, j);
      }
      return 0;
    }

    if (strong->parsed() || trace->parsed()) {
      bool is_strong = strong->parsed();
      if (series_path.empty() == expr_arg.empty()) fail(2, "experiment: give exactly one of --series / --expr");
      ExperimentTarget target = series_path.empty() ? ExperimentTarget(load_expr_arg(expr_arg))
                                                    : ExperimentTarget(load_series_file(series_path));
      int dim_d = series_path.empty() ? d : std::get<FreeSeries>(target).d();
      std::vector<int> n_list = parse_int_list(nlist_arg);
      for (int n : n_list)
        if (n < 1) fail(2, "experiment: matrix sizes must be >= 1");
      if (trials < 1) fail(2, "experiment: trials must be >= 1");
      validate_fock_dim(dim_d, fock_N);
      ExperimentTable table;
      try {
        table = is_strong
                    ? strong_convergence_experiment(target, dim_d, n_list, trials, fock_N, seed, threads, rcond)
                    : trace_convergence_experiment(target, dim_d, n_list, trials, fock_N, seed, threads, rcond);
      } catch (const std::runtime_error& e) {
        fail(3, e.what());
      }
      std::string base = is_strong ? "strongconv" : "traceconv";
      std::string csv_path = out_path(out_arg.empty() ? "" : out_arg + ".csv", base + ".csv");
      std::string json_path = out_path(out_arg.empty() ? "" : out_arg + ".json", base + ".json");
      atomic_write_file(csv_path, experiment_csv(table));
      json j = experiment_json(table);
      j["command"] = base;
      j["config"] = {{"expr", expr_arg},   {"series", series_path}, {"d", dim_d},
                     {"n", nlist_arg},     {"trials", trials},      {"fockN", fock_N},
                     {"seed", seed},       {"threads", threads},    {"rcond", rcond}};
      write_json(json_path, j);
      std::cout << "reference=" << human(table.reference) << "\n";
      for (const auto& s : table.summary)
        std::cout << "n=" << s.n << " mean=" << human(s.mean) << " sd=" << human(s.sd)
                  << " mean_gap=" << human(s.mean_gap) << " frac_in_domain=" << human(s.frac_in_domain) << "\n";
      std::cout << "wrote " << csv_path << " " << json_path << "\n";
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    fail(2, e.what());
  } catch (const std::out_of_range& e) {
    fail(2, e.what());
  } catch (const std::exception& e) {
    fail(3, e.what());
  }
  return 0;
}
