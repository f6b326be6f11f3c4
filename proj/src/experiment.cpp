#include "sss/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

#include "sss/baselines.hpp"
#include "sss/lanczos.hpp"
#include "sss/matrix_market.hpp"
#include "sss/mrs3.hpp"

namespace sss {

namespace {

constexpr int kDenseDiagnosticsCap = 2000;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

SolveReport dispatch(const std::string& name, const SssOperator& a, const Vector& b,
                     const Vector& x0, const SolveOptions& opts, bool debug,
                     Mrs3Debug* dbg) {
  if (name == "mrs3") {
    Mrs3Options mo;
    mo.tol = opts.tol;
    mo.maxit = opts.maxit;
    mo.audit_every = opts.audit_every;
    mo.debug = debug;
    return mrs3_solve(a, b, x0, mo, debug ? dbg : nullptr);
  }
  if (name == "cgw") return cgw_solve(a, b, x0, opts);
  if (name == "gencg") return gencg_solve(a, b, opts);
  if (name == "trunc-gcr") return trunc_gcr_solve(a, b, x0, opts);
  if (name == "full-gcr") return full_gcr_solve(a, b, x0, opts);
  if (name == "hwl") {
    if (a.alpha != 0.0)
      throw std::invalid_argument("hwl requires alpha = 0 (pure skew system)");
    return hwl_solve(a.s, b, x0, opts);
  }
  if (name == "cgnr") return cgnr_solve(a, b, x0, opts);
  if (name == "gmres") return gmres_solve(a, b, x0, opts);
  if (name == "gmres3") return gmres_solve(a, b, x0, opts, 3);
  if (name == "bicgstab") return bicgstab_solve(a, b, x0, opts);
  throw std::invalid_argument("unknown solver: " + name);
}

}  // namespace

const std::vector<std::string>& solver_registry() {
  static const std::vector<std::string> names = {
      "mrs3",    "cgw",  "gencg", "trunc-gcr", "full-gcr",
      "hwl",     "cgnr", "gmres", "gmres3",    "bicgstab"};
  return names;
}

bool is_registered_solver(const std::string& name) {
  for (const auto& s : solver_registry())
    if (s == name) return true;
  return false;
}

void write_history_csv(const SolveReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "iteration,residual_norm,true_residual_norm\n";
  std::size_t audit_pos = 0;
  for (std::size_t j = 0; j < report.residual_history.size(); ++j) {
    out << j << ',' << fmt17(report.residual_history[j]) << ',';
    while (audit_pos < report.audited_residuals.size() &&
           report.audited_residuals[audit_pos].first < static_cast<int>(j))
      ++audit_pos;
    if (audit_pos < report.audited_residuals.size() &&
        report.audited_residuals[audit_pos].first == static_cast<int>(j)) {
      out << fmt17(report.audited_residuals[audit_pos].second);
    } else if (j + 1 == report.residual_history.size() &&
               report.true_final_residual >= 0.0) {
      out << fmt17(report.true_final_residual);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

void write_summary_csv(const ExperimentResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "solver,status,iterations,final_residual,true_final_residual,"
         "matvecs,inner_products,vector_updates,peak_vectors,kappa,detail\n";
  for (const auto& [name, rep] : result.reports) {
    const double final_r =
        rep.residual_history.empty() ? -1.0 : rep.residual_history.back();
    out << name << ',' << to_string(rep.status) << ',' << rep.iterations << ','
        << fmt17(final_r) << ',' << fmt17(rep.true_final_residual) << ','
        << rep.counters.matvecs << ',' << rep.counters.inner_products << ','
        << rep.counters.vector_updates << ',' << rep.counters.peak_vectors << ',';
    if (result.kappa) out << fmt17(*result.kappa);
    out << ',' << rep.breakdown_detail << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.solvers.empty())
    throw std::invalid_argument("run_experiment: no solvers requested");
  for (const auto& name : cfg.solvers)
    if (!is_registered_solver(name))
      throw std::invalid_argument("unknown solver: " + name);
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("run_experiment: tol must be > 0");
  if (cfg.maxit < 1) throw std::invalid_argument("run_experiment: maxit must be >= 1");

  SssSystem sys = [&] {
    if (const auto* adv = std::get_if<AdvectionConfig>(&cfg.problem))
      return make_sss_system(*adv);
    const auto& fp = std::get<FileProblem>(cfg.problem);
    MmData mm = read_matrix_market(fp.matrix_path);
    double alpha = fp.alpha_override.value_or(mm.alpha.value_or(0.0));
    const int n = mm.s.size();
    Vector b;
    if (fp.rhs_path) {
      b = read_vector(*fp.rhs_path);
      if (static_cast<int>(b.size()) != n)
        throw std::invalid_argument("rhs dimension does not match the matrix");
    } else {
      std::mt19937_64 gen(fp.seed);
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      b.resize(n);
      for (double& v : b) v = dist(gen);
      const double nb = kernels::nrm2(b);
      if (nb > 0.0) kernels::scal(1.0 / nb, b);
    }
    return SssSystem{SssOperator(alpha, std::move(mm.s)), std::move(b),
                     Vector(n, 0.0)};
  }();

  SolveOptions opts;
  opts.tol = cfg.tol;
  opts.maxit = cfg.maxit;
  opts.audit_every = cfg.audit_every;

  ExperimentResult result;
  if (cfg.compute_kappa && sys.a.size() <= kDenseDiagnosticsCap)
    result.kappa = condition_number(sys.a);

  for (const auto& name : cfg.solvers) {
    Mrs3Debug dbg;
    SolveReport rep =
        dispatch(name, sys.a, sys.b, sys.x0, opts, cfg.debug_recurrences, &dbg);

    // --debug-recurrences: cross-check the short-recurrence iterate against
    // the explicit least-squares route x = Q_j xi_j.
    if (cfg.debug_recurrences && name == "mrs3" && !dbg.betas.empty() &&
        sys.a.size() <= kDenseDiagnosticsCap) {
      const auto xi = recover_xi(assemble_extended_ritz(sys.a.alpha, dbg.betas),
                                 dbg.rotations, dbg.r0_norm);
      Vector xq(sys.x0.size(), 0.0);
      for (std::size_t i = 0; i < xi.size() && i < dbg.q_cols.size(); ++i)
        for (std::size_t k = 0; k < xq.size(); ++k)
          xq[k] += xi[i] * dbg.q_cols[i][k];
      double max_dev = 0.0;
      for (std::size_t k = 0; k < xq.size(); ++k)
        max_dev = std::max(max_dev, std::abs(xq[k] + sys.x0[k] - rep.x[k]));
      char buf[96];
      std::snprintf(buf, sizeof buf, "debug max|x - Q xi| = %.3e", max_dev);
      rep.breakdown_detail += rep.breakdown_detail.empty() ? buf : "; " + std::string(buf);
    }

    result.reports.emplace_back(name, std::move(rep));
  }

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    for (const auto& [name, rep] : result.reports)
      write_history_csv(rep, (std::filesystem::path(cfg.out_dir) / (name + ".csv")).string());
    write_summary_csv(result,
                      (std::filesystem::path(cfg.out_dir) / "summary.csv").string());
  }
  return result;
}

}  // namespace sss
