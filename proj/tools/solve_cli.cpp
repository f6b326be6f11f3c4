#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sss/experiment.hpp"
#include "sss/matrix_market.hpp"

namespace {

std::vector<std::string> split_names(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterative solvers for shifted skew-symmetric systems"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "Run solvers on one system");
  std::string solver_csv = "mrs3";
  int n1 = 20, n2 = 20, maxit = 400, audit_every = 10;
  double alpha = 1.0, gamma = 1.0, tol = 1e-8;
  bool alpha_given = false;
  std::uint64_t seed = 0;
  std::string out_dir, matrix_path, rhs_path;
  bool debug_recurrences = false;

  solve->add_option("--solver", solver_csv, "Comma-separated solver names");
  solve->add_option("--n1", n1, "Grid points in the first direction");
  solve->add_option("--n2", n2, "Grid points in the second direction");
  solve->add_option("--alpha", alpha, "Shift alpha in A = alpha I + S")
      ->each([&](const std::string&) { alpha_given = true; });
  solve->add_option("--gamma", gamma, "Advection coefficient gamma");
  solve->add_option("--tol", tol, "Convergence tolerance");
  solve->add_option("--maxit", maxit, "Iteration cap");
  solve->add_option("--seed", seed, "Right-hand-side RNG seed");
  solve->add_option("--out", out_dir, "Output directory for CSV files");
  solve->add_option("--matrix", matrix_path, "Matrix Market file instead of the grid");
  solve->add_option("--rhs", rhs_path, "Right-hand-side vector file (Matrix Market array)");
  solve->add_option("--audit-every", audit_every, "True-residual audit interval");
  solve->add_flag("--debug-recurrences", debug_recurrences,
                  "Cross-check the short recurrences against the explicit route");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  sss::ExperimentConfig cfg;
  cfg.solvers = split_names(solver_csv);
  cfg.tol = tol;
  cfg.maxit = maxit;
  cfg.audit_every = audit_every;
  cfg.debug_recurrences = debug_recurrences;
  cfg.out_dir = out_dir;

  if (!matrix_path.empty()) {
    sss::FileProblem fp;
    fp.matrix_path = matrix_path;
    if (alpha_given) fp.alpha_override = alpha;
    if (!rhs_path.empty()) fp.rhs_path = rhs_path;
    fp.seed = seed;
    cfg.problem = fp;
  } else {
    sss::AdvectionConfig adv;
    adv.n1 = n1;
    adv.n2 = n2;
    adv.alpha = alpha;
    adv.gamma = gamma;
    adv.seed = seed;
    cfg.problem = adv;
  }

  for (const auto& name : cfg.solvers)
    if (!sss::is_registered_solver(name)) {
      std::cerr << "error: unknown solver '" << name << "'\n";
      return 2;
    }

  try {
    sss::ExperimentResult result = sss::run_experiment(cfg);
    for (const auto& [name, rep] : result.reports) {
      const double final_r =
          rep.residual_history.empty() ? 0.0 : rep.residual_history.back();
      std::printf(
          "%-10s %-14s iters=%-5d  ||r||=%.3e  true=%.3e  mv=%lld ip=%lld "
          "up=%lld peak_vec=%d%s%s\n",
          name.c_str(), sss::to_string(rep.status), rep.iterations, final_r,
          rep.true_final_residual, static_cast<long long>(rep.counters.matvecs),
          static_cast<long long>(rep.counters.inner_products),
          static_cast<long long>(rep.counters.vector_updates),
          rep.counters.peak_vectors, rep.breakdown_detail.empty() ? "" : "  ",
          rep.breakdown_detail.c_str());
    }
    if (result.kappa) std::printf("kappa = %.6e\n", *result.kappa);
  } catch (const sss::MmParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    // Distinguish I/O problems (unopenable files) from usage errors.
    const std::string msg = e.what();
    if (msg.rfind("cannot open", 0) == 0 || msg.find("not square") != std::string::npos ||
        msg.find("not skew") != std::string::npos ||
        msg.find("does not match the matrix") != std::string::npos) {
      std::cerr << "error: " << msg << '\n';
      return 3;
    }
    std::cerr << "usage error: " << msg << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
