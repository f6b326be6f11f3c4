#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "sss/experiment.hpp"
#include "sss/matrix_market.hpp"

using namespace sss;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("sss_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const int rc = std::system((std::string(SOLVE_CLI_PATH) + " " + args +
                              " > /dev/null 2>&1")
                                 .c_str());
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("matrix market: skew-symmetric round trip with alpha comment") {
  auto dir = temp_dir("mm_roundtrip");
  auto s = oracle::random_skew(9, 601);
  const auto path = (dir / "s.mtx").string();
  write_matrix_market(s, path, 2.5);
  auto mm = read_matrix_market(path);
  REQUIRE(mm.alpha.has_value());
  CHECK(*mm.alpha == 2.5);
  CHECK(mm.s.size() == 9);
  CHECK(mm.s.nnz() == s.nnz());
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) CHECK(mm.s.entry(i, j) == s.entry(i, j));
}

TEST_CASE("matrix market: general files are verified skew") {
  auto dir = temp_dir("mm_general");
  const auto good = dir / "good.mtx";
  std::ofstream(good) << "%%MatrixMarket matrix coordinate real general\n"
                         "2 2 2\n1 2 3.0\n2 1 -3.0\n";
  auto mm = read_matrix_market(good.string());
  CHECK(mm.s.entry(0, 1) == 3.0);
  CHECK_FALSE(mm.alpha.has_value());

  const auto bad = dir / "bad.mtx";
  std::ofstream(bad) << "%%MatrixMarket matrix coordinate real general\n"
                        "2 2 2\n1 2 3.0\n2 1 -2.0\n";
  CHECK_THROWS_AS(read_matrix_market(bad.string()), std::invalid_argument);

  const auto rect = dir / "rect.mtx";
  std::ofstream(rect) << "%%MatrixMarket matrix coordinate real general\n"
                         "2 3 1\n1 2 3.0\n";
  CHECK_THROWS_AS(read_matrix_market(rect.string()), std::invalid_argument);

  const auto truncated = dir / "trunc.mtx";
  std::ofstream(truncated) << "%%MatrixMarket matrix coordinate real general\n"
                              "2 2 2\n1 2 3.0\n";
  CHECK_THROWS_AS(read_matrix_market(truncated.string()), MmParseError);

  CHECK_THROWS_AS(read_matrix_market((dir / "missing.mtx").string()),
                  std::invalid_argument);
}

TEST_CASE("vector file round trip") {
  auto dir = temp_dir("mm_vec");
  Vector v = {1.0, -2.5, 3.125e-17};
  const auto path = (dir / "v.mtx").string();
  write_vector(v, path);
  CHECK(read_vector(path) == v);
}

TEST_CASE("history CSV: header, full precision, audit column") {
  auto dir = temp_dir("csv");
  SolveReport rep;
  rep.residual_history = {1.0, 1.0 / std::sqrt(2.0), 5e-15};
  rep.audited_residuals = {{1, 0.70710678118654746}};
  rep.true_final_residual = 4.9e-15;
  rep.iterations = 2;
  const auto path = dir / "h.csv";
  write_history_csv(rep, path.string());
  const std::string text = slurp(path);
  CHECK(text.rfind("iteration,residual_norm,true_residual_norm\n", 0) == 0);
  CHECK(text.find("1,7.0710678118654746e-01,7.0710678118654746e-01") !=
        std::string::npos);
  CHECK(text.find("0,1.0000000000000000e+00,") != std::string::npos);

  SolveReport zero;
  zero.residual_history = {0.0};
  write_history_csv(zero, path.string());
  CHECK(slurp(path) ==
        "iteration,residual_norm,true_residual_norm\n"
        "0,0.0000000000000000e+00,0.0000000000000000e+00\n");
}

TEST_CASE("solver registry") {
  CHECK(solver_registry().size() == 10);
  CHECK(is_registered_solver("mrs3"));
  CHECK(is_registered_solver("trunc-gcr"));
  CHECK_FALSE(is_registered_solver("sor"));
}

TEST_CASE("run_experiment writes per-solver histories and a summary") {
  auto dir = temp_dir("exp");
  ExperimentConfig cfg;
  cfg.solvers = {"mrs3", "cgw"};
  AdvectionConfig adv;
  adv.n1 = 10;
  adv.n2 = 10;
  adv.alpha = 1.0;
  adv.gamma = 1.0;
  cfg.problem = adv;
  cfg.out_dir = dir.string();
  auto res = run_experiment(cfg);
  REQUIRE(res.reports.size() == 2);
  CHECK(res.reports[0].second.status == Status::converged);
  CHECK(res.reports[1].second.status == Status::converged);
  REQUIRE(res.kappa.has_value());
  CHECK(fs::exists(dir / "mrs3.csv"));
  CHECK(fs::exists(dir / "cgw.csv"));
  CHECK(fs::exists(dir / "summary.csv"));
  const std::string summary = slurp(dir / "summary.csv");
  CHECK(summary.find("mrs3,Converged") != std::string::npos);

  // byte-identical on a re-run
  const std::string h1 = slurp(dir / "mrs3.csv");
  run_experiment(cfg);
  CHECK(slurp(dir / "mrs3.csv") == h1);
}

TEST_CASE("run_experiment records the deterministic GCR breakdown") {
  ExperimentConfig cfg;
  cfg.solvers = {"trunc-gcr"};
  AdvectionConfig adv;
  adv.n1 = 8;
  adv.n2 = 8;
  adv.alpha = 0.0;
  cfg.problem = adv;
  auto res = run_experiment(cfg);
  CHECK(res.reports[0].second.status == Status::breakdown);
  CHECK(res.reports[0].second.iterations == 2);
}

TEST_CASE("run_experiment rejects unknown solvers") {
  ExperimentConfig cfg;
  cfg.solvers = {"sor"};
  cfg.problem = AdvectionConfig{};
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
}

TEST_CASE("file-based problems honor the alpha comment and overrides") {
  auto dir = temp_dir("file_problem");
  auto s = oracle::random_skew(6, 611);
  const auto mpath = (dir / "s.mtx").string();
  write_matrix_market(s, mpath, 3.0);
  Vector rhs = oracle::random_unit_vector(6, 612);
  const auto vpath = (dir / "b.mtx").string();
  write_vector(rhs, vpath);

  ExperimentConfig cfg;
  cfg.solvers = {"mrs3"};
  FileProblem fp;
  fp.matrix_path = mpath;
  fp.rhs_path = vpath;
  cfg.problem = fp;
  auto res = run_experiment(cfg);
  CHECK(res.reports[0].second.status == Status::converged);
  // alpha = 3.0 from the file comment: verify against the dense solve
  Eigen::MatrixXd A = dense_matrix(SssOperator(3.0, s));
  Eigen::VectorXd xd = oracle::direct_solve(A, oracle::to_eigen(rhs));
  CHECK((oracle::to_eigen(res.reports[0].second.x) - xd).norm() <= 1e-7);
}

TEST_CASE("cli: exit codes") {
  auto dir = temp_dir("cli");
  CHECK(run_cli("solve --n1 6 --n2 6 --alpha 1 --out " + (dir / "out").string()) == 0);
  CHECK(fs::exists(dir / "out" / "mrs3.csv"));
  CHECK(fs::exists(dir / "out" / "summary.csv"));

  // breakdown is a result, not a failure
  CHECK(run_cli("solve --solver trunc-gcr --n1 6 --n2 6 --alpha 0") == 0);
  // usage errors
  CHECK(run_cli("solve --solver sor --n1 4 --n2 4") == 2);
  CHECK(run_cli("solve --no-such-flag 1") == 2);
  CHECK(run_cli("") == 2);
  // I/O and parse errors
  CHECK(run_cli("solve --matrix " + (dir / "missing.mtx").string()) == 3);
  const auto bad = dir / "bad.mtx";
  std::ofstream(bad) << "not a matrix market file\n";
  CHECK(run_cli("solve --matrix " + bad.string()) == 3);
}

TEST_CASE("cli: multi-solver run with --debug-recurrences") {
  auto dir = temp_dir("cli_multi");
  CHECK(run_cli("solve --solver mrs3,cgw,gmres3 --n1 8 --n2 8 --alpha 1 "
                "--gamma 2 --debug-recurrences --out " +
                (dir / "out").string()) == 0);
  for (const char* f : {"mrs3.csv", "cgw.csv", "gmres3.csv", "summary.csv"})
    CHECK(fs::exists(dir / "out" / f));
  const std::string summary = slurp(dir / "out" / "summary.csv");
  CHECK(summary.find("debug max|x - Q xi|") != std::string::npos);
}
