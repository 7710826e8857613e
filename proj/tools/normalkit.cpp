#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "normalkit/fd1d/problem.hpp"
#include "normalkit/fem2d/assembly.hpp"
#include "normalkit/fem2d/mesh.hpp"
#include "normalkit/matkit/csr.hpp"
#include "normalkit/simd/kernels.hpp"
#include "normalkit/xprmt/experiments.hpp"
#include "normalkit/xprmt/table.hpp"

using namespace normalkit;

namespace {

enum Exit { kPass = 0, kSolverFailure = 1, kCompareFailure = 2, kBadConfig = 3 };

struct RunOptions {
  std::string experiment;
  std::vector<Index> sizes;
  std::vector<double> nus;
  Index n = 0;
  std::string wind;
  std::string scheme;
  std::string precond;
  double tol = 0.0;
  Index max_iter = 0;
  std::string output_dir;
  std::string json_path;
  std::string csv_path;
  std::string golden;
  bool allow_large = false;
};

struct ExportOptions {
  std::string system;
  Index n = 100;
  Index mesh = 32;
  double nu = 1e-2;
  double beta = 1.0;
  std::string wind = "x";
  double delta = 1e-4;
  std::string output;
  std::string rhs;
};

matkit::CsrMatrix to_csr(const matkit::Tridiagonal& t) {
  std::vector<matkit::Triplet> trip;
  const Index n = t.size();
  for (Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (i > 0) trip.push_back({i, i - 1, t.sub()[k - 1]});
    trip.push_back({i, i, t.diag()[k]});
    if (i + 1 < n) trip.push_back({i, i + 1, t.super()[k]});
  }
  return matkit::CsrMatrix::from_triplets(n, n, trip);
}

void write_vector_mm(std::ostream& out, const Vector& v) {
  out << "%%MatrixMarket matrix array real general\n" << v.size() << " 1\n";
  char buf[32];
  for (double x : v) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out << buf << '\n';
  }
}

int cmd_run(const RunOptions& o) {
  auto spec = xprmt::lookup(o.experiment);
  if (!o.sizes.empty()) spec.sizes = o.sizes;
  if (!o.nus.empty()) spec.nus = o.nus;
  if (o.n > 0) spec.n = o.n;
  if (!o.wind.empty()) spec.wind = o.wind;
  if (!o.scheme.empty()) spec.scheme = o.scheme;
  if (!o.precond.empty()) {
    if (spec.kind == "table1") {
      spec.preconditioners.clear();
      std::istringstream in(o.precond);
      for (std::string item; std::getline(in, item, ';');) spec.preconditioners.push_back(item);
    } else {
      spec.preconditioners = {o.precond};
    }
  }
  if (o.tol > 0.0) spec.tol_abs = o.tol;
  if (o.max_iter > 0) spec.max_iter = o.max_iter;
  if (!o.output_dir.empty()) spec.output_dir = o.output_dir;
  spec.allow_large = o.allow_large;
  spec.validate();

  const auto table = xprmt::run_experiment(spec);
  xprmt::print_table(std::cout, table);
  if (!o.json_path.empty()) xprmt::save_table_json(o.json_path, table);
  if (!o.csv_path.empty()) {
    std::ofstream out(o.csv_path);
    if (!out) throw Error("cannot write " + o.csv_path);
    xprmt::write_table_csv(out, table);
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r)
    for (std::size_t c = 0; c < table.columns.size(); ++c)
      if (table.at(r, c).error) {
        std::cerr << "error at " << table.rows[r] << "/" << table.columns[c] << ": " << table.at(r, c).reason << '\n';
      }
  if (table.has_errors()) return kSolverFailure;
  if (spec.kind == "history") {
    for (const auto& row : table.cells)
      for (const auto& c : row)
        if (c.dash()) return kSolverFailure;
  }
  if (!o.golden.empty()) {
    const auto golden = xprmt::load_table(o.golden);
    const auto rep = xprmt::compare(table, golden);
    xprmt::print_report(std::cout, table, golden, rep);
    if (!rep.passed) return kCompareFailure;
  }
  return kPass;
}

int cmd_compare(const std::string& result_path, const std::string& golden_path) {
  const auto result = xprmt::load_table(result_path);
  const auto golden = xprmt::load_table(golden_path);
  try {
    const auto rep = xprmt::compare(result, golden);
    xprmt::print_report(std::cout, result, golden, rep);
    return rep.passed ? kPass : kCompareFailure;
  } catch (const DimensionError& e) {
    std::cerr << e.what() << '\n';
    return kCompareFailure;
  }
}

int cmd_export(const ExportOptions& o) {
  matkit::CsrMatrix a;
  Vector b;
  if (o.system.rfind("fd-", 0) == 0) {
    fd1d::Problem1D p;
    p.n = o.n;
    p.nu = o.nu;
    p.beta = o.beta;
    if (o.system == "fd-centered" || o.system == "fd-upwind") {
      const auto s = o.system == "fd-centered" ? fd1d::assemble_centered(p) : fd1d::assemble_upwind(p);
      a = to_csr(s.matrix);
      b = s.rhs;
    } else if (o.system == "fd-advection") {
      p.validate();
      a = to_csr(fd1d::advection_prec(p));
    } else {
      throw ConfigError("unknown system: " + o.system);
    }
  } else {
    const fem2d::StructuredMesh mesh(o.mesh);
    const auto beta = fem2d::wind_from_name(o.wind);
    if (o.system == "fem-advdiff") {
      fem2d::FemProblem2D p;
      p.nu = o.nu;
      p.beta = beta;
      p.delta_sd = o.delta;
      auto s = fem2d::assemble_advdiff(mesh, p);
      a = std::move(s.matrix);
      b = std::move(s.rhs);
    } else if (o.system == "fem-mass") {
      a = fem2d::assemble_mass(mesh);
    } else if (o.system == "fem-stiffness") {
      a = fem2d::assemble_stiffness(mesh);
    } else if (o.system == "fem-aniso") {
      a = fem2d::assemble_anisotropic(mesh, beta);
    } else if (o.system == "fem-rd") {
      if (!(o.nu > 0.0)) throw ConfigError("nu must be positive");
      a = fem2d::assemble_reaction_diffusion(mesh, o.nu, beta);
    } else {
      throw ConfigError("unknown system: " + o.system);
    }
  }
  if (o.output.empty()) {
    matkit::write_matrix_market(std::cout, a);
  } else {
    matkit::write_matrix_market(o.output, a);
  }
  if (!o.rhs.empty()) {
    if (b.empty()) throw ConfigError(o.system + " has no right-hand side");
    std::ofstream out(o.rhs);
    if (!out) throw Error("cannot write " + o.rhs);
    write_vector_mm(out, b);
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"normalkit: preconditioned normal-equation solvers and experiment harness"};
  app.require_subcommand(1);
  std::string simd;
  app.add_option("--simd", simd, "Kernel backend (scalar, avx2); overrides NORMALKIT_SIMD");

  RunOptions ro;
  auto* run = app.add_subcommand("run", "Run a registered experiment and print its table");
  run->add_option("experiment", ro.experiment, "Experiment name (see `normalkit list`)")->required();
  run->add_option("--sizes,--meshes", ro.sizes, "System sizes (table1) or mesh sizes (2D)")->delimiter(',');
  run->add_option("--nus", ro.nus, "Diffusion coefficients")->delimiter(',');
  run->add_option("--n", ro.n, "Unknowns for the 1D sweeps");
  run->add_option("--wind", ro.wind, "x or diag");
  run->add_option("--scheme", ro.scheme, "centered or upwind");
  run->add_option("--precond", ro.precond, "Preconditioner string; table1 takes a ';'-separated list");
  run->add_option("--tol", ro.tol, "Absolute residual tolerance");
  run->add_option("--max-iter", ro.max_iter, "Iteration cap");
  run->add_option("--output-dir", ro.output_dir, "Directory for history CSV files");
  run->add_option("--json", ro.json_path, "Write the table as JSON");
  run->add_option("--csv", ro.csv_path, "Write the table as CSV");
  run->add_option("--golden", ro.golden, "Compare against a golden table");
  run->add_flag("--allow-large", ro.allow_large, "Permit meshes above 256x256");

  std::string result_path, golden_path;
  auto* cmp = app.add_subcommand("compare", "Compare a result table with a golden table");
  cmp->add_option("result", result_path)->required();
  cmp->add_option("golden", golden_path)->required();

  ExportOptions eo;
  auto* exp = app.add_subcommand("export-mm", "Write an assembled matrix in Matrix Market format");
  exp->add_option("system", eo.system,
                  "fd-centered, fd-upwind, fd-advection, fem-advdiff, fem-mass, fem-stiffness, fem-aniso, fem-rd")
      ->required();
  exp->add_option("--n", eo.n, "Unknowns (1D)");
  exp->add_option("--mesh", eo.mesh, "Cells per side (2D)");
  exp->add_option("--nu", eo.nu, "Diffusion coefficient");
  exp->add_option("--beta", eo.beta, "Wind speed (1D)");
  exp->add_option("--wind", eo.wind, "x or diag (2D)");
  exp->add_option("--delta", eo.delta, "Streamline-diffusion parameter (2D)");
  exp->add_option("--output,-o", eo.output, "Matrix file; stdout if omitted");
  exp->add_option("--rhs", eo.rhs, "Also write the right-hand side");

  auto* list = app.add_subcommand("list", "List registered experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kBadConfig;
  }

  try {
    if (!simd.empty()) simd::set_active(simd::parse_backend(simd));
    if (*list) {
      for (const auto& name : xprmt::experiment_names()) std::cout << name << '\n';
      return kPass;
    }
    if (*run) return cmd_run(ro);
    if (*cmp) return cmd_compare(result_path, golden_path);
    if (*exp) return cmd_export(eo);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kBadConfig;
  } catch (const Error& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolverFailure;
  }
  return kPass;
}
