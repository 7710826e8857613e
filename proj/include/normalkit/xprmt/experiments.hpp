#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "normalkit/core.hpp"
#include "normalkit/krylov/solvers.hpp"
#include "normalkit/xprmt/table.hpp"

namespace normalkit::xprmt {

/// Full description of a named experiment. Everything that affects the
/// numbers lives here and is copied into the result metadata.
struct ExperimentSpec {
  std::string name;
  /// "table1", "fd" (GMRES(P), CGNE(RᵀR), CGNE(PᵀP) over ν), "fem" or "history".
  std::string kind;
  std::string solver = "cgne";
  /// fem: identity | l2 | h1.
  std::string riesz = "identity";
  /// fd: centered | upwind.
  std::string scheme = "centered";
  /// fem: l2-aniso | rd-direct | rd-projected | rd-gmg.
  std::string which;
  /// fem: x | diag.
  std::string wind = "x";
  /// table1: one column per entry. fem: a single config string for the
  /// preconditioner of `which`; empty picks the default.
  std::vector<std::string> preconditioners;
  /// table1: system sizes n. fem/history: mesh sizes.
  std::vector<Index> sizes;
  std::vector<double> nus;
  /// fd: number of unknowns.
  Index n = 10000;
  double tol_abs = 1e-5;
  Index max_iter = 1000;
  krylov::Monitor monitor = krylov::Monitor::TrueResidual;
  double divergence_factor = 0.0;
  double delta_sd = 1e-4;
  /// Meshes above 256 need this set.
  bool allow_large = false;
  /// history: where the CSV files go.
  std::string output_dir = ".";

  /// Throws ConfigError.
  void validate() const;
  nlohmann::json to_json() const;
};

/// Registered experiment names, in display order.
std::vector<std::string> experiment_names();
/// Throws ConfigError for unknown names.
ExperimentSpec lookup(const std::string& name);

/// `%g` rendering used for ν row labels and history file names.
std::string format_nu(double nu);
std::string mesh_label(Index m);

/// table1 family: centered scheme, ν = β = 1, preconditioner columns built
/// from dense factors of A (qr-r, rq-r, polar-left, polar-right).
TableResult run_table1(const ExperimentSpec& spec);
/// GMRES(P), CGNE(RᵀR) and CGNE(PᵀP) with P the advection factor and R its
/// QR factor, rows over ν.
TableResult run_table_fd(const ExperimentSpec& spec);
/// Rows over ν, columns over meshes.
TableResult run_fem_experiment(const ExperimentSpec& spec);

/// A single FEM solve, as run for one table cell.
krylov::SolveReport solve_fem_case(const ExperimentSpec& spec, Index mesh, double nu);

/// `fem_advection_mass_normal_eq_<wind>flow_<nu>_<mesh>.0.csv`.
std::string history_file_name(const std::string& wind, double nu, Index mesh);

/// Writes one `step,res` CSV per (mesh, ν) into spec.output_dir and returns
/// the iteration counts as a table.
TableResult run_history(const ExperimentSpec& spec);

/// Dispatch on spec.kind.
TableResult run_experiment(const ExperimentSpec& spec);

}  // namespace normalkit::xprmt
