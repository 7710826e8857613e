#include "normalkit/xprmt/experiments.hpp"

#include <cstdio>
#include <filesystem>
#include <set>

#include "normalkit/fd1d/problem.hpp"
#include "normalkit/fem2d/assembly.hpp"
#include "normalkit/fem2d/mesh.hpp"
#include "normalkit/fem2d/riesz.hpp"
#include "normalkit/matkit/qr.hpp"
#include "normalkit/precond/config.hpp"
#include "normalkit/precond/direct.hpp"
#include "normalkit/precond/factor.hpp"
#include "normalkit/precond/gmg.hpp"
#include "normalkit/simd/kernels.hpp"

namespace normalkit::xprmt {

using krylov::KrylovConfig;
using krylov::LinearOperator;
using krylov::SolveReport;
using nlohmann::json;

namespace {

constexpr Index kLargeMesh = 256;

const std::vector<double> kFemNus = {1e-2, 5e-3, 2.5e-3, 1.25e-3};

Cell cell_from(const SolveReport& r) {
  if (r.converged) return Cell::count(r.iterations);
  return Cell::dash_cell(krylov::to_string(r.termination));
}

template <class F>
Cell guarded(F&& run) {
  try {
    return cell_from(run());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    return Cell::dash_cell(e.what(), true);
  }
}

KrylovConfig config_of(const ExperimentSpec& s) {
  KrylovConfig cfg;
  cfg.tol_abs = s.tol_abs;
  cfg.max_iter = s.max_iter;
  cfg.monitor = s.monitor;
  cfg.divergence_factor = s.divergence_factor;
  return cfg;
}

TableResult empty_table(const ExperimentSpec& s, std::string row_label, std::vector<std::string> rows,
                        std::vector<std::string> columns) {
  TableResult t;
  t.name = s.name;
  t.row_label = std::move(row_label);
  t.rows = std::move(rows);
  t.columns = std::move(columns);
  t.cells.assign(t.rows.size(), std::vector<Cell>(t.columns.size()));
  t.metadata["experiment"] = s.to_json();
  t.metadata["kernels"] = simd::active().name;
  return t;
}

std::vector<std::string> nu_labels(const std::vector<double>& nus) {
  std::vector<std::string> out;
  for (double nu : nus) out.push_back(format_nu(nu));
  return out;
}

// ---- 1D ----

precond::FactorSolves table1_factor(const std::string& kind, const matkit::Tridiagonal& a,
                                    const fd1d::Problem1D& p) {
  const auto spec = precond::parse_precond(kind);
  if (spec.kind == "factor") return precond::factor_solves(fd1d::advection_prec(p));
  const matkit::DenseMatrix d = a.to_dense();
  if (spec.kind == "qr-r") return precond::upper_triangular_solves(matkit::qr(d).r);
  if (spec.kind == "rq-r") return precond::upper_triangular_solves(matkit::rq(d).r);
  if (spec.kind == "polar-left") return precond::factor_solves(matkit::polar(d).h);
  if (spec.kind == "polar-right") return precond::factor_solves(matkit::polar(d.transpose()).h);
  throw ConfigError("preconditioner not available for table1: " + kind);
}

// ---- 2D ----

Index auto_levels(Index m) {
  Index levels = 1;
  while (m % 2 == 0 && m / 2 >= 4) {
    m /= 2;
    ++levels;
  }
  return levels;
}

std::string default_precond(const std::string& which) {
  if (which == "rd-gmg") return "gmg";
  if (which == "rd-projected") return "direct:banded-lu";
  return "direct:cholesky";
}

precond::PreconditionerHandle matrix_prec(const matkit::CsrMatrix& g, const precond::PrecondSpec& ps, Index m) {
  if (ps.kind == "identity") return precond::PreconditionerHandle::identity(g.rows());
  if (ps.kind == "direct") {
    return precond::from_spd_matrix(g, ps.variant == "banded-lu" ? precond::DirectMethod::BandedLU
                                                                 : precond::DirectMethod::Cholesky);
  }
  if (ps.kind == "inner-cg") {
    return precond::from_spd_operator(LinearOperator::from(g), ps.number("tol", 1e-10), ps.integer("max", 1000));
  }
  if (ps.kind == "gmg") {
    const Index smooth = ps.integer("smooth", 2);
    auto h = precond::gmg_build(g, {m, m}, ps.integer("levels", auto_levels(m)), ps.number("omega", 1.0),
                                ps.integer("pre", smooth), ps.integer("post", smooth));
    return precond::gmg_vcycle_prec(std::move(h));
  }
  throw ConfigError("preconditioner not available for a 2D experiment: " + ps.to_string());
}

precond::PreconditionerHandle fem_prec(const ExperimentSpec& s, const fem2d::StructuredMesh& mesh, double nu,
                                       fem2d::Wind beta) {
  const std::string text = s.preconditioners.empty() ? default_precond(s.which) : s.preconditioners.front();
  const auto ps = precond::parse_precond(text);
  const Index m = mesh.mx();
  if (s.which == "l2-aniso") return matrix_prec(fem2d::assemble_anisotropic(mesh, beta), ps, m);
  if (s.which == "rd-direct" || s.which == "rd-gmg") {
    return matrix_prec(fem2d::assemble_reaction_diffusion(mesh, nu, beta), ps, m);
  }
  // rd-projected
  if (ps.kind == "direct") return fem2d::projected_rd_prec(mesh, nu, beta);
  if (ps.kind == "inner-cg") {
    return precond::from_spd_operator(fem2d::projected_rd_operator(mesh, nu, beta), ps.number("tol", 1e-10),
                                      ps.integer("max", 1000));
  }
  if (ps.kind == "identity") return precond::PreconditionerHandle::identity(mesh.num_interior());
  throw ConfigError("preconditioner not available for rd-projected: " + text);
}

ExperimentSpec table1_spec() {
  ExperimentSpec s;
  s.name = "table1";
  s.kind = "table1";
  s.scheme = "centered";
  s.preconditioners = {"qr-r", "rq-r", "polar-left", "polar-right"};
  s.sizes = {10, 100, 1000};
  s.tol_abs = 1e-10;
  s.max_iter = 1000;
  s.monitor = krylov::Monitor::PreconditionedResidual;
  s.divergence_factor = 1e5;
  return s;
}

ExperimentSpec fd_spec(std::string name, std::string scheme, std::vector<double> nus) {
  ExperimentSpec s;
  s.name = std::move(name);
  s.kind = "fd";
  s.scheme = std::move(scheme);
  s.nus = std::move(nus);
  s.n = 10000;
  s.tol_abs = 1e-5;
  s.max_iter = 3000;
  s.monitor = krylov::Monitor::PreconditionedResidual;
  return s;
}

ExperimentSpec fem_spec(std::string name, std::string which, std::string wind, std::vector<Index> meshes) {
  ExperimentSpec s;
  s.name = std::move(name);
  s.kind = "fem";
  s.which = std::move(which);
  s.riesz = s.which == "l2-aniso" ? "l2" : "h1";
  s.wind = std::move(wind);
  s.sizes = std::move(meshes);
  s.nus = kFemNus;
  s.max_iter = s.which == "l2-aniso" ? 20000 : 1000;
  return s;
}

}  // namespace

void ExperimentSpec::validate() const {
  static const std::set<std::string> kinds = {"table1", "fd", "fem", "history"};
  static const std::set<std::string> whiches = {"l2-aniso", "rd-direct", "rd-projected", "rd-gmg"};
  if (!kinds.count(kind)) throw ConfigError("unknown experiment kind: " + kind);
  if (!(tol_abs > 0.0)) throw ConfigError("tol_abs must be positive");
  if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
  if (divergence_factor < 0.0) throw ConfigError("divergence_factor must be nonnegative");
  for (double nu : nus)
    if (!(nu > 0.0)) throw ConfigError("nu must be positive");
  for (const auto& p : preconditioners) (void)precond::parse_precond(p);
  if (kind == "table1") {
    if (sizes.empty() || preconditioners.empty()) throw ConfigError("table1 needs sizes and preconditioners");
    for (Index n : sizes)
      if (n < 2) throw ConfigError("table1 sizes must be at least 2");
    return;
  }
  if (kind == "fd") {
    if (scheme != "centered" && scheme != "upwind") throw ConfigError("scheme must be centered or upwind: " + scheme);
    if (nus.empty()) throw ConfigError("fd experiments need at least one nu");
    if (n < 2) throw ConfigError("n must be at least 2");
    return;
  }
  if (!whiches.count(which)) throw ConfigError("unknown 2D experiment: " + which);
  if (solver != "cgne") throw ConfigError("2D experiments run cgne only");
  (void)fem2d::wind_from_name(wind);
  (void)fem2d::riesz_from_name(riesz);
  if (sizes.empty() || nus.empty()) throw ConfigError("2D experiments need meshes and nus");
  if (preconditioners.size() > 1) throw ConfigError("2D experiments take one preconditioner string");
  for (Index m : sizes) {
    if (m < 2) throw ConfigError("mesh size must be at least 2");
    if (m > kLargeMesh && !allow_large) {
      throw ConfigError("mesh " + mesh_label(m) + " needs the large-mesh opt-in");
    }
  }
}

json ExperimentSpec::to_json() const {
  json j;
  j["name"] = name;
  j["kind"] = kind;
  j["solver"] = solver;
  if (kind == "fem" || kind == "history") {
    j["riesz"] = riesz;
    j["which"] = which;
    j["wind"] = wind;
    j["preconditioner"] = preconditioners.empty() ? default_precond(which) : preconditioners.front();
    j["meshes"] = sizes;
    j["delta_sd"] = delta_sd;
  } else if (kind == "table1") {
    j["scheme"] = scheme;
    j["preconditioners"] = preconditioners;
    j["sizes"] = sizes;
  } else {
    j["scheme"] = scheme;
    j["n"] = n;
  }
  j["nus"] = nus;
  j["tol_abs"] = tol_abs;
  j["max_iter"] = max_iter;
  j["monitor"] = krylov::to_string(monitor);
  j["divergence_factor"] = divergence_factor;
  return j;
}

std::vector<std::string> experiment_names() {
  return {"table1", "table2", "table3", "table4", "table4-smoke", "table5",
          "table8", "rd-direct", "rd-gmg", "history"};
}

ExperimentSpec lookup(const std::string& name) {
  if (name == "table1") return table1_spec();
  if (name == "table2") return fd_spec(name, "centered", {1e-2, 5e-3, 1e-3, 5e-4, 1e-4});
  if (name == "table3") return fd_spec(name, "upwind", {1e-2, 5e-3, 1e-3, 5e-4, 1e-4, 5e-5, 1e-5, 5e-6, 1e-6});
  if (name == "table4") return fem_spec(name, "l2-aniso", "x", {128});
  if (name == "table4-smoke") return fem_spec(name, "l2-aniso", "x", {64});
  if (name == "table5") return fem_spec(name, "rd-projected", "x", {32, 64, 128});
  if (name == "table8") return fem_spec(name, "rd-gmg", "diag", {32, 64, 128});
  if (name == "rd-direct") return fem_spec(name, "rd-direct", "x", {32, 64, 128, 256});
  if (name == "rd-gmg") return fem_spec(name, "rd-gmg", "x", {32, 64, 128, 256});
  if (name == "history") {
    ExperimentSpec s = fem_spec(name, "rd-gmg", "diag", {256});
    s.kind = "history";
    s.nus = {1.25e-3, 2.5e-3, 1e-2};
    return s;
  }
  throw ConfigError("unknown experiment: " + name);
}

std::string format_nu(double nu) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", nu);
  return buf;
}

std::string mesh_label(Index m) { return std::to_string(m) + "x" + std::to_string(m); }

TableResult run_table1(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<std::string> rows;
  for (Index n : spec.sizes) rows.push_back(std::to_string(n));
  TableResult t = empty_table(spec, "n", rows, spec.preconditioners);
  const KrylovConfig cfg = config_of(spec);
  for (std::size_t r = 0; r < spec.sizes.size(); ++r) {
    fd1d::Problem1D p;
    p.nu = 1.0;
    p.beta = 1.0;
    p.n = spec.sizes[r];
    const auto sys = fd1d::assemble_centered(p);
    const auto a = LinearOperator::from(sys.matrix);
    for (std::size_t c = 0; c < spec.preconditioners.size(); ++c) {
      t.cells[r][c] = guarded([&] {
        const auto g = precond::from_factor(table1_factor(spec.preconditioners[c], sys.matrix, p));
        return krylov::cgne(a, g, sys.rhs, cfg);
      });
    }
  }
  return t;
}

TableResult run_table_fd(const ExperimentSpec& spec) {
  spec.validate();
  TableResult t = empty_table(spec, "nu", nu_labels(spec.nus), {"GMRES(P)", "CGNE(RtR)", "CGNE(PtP)"});
  KrylovConfig cfg = config_of(spec);
  cfg.side = krylov::Side::Left;
  for (std::size_t r = 0; r < spec.nus.size(); ++r) {
    fd1d::Problem1D p;
    p.nu = spec.nus[r];
    p.beta = 1.0;
    p.n = spec.n;
    const auto sys = spec.scheme == "upwind" ? fd1d::assemble_upwind(p) : fd1d::assemble_centered(p);
    const auto a = LinearOperator::from(sys.matrix);
    const auto pf = precond::factor_solves(fd1d::advection_prec(p));
    t.cells[r][0] = guarded([&] { return krylov::gmres(a, precond::inverse_operator(pf), sys.rhs, cfg); });
    t.cells[r][1] = guarded([&] {
      const matkit::TridiagonalQr qr(fd1d::advection_prec(p));
      return krylov::cgne(a, precond::from_factor(precond::factor_solves(qr.r())), sys.rhs, cfg);
    });
    t.cells[r][2] = guarded([&] { return krylov::cgne(a, precond::from_factor(pf), sys.rhs, cfg); });
  }
  return t;
}

SolveReport solve_fem_case(const ExperimentSpec& spec, Index mesh_size, double nu) {
  const fem2d::StructuredMesh mesh(mesh_size);
  fem2d::FemProblem2D p;
  p.nu = nu;
  p.beta = fem2d::wind_from_name(spec.wind);
  p.delta_sd = spec.delta_sd;
  const auto sys = fem2d::assemble_advdiff(mesh, p);
  const auto g = fem_prec(spec, mesh, nu, p.beta);
  const auto a = LinearOperator::from(sys.matrix);
  const KrylovConfig cfg = config_of(spec);
  const auto variant = fem2d::riesz_from_name(spec.riesz);
  if (variant == fem2d::RieszVariant::Identity) return krylov::cgne(a, g, sys.rhs, cfg);
  const auto t = fem2d::riesz(mesh, variant, nu);
  return krylov::cgne(a, t.as_operator(), g, sys.rhs, cfg);
}

TableResult run_fem_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<std::string> cols;
  for (Index m : spec.sizes) cols.push_back(mesh_label(m));
  TableResult t = empty_table(spec, "nu", nu_labels(spec.nus), cols);
  for (std::size_t r = 0; r < spec.nus.size(); ++r)
    for (std::size_t c = 0; c < spec.sizes.size(); ++c)
      t.cells[r][c] = guarded([&] { return solve_fem_case(spec, spec.sizes[c], spec.nus[r]); });
  return t;
}

std::string history_file_name(const std::string& wind, double nu, Index mesh) {
  return "fem_advection_mass_normal_eq_" + wind + "flow_" + format_nu(nu) + "_" + std::to_string(mesh) + ".0.csv";
}

TableResult run_history(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<std::string> cols;
  for (Index m : spec.sizes) cols.push_back(mesh_label(m));
  TableResult t = empty_table(spec, "nu", nu_labels(spec.nus), cols);
  std::filesystem::create_directories(spec.output_dir);
  json files = json::array();
  for (std::size_t r = 0; r < spec.nus.size(); ++r) {
    for (std::size_t c = 0; c < spec.sizes.size(); ++c) {
      t.cells[r][c] = guarded([&] {
        auto rep = solve_fem_case(spec, spec.sizes[c], spec.nus[r]);
        const auto path =
            (std::filesystem::path(spec.output_dir) / history_file_name(spec.wind, spec.nus[r], spec.sizes[c]))
                .string();
        krylov::write_history_csv(path, rep);
        files.push_back(path);
        return rep;
      });
    }
  }
  t.metadata["files"] = files;
  return t;
}

TableResult run_experiment(const ExperimentSpec& spec) {
  if (spec.kind == "table1") return run_table1(spec);
  if (spec.kind == "fd") return run_table_fd(spec);
  if (spec.kind == "fem") return run_fem_experiment(spec);
  if (spec.kind == "history") return run_history(spec);
  throw ConfigError("unknown experiment kind: " + spec.kind);
}

}  // namespace normalkit::xprmt
