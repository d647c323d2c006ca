#include "experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "boson.hpp"
#include "classical.hpp"
#include "dynamics.hpp"
#include "figures.hpp"
#include "sector.hpp"
#include "state.hpp"
#include "thermal.hpp"

namespace collspin {

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k)
    out[k] = n > 1 ? a + (b - a) * k / (n - 1) : a;
  return out;
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

void write_table(const std::string& path, const DataTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  table.write_csv(out);
}

Superoperator build_from_model(const ModelConfig& model) {
  auto basis = DickeBasis::build(model.n_spins);
  return build_liouvillian(basis, model.hamiltonian, model.collective,
                           model.local_rates);
}

struct ObservablePair {
  BlockOperator a, b;
  std::string label;
};

ObservablePair observable_pair(const DickeBasis& basis,
                               const std::string& name) {
  using K = CollectiveKind;
  if (name == "jz") {
    auto jz = BlockOperator::collective(basis, K::Jz);
    return {jz, jz, "jz"};
  }
  if (name == "jz2") {
    auto jz = BlockOperator::collective(basis, K::Jz);
    return {jz, jz, "jz2"};
  }
  if (name == "jx2") {
    auto jx = BlockOperator::collective(basis, K::Jx);
    return {jx, jx, "jx2"};
  }
  if (name == "jpjm") {
    return {BlockOperator::collective(basis, K::Jplus),
            BlockOperator::collective(basis, K::Jminus), "jpjm"};
  }
  throw ConfigError("unknown observable '" + name + "'");
}

// ---------------------------------------------------------------------------
// spin kinds

DataTable spin_steady_table(const ModelConfig& model) {
  auto liouville = build_from_model(model);
  auto res = steady_state(liouville);
  if (!res.unique)
    throw std::runtime_error("steady state is not unique (kernel dimension " +
                             std::to_string(res.kernel_dimension) + ")");
  const auto& basis = liouville.basis();
  auto rho = GeneralizedDickeState::from_stacked(basis, res.state);
  using K = CollectiveKind;
  const auto jx = BlockOperator::collective(basis, K::Jx);
  const auto jy = BlockOperator::collective(basis, K::Jy);
  const auto jz = BlockOperator::collective(basis, K::Jz);
  const auto jp = BlockOperator::collective(basis, K::Jplus);
  const auto jm = BlockOperator::collective(basis, K::Jminus);
  const double mx = expectation(rho, jx).real();
  const double my = expectation(rho, jy).real();
  const double mz = expectation(rho, jz).real();
  DataTable table;
  table.name = "spin_steady";
  table.columns = {"n",      "jz",     "var_jz", "var_jx",
                   "var_jy", "jpjm",   "residual"};
  table.rows.push_back({double(model.n_spins), mz,
                        expectation(rho, jz, jz).real() - mz * mz,
                        expectation(rho, jx, jx).real() - mx * mx,
                        expectation(rho, jy, jy).real() - my * my,
                        expectation(rho, jp, jm).real(), res.residual});
  return table;
}

ExperimentArtifacts run_spin_evolve(const ExperimentConfig& cfg) {
  const EvolveConfig evolve_cfg = cfg.evolve.value_or(EvolveConfig{});
  auto liouville = build_from_model(*cfg.model);
  const auto& basis = liouville.basis();
  auto pair = observable_pair(basis, evolve_cfg.observable);
  ObservableList observables;
  if (evolve_cfg.observable == "jz") {
    observables.push_back({"jz", pair.a});
  } else {
    observables.push_back({pair.label, pair.a * pair.b});
  }
  auto t_grid = linspace(0.0, evolve_cfg.t_max, evolve_cfg.n_times);
  auto trajectory = evolve(liouville, GeneralizedDickeState::all_up(basis),
                           t_grid, observables);
  ExperimentArtifacts arts;
  arts.files.push_back(join(cfg.out_dir, "spin_evolve.csv"));
  trajectory.save_csv(arts.files.back());
  return arts;
}

ExperimentArtifacts run_spin_correlate(const ExperimentConfig& cfg) {
  const EvolveConfig evolve_cfg = cfg.evolve.value_or(EvolveConfig{});
  auto liouville = build_from_model(*cfg.model);
  auto res = steady_state(liouville);
  if (!res.unique) throw std::runtime_error("steady state is not unique");
  auto rho = GeneralizedDickeState::from_stacked(liouville.basis(), res.state);
  auto pair = observable_pair(liouville.basis(), evolve_cfg.observable);
  auto tau = linspace(0.0, evolve_cfg.t_max, evolve_cfg.n_times);
  auto series = two_time_correlation(liouville, pair.a, pair.b, rho, tau);
  ExperimentArtifacts arts;
  arts.files.push_back(join(cfg.out_dir, "spin_correlate.csv"));
  series.save_csv(arts.files.back());
  return arts;
}

// ---------------------------------------------------------------------------
// boson kinds

struct BosonSetup {
  BosonBasis basis;
  SparseC generator;
};

BosonSetup build_boson(const ModelConfig& model) {
  const BosonConfig& bc = *model.boson;
  BosonSetup setup;
  setup.basis = BosonBasis::type_ii(bc.n_max, bc.ell_max, model.n_spins);
  if (bc.model == "laser") {
    // pump rate from the local sigma+ channel, w_c = N * collective J- rate
    const double w = model.local_rates.gamma(0, 0).real();
    double w_c = 0.0;
    for (const auto& jump : model.collective)
      if (jump.kind == CollectiveKind::Jminus)
        w_c += model.n_spins * jump.rate;
    if (w <= 0.0 || w_c <= 0.0)
      throw ConfigError(
          "boson laser model needs a sigma+ pump rate and a collective J- "
          "rate");
    setup.generator =
        build_laser_boson_liouvillian(setup.basis, w, w_c, bc.order);
  } else {
    // H = -Delta Jz - (g/N) Jx^2 with a local sigma+ pump
    const double delta = -model.hamiltonian.hz;
    const double g = -model.hamiltonian.jx2.coeff;
    const double gamma = model.local_rates.gamma(0, 0).real();
    if (!model.hamiltonian.jx2.over_n || g <= 0.0 || delta <= 0.0 ||
        gamma <= 0.0)
      throw ConfigError(
          "boson tfim model needs hz < 0, jx2 < 0 with over_n, and a sigma+ "
          "pump rate");
    setup.generator =
        build_tfim_boson_liouvillian(setup.basis, delta, g, gamma);
  }
  return setup;
}

VectorC boson_diagonal_steady(const BosonSetup& setup) {
  const int d = setup.basis.dim();
  const auto keep = boson_vec_sector(setup.basis, 0, 0);
  double leak = 0.0;
  const SparseC restricted = restrict_matrix(setup.generator, keep, &leak);
  if (leak != 0.0)
    throw std::runtime_error("boson generator mixes population sectors");
  auto res = steady_state_stacked(restricted,
                                  VectorC::Ones(static_cast<int>(keep.size())));
  if (!res.unique) throw std::runtime_error("boson steady is not unique");
  return scatter_vector(res.state, keep, d * d);
}

ExperimentArtifacts run_boson_steady(const ExperimentConfig& cfg) {
  auto setup = build_boson(*cfg.model);
  const VectorC steady = boson_diagonal_steady(setup);
  const int d = setup.basis.dim();
  const double root_n = std::sqrt(double(cfg.model->n_spins));
  DataTable table;
  table.name = "boson_steady";
  table.columns = {"n", "alpha_sq", "population"};
  for (int n = 0; n <= setup.basis.n_max; ++n) {
    double p = 0.0;
    for (int k = 0; k <= setup.basis.long_max; ++k) {
      const int i = setup.basis.index(n, k);
      p += steady(i * d + i).real();
    }
    table.rows.push_back({double(n), n / root_n, p});
  }
  ExperimentArtifacts arts;
  arts.files.push_back(join(cfg.out_dir, "boson_steady.csv"));
  write_table(arts.files.back(), table);
  return arts;
}

ExperimentArtifacts run_boson_correlate(const ExperimentConfig& cfg) {
  const EvolveConfig evolve_cfg = cfg.evolve.value_or(EvolveConfig{});
  auto setup = build_boson(*cfg.model);
  const VectorC steady = boson_diagonal_steady(setup);
  const BosonBasis& basis = setup.basis;
  const int d = basis.dim();

  SparseC weight, seed_op;
  if (cfg.model->boson->model == "laser") {
    weight = boson_jplus(basis, cfg.model->boson->order);
    seed_op = SparseC(weight.adjoint());
  } else {
    weight = basis.x_op();
    seed_op = weight;
  }
  const VectorC seed = super_left(seed_op) * steady;
  const auto tau = linspace(0.0, evolve_cfg.t_max, evolve_cfg.n_times);

  // find the (dn, dk) coherence offsets of the seed; if unique, evolve in
  // that closed sector (the full truncated generator has spurious growing
  // edge modes there)
  int dn = 0, dk = 0;
  bool found = false, uniform = true;
  for (int i = 0; i < seed.size() && uniform; ++i) {
    if (std::abs(seed(i)) < 1e-14) continue;
    const int r = i / d, c = i % d;
    const int this_dn = r / basis.long_dim() - c / basis.long_dim();
    const int this_dk = r % basis.long_dim() - c % basis.long_dim();
    if (!found) {
      dn = this_dn;
      dk = this_dk;
      found = true;
    } else if (this_dn != dn || this_dk != dk) {
      uniform = false;
    }
  }
  if (!found) throw std::runtime_error("empty correlator seed");

  DataTable table;
  table.name = "boson_correlate";
  table.columns = {"tau", "re", "im"};
  auto sample = [&](double t, const VectorC& full) {
    const Complex c = boson_vec_expectation(basis, weight, full);
    table.rows.push_back({t, c.real(), c.imag()});
  };
  if (uniform) {
    const auto keep = boson_vec_sector(basis, dn, dk);
    double leak = 0.0;
    const SparseC restricted = restrict_matrix(setup.generator, keep, &leak);
    if (leak != 0.0) throw std::runtime_error("correlator sector leaks");
    VectorC state = restrict_vector(seed, keep);
    evolve_grid(restricted, state, tau, {}, [&](double t, const VectorC& x) {
      sample(t, scatter_vector(x, keep, d * d));
    });
  } else {
    VectorC state = seed;
    evolve_grid(setup.generator, state, tau, {}, sample);
  }
  ExperimentArtifacts arts;
  arts.files.push_back(join(cfg.out_dir, "boson_correlate.csv"));
  write_table(arts.files.back(), table);
  return arts;
}

// ---------------------------------------------------------------------------
// classical and thermal kinds

struct ClassicalSetup {
  ClassicalGenerator generator;
  ClassicalGrid grid;
  ClassicalField steady;
};

ClassicalSetup build_classical(const ClassicalConfig& cc) {
  ClassicalSetup setup;
  if (cc.model == "laser") {
    setup.generator = ClassicalGenerator::laser(cc.zeta);
    setup.grid = default_laser_grid();
  } else if (cc.model == "tfim") {
    setup.generator = ClassicalGenerator::tfim(cc.eta, cc.kappa);
    setup.grid = default_tfim_grid();
  } else {
    setup.generator =
        ClassicalGenerator::appendix_d(cc.delta_star, cc.gamma, cc.g);
    setup.grid = default_appendix_d_grid();
  }
  if (cc.half_width > 0.0 && cc.cells > 0) {
    setup.grid = cc.model == "appendix_d"
                     ? ClassicalGrid::line(cc.half_width, cc.cells)
                     : ClassicalGrid::square(cc.half_width, cc.cells);
  }
  if (cc.model == "laser") {
    setup.steady = laser_steady_density(cc.zeta, setup.grid);
  } else if (cc.model == "tfim") {
    setup.steady = tfim_steady_density(cc.eta, cc.kappa, setup.grid);
  } else {
    setup.steady = appendix_d_steady_density(setup.generator.c3, setup.grid);
  }
  return setup;
}

ExperimentArtifacts run_classical_pde(const ExperimentConfig& cfg) {
  const ClassicalConfig& cc = *cfg.classical;
  auto setup = build_classical(cc);
  const auto t_grid = linspace(0.0, cc.t_max, cc.n_times);
  auto fields = evolve_classical(setup.generator, setup.steady, t_grid);
  const ClassicalField& last = fields.back();

  DataTable density;
  density.name = "classical_density";
  density.columns = {"x", "y", "density"};
  for (int i = 0; i < last.grid.nx; ++i)
    for (int j = 0; j < last.grid.ny; ++j)
      density.rows.push_back(
          {last.grid.x(i), last.grid.y(j), last.density(i, j)});

  DataTable marginals;
  marginals.name = "classical_marginals";
  marginals.columns = {"axis", "x_value", "marginal"};
  for (const auto& [x, p] : marginal_x(last)) marginals.rows.push_back({0.0, x, p});
  if (!last.grid.one_dimensional())
    for (const auto& [y, p] : marginal_y(last))
      marginals.rows.push_back({1.0, y, p});

  ExperimentArtifacts arts;
  arts.files.push_back(join(cfg.out_dir, "classical_density.csv"));
  write_table(arts.files.back(), density);
  arts.files.push_back(join(cfg.out_dir, "classical_marginals.csv"));
  write_table(arts.files.back(), marginals);
  return arts;
}

ExperimentArtifacts run_thermal_sweep(const ExperimentConfig& cfg) {
  const ThermalConfig& tc = *cfg.thermal;
  ThermalModel model;
  model.omega = tc.omega;
  model.omega0 = tc.omega0;
  model.lambda = tc.lambda;
  const auto betas = linspace(tc.beta_min, tc.beta_max, tc.n_beta);
  const auto records =
      lmg_partition_observables(tc.n_spins, model.lmg_g(), betas);
  DataTable table;
  table.name = "thermal_sweep";
  table.columns = {"beta", "log_z", "energy_per_n", "cv_per_n"};
  for (const auto& r : records)
    table.rows.push_back({r.beta, r.log_z, r.energy_per_n, r.cv_per_n});
  ExperimentArtifacts arts;
  arts.files.push_back(join(cfg.out_dir, "thermal_sweep.csv"));
  write_table(arts.files.back(), table);
  return arts;
}

ExperimentArtifacts run_figure_experiment(const ExperimentConfig& cfg,
                                          const std::vector<int>& n_values,
                                          std::string* extra_metadata) {
  auto fig = run_figure(cfg.figure, n_values);
  ExperimentArtifacts arts;
  for (const auto& table : fig.tables) {
    arts.files.push_back(join(cfg.out_dir, cfg.figure + "_" + table.name +
                                               ".csv"));
    write_table(arts.files.back(), table);
  }
  DataTable summary;
  summary.name = "summary";
  summary.columns = {"value", "target", "tolerance", "pass"};
  std::ostringstream text;
  text << "figure," << cfg.figure << "\n";
  for (const auto& check : fig.checks)
    text << check.name << "," << check.value << "," << check.target << ","
         << check.tolerance << "," << (check.pass ? "PASS" : "FAIL") << "\n";
  text << "overall," << (fig.pass() ? "PASS" : "FAIL") << "\n";
  arts.files.push_back(join(cfg.out_dir, cfg.figure + "_summary.csv"));
  write_text(arts.files.back(), text.str());
  arts.tolerance_pass = fig.pass();

  std::ostringstream meta;
  meta << "figure_seconds = " << fig.seconds << "\n";
  for (const auto& note : fig.notes) meta << "note = " << note << "\n";
  *extra_metadata = meta.str();
  return arts;
}

}  // namespace

const char* collspin_version() { return "0.1.0"; }

ExperimentArtifacts run_experiment(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  std::filesystem::create_directories(config.out_dir);

  ExperimentArtifacts arts;
  std::string extra_metadata;
  switch (config.kind) {
    case ExperimentKind::SpinSteady: {
      arts.files.push_back(join(config.out_dir, "spin_steady.csv"));
      write_table(arts.files.back(), spin_steady_table(*config.model));
      break;
    }
    case ExperimentKind::SpinEvolve:
      arts = run_spin_evolve(config);
      break;
    case ExperimentKind::SpinCorrelate:
      arts = run_spin_correlate(config);
      break;
    case ExperimentKind::BosonSteady:
      arts = run_boson_steady(config);
      break;
    case ExperimentKind::BosonCorrelate:
      arts = run_boson_correlate(config);
      break;
    case ExperimentKind::ClassicalPde:
      arts = run_classical_pde(config);
      break;
    case ExperimentKind::ThermalSweep:
      arts = run_thermal_sweep(config);
      break;
    case ExperimentKind::Figure:
      arts = run_figure_experiment(config, &extra_metadata);
      break;
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::ostringstream meta;
  meta << "# resolved configuration\n"
       << emit_experiment_config(config) << "\n[run]\n"
       << "version = " << collspin_version() << "\n"
       << "eigen = " << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION
       << "." << EIGEN_MINOR_VERSION << "\n"
       << "seconds = " << seconds << "\n"
       << extra_metadata;
  const std::string meta_path = join(config.out_dir, "metadata.txt");
  write_text(meta_path, meta.str());
  arts.files.push_back(meta_path);
  return arts;
}

}  // namespace collspin
