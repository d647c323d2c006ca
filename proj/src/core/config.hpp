#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "boson.hpp"
#include "liouville.hpp"

namespace collspin {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// [boson] section: transverse / longitudinal cutoffs and which mapped
// generator to build.  ell_max may also be spelled m_max in the file.
struct BosonConfig {
  int n_max = 0;
  int ell_max = 0;
  ExpansionOrder order = ExpansionOrder::NLO;
  std::string model;  // "laser" or "tfim"
};

// Spin-model sections: [basis], [hamiltonian], [collective], [local_rates]
// plus the optional [boson] block.
struct ModelConfig {
  int n_spins = 0;
  HamiltonianSpec hamiltonian;
  CollectiveJumpSpec collective;
  LocalRateMatrix local_rates;
  std::optional<BosonConfig> boson;
};

enum class ExperimentKind {
  SpinSteady,
  SpinEvolve,
  SpinCorrelate,
  BosonSteady,
  BosonCorrelate,
  ClassicalPde,
  ThermalSweep,
  Figure,
};

const char* to_string(ExperimentKind kind);

// [evolve] section, shared by the spin evolution / correlation kinds.
struct EvolveConfig {
  double t_max = 10.0;
  int n_times = 101;
  std::string observable = "jz";  // jz, jz2, jpjm, jx2
};

// [classical] section for the phase-space solvers.
struct ClassicalConfig {
  std::string model;  // laser, tfim, appendix_d
  double zeta = 0.0;
  double eta = 0.0;
  double kappa = 0.0;
  double delta_star = 0.0;
  double gamma = 0.0;
  double g = 0.0;
  double half_width = 0.0;  // 0 -> per-model default grid
  int cells = 0;
  double t_max = 20.0;
  int n_times = 11;
};

// [thermal] section for the Dicke/LMG thermodynamic sweep.
struct ThermalConfig {
  int n_spins = 100;
  double omega = 1.0;
  double omega0 = 1.0;
  double lambda = 1.0;
  double beta_min = 0.1;
  double beta_max = 3.0;
  int n_beta = 50;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::SpinSteady;
  std::string figure;  // set when kind == Figure
  std::string out_dir = ".";
  unsigned long seed = 0;
  std::optional<ModelConfig> model;
  std::optional<EvolveConfig> evolve;
  std::optional<ClassicalConfig> classical;
  std::optional<ThermalConfig> thermal;
};

// Parsers throw ConfigError naming the offending section or key.  The
// emitters produce a canonical layout; emit(parse(emit(c))) == emit(c).
ModelConfig parse_model_config(const std::string& text);
std::string emit_model_config(const ModelConfig& config);

ExperimentConfig parse_experiment_config(const std::string& text);
std::string emit_experiment_config(const ExperimentConfig& config);

ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace collspin
