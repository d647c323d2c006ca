#pragma once

#include <optional>
#include <string>
#include <vector>

namespace collspin {

// Dicke model H = omega c^dag c - omega0 Jz + (2 lambda / sqrt(N)) (c + c^dag) Jx
struct ThermalModel {
  double omega = 1.0;
  double omega0 = 1.0;
  double lambda = 1.0;

  double lmg_g() const { return 4.0 * lambda * lambda / (omega * omega0); }
};

enum class ThermalPhase { Disordered, Superradiant };

struct MeanFieldThermalSolution {
  ThermalPhase phase = ThermalPhase::Disordered;
  double j = 0.0;      // normalized spin length
  double theta = 0.0;  // tilt angle (the +theta representative)
  double c = 0.0;      // scaled cavity amplitude (real)
  double free_energy_per_n = 0.0;
};

// Solves tanh(beta_c omega0 / 2) = omega omega0 / (4 lambda^2).
// Throws std::domain_error when no finite-temperature transition exists.
double critical_beta(const ThermalModel& model);

// Disordered branch always present; superradiant branch (both signs of theta
// collapse onto the +theta representative) appended when it exists.
std::vector<MeanFieldThermalSolution> mean_field_solve(
    const ThermalModel& model, double beta);

// entropy-type function f and its second derivative
double spin_length_entropy(double j);
double spin_length_entropy_dd(double j);

struct LmgThermalRecord {
  double beta = 0.0;
  double log_z = 0.0;
  double energy_per_n = 0.0;
  double cv_per_n = 0.0;
};

// Brute-force partition sums for H = -Jz - (g/N) Jx^2 over the full 2^N
// space, with spin-length degeneracies d_J; eigenvalues per (J, parity)
// block via tridiagonal solves.
std::vector<LmgThermalRecord> lmg_partition_observables(
    int n_spins, double g, const std::vector<double>& betas);

double log_degeneracy(int n_spins, double two_j);

// Analytic near-critical specific heat per spin as a function of
// xi = sqrt(N) (beta - beta_c) / beta_c; depends only on beta_c * omega0.
double analytic_cv(double xi, double beta_c_omega0);

// moments of the quartic weight exp(-x^4 + z x^2)
double quartic_log_partition(double z);       // g(z)
double quartic_moment_x2(double z);           // g'(z)
double quartic_moment_var_x2(double z);       // g''(z)

struct ThermalSpectrum {
  std::vector<double> frequencies;  // normal mode energies (units of omega0)
  double f_dd = 0.0;                // longitudinal stiffness f''(j)
  bool stable = true;
  std::string unstable_direction;
  // near-critical pieces
  double gapped_mode_coefficient = 0.0;  // beta_c sqrt(omega0^2 + omega^2)
  double soft_mass_coefficient = 0.0;    // p_s^2 coefficient in K_eff^tr
};

ThermalSpectrum effective_thermal_spectrum(const ThermalModel& model,
                                           double beta, ThermalPhase phase);

}  // namespace collspin
