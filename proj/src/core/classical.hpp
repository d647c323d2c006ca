#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace collspin {

// Uniform cell-centered grid, 2D or 1D (ny == 1).
struct ClassicalGrid {
  int nx = 0;
  int ny = 1;
  double x_min = 0.0, x_max = 0.0;
  double y_min = 0.0, y_max = 0.0;

  static ClassicalGrid square(double half_width, int n);
  static ClassicalGrid line(double half_width, int n);

  double dx() const { return (x_max - x_min) / nx; }
  double dy() const { return ny > 1 ? (y_max - y_min) / ny : 1.0; }
  double x(int i) const { return x_min + (i + 0.5) * dx(); }
  double y(int j) const { return ny > 1 ? y_min + (j + 0.5) * dy() : 0.0; }
  double cell_volume() const { return ny > 1 ? dx() * dy() : dx(); }
  bool one_dimensional() const { return ny == 1; }
};

// Probability density (or a signed correlation seed) sampled on a grid.
struct ClassicalField {
  ClassicalGrid grid;
  Eigen::ArrayXXd density;  // nx rows, ny cols

  double mass() const;
  void normalize();
  double max_abs() const;
};

enum class ClassicalModel { Laser, Tfim, AppendixD };

// Drift-diffusion generators of the three critical-region equations.
// Laser: scaled time w0 t / sqrt(N), coordinates (Re alpha, Im alpha).
// Tfim: scaled time Delta t / N^{1/4}, coordinates (z, p); kappa = gamma_red/Delta.
// AppendixD: scaled time g t / sqrt(N), coordinate y; c3 = (Delta*/gamma)^2.
struct ClassicalGenerator {
  ClassicalModel model = ClassicalModel::Laser;
  double zeta = 0.0;
  double eta = 0.0;
  double kappa = 0.0;
  double c3 = 0.0;

  static ClassicalGenerator laser(double zeta);
  static ClassicalGenerator tfim(double eta, double kappa);
  static ClassicalGenerator appendix_d(double delta_star, double gamma, double g);
};

ClassicalField laser_steady_density(double zeta, const ClassicalGrid& grid);
ClassicalField tfim_steady_density(double eta, double kappa,
                                   const ClassicalGrid& grid);
ClassicalField appendix_d_steady_density(double c3, const ClassicalGrid& grid);

ClassicalGrid default_laser_grid();
ClassicalGrid default_tfim_grid();
ClassicalGrid default_appendix_d_grid();

// One application of the discrete generator (finite-volume fluxes, zero-flux
// boundaries). Used for stationarity residuals and as the RHS of evolution.
Eigen::ArrayXXd apply_generator(const ClassicalGenerator& gen,
                                const ClassicalField& field);

struct EvolveClassicalOptions {
  double cfl = 0.4;
  bool check_positivity = true;
};

// Evolves through the strictly increasing times with automatic CFL
// sub-stepping (Heun steps). Returns the field at each requested time,
// including t_grid[0] (the initial field, unevolved).
std::vector<ClassicalField> evolve_classical(
    const ClassicalGenerator& gen, const ClassicalField& initial,
    const std::vector<double>& t_grid, const EvolveClassicalOptions& opts = {});

enum class ClassicalCorrelationMode { LaserC, TfimC, TfimChi };

struct ClassicalCorrelationResult {
  std::vector<double> tau;
  std::vector<double> value;  // N-independent scaled series
  double n_power = 0.0;       // reapply as N^n_power * value
};

ClassicalCorrelationResult classical_correlation(
    const ClassicalGenerator& gen, const ClassicalField& steady,
    ClassicalCorrelationMode mode, const std::vector<double>& tau_grid,
    const EvolveClassicalOptions& opts = {});

// <w(x, y)> under the (normalized) field
double field_average(const ClassicalField& field,
                     const std::function<double(double, double)>& weight);

// Marginal over the second axis: returns (axis value, probability density)
std::vector<std::pair<double, double>> marginal_x(const ClassicalField& field);
std::vector<std::pair<double, double>> marginal_y(const ClassicalField& field);

}  // namespace collspin
