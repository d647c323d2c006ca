#include "classical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace collspin {

namespace {

// Fromm (centered) slope. A monotonized limiter would clip at density
// ridges and drop the advection to first order there; the densities this
// solver sees are smooth and grid-resolved, so the unlimited slope is the
// right trade and the positivity guard in the stepper catches any abuse.
double cell_slope(double left, double mid, double right) {
  (void)mid;
  return 0.5 * (right - left);
}

struct Stencil {
  // face-centered drift velocities and per-axis diffusion constants
  Eigen::ArrayXXd ux;  // (nx+1) x ny
  Eigen::ArrayXXd uy;  // nx x (ny+1)
  double dx_diff = 0.0;
  double dy_diff = 0.0;
};

void drift_velocity(const ClassicalGenerator& gen, double x, double y,
                    double& vx, double& vy) {
  switch (gen.model) {
    case ClassicalModel::Laser: {
      const double c = -(0.5 * gen.zeta + x * x + y * y);
      vx = c * x;
      vy = c * y;
      return;
    }
    case ClassicalModel::Tfim:
      vx = y - 0.5 * gen.kappa * x;
      vy = -(gen.eta * x + x * x * x) - 0.5 * gen.kappa * y;
      return;
    case ClassicalModel::AppendixD:
      vx = -gen.c3 * x * x * x;
      vy = 0.0;
      return;
  }
  vx = vy = 0.0;
}

Stencil build_stencil(const ClassicalGenerator& gen, const ClassicalGrid& g) {
  Stencil st;
  st.ux.resize(g.nx + 1, g.ny);
  double vx, vy;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      drift_velocity(gen, g.x_min + i * g.dx(), g.y(j), vx, vy);
      st.ux(i, j) = vx;
    }
  }
  if (g.ny > 1) {
    st.uy.resize(g.nx, g.ny + 1);
    for (int j = 0; j <= g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        drift_velocity(gen, g.x(i), g.y_min + j * g.dy(), vx, vy);
        st.uy(i, j) = vy;
      }
    }
  }
  switch (gen.model) {
    case ClassicalModel::Laser:
      st.dx_diff = 0.25;
      st.dy_diff = 0.25;
      break;
    case ClassicalModel::Tfim:
      st.dy_diff = 0.25 * gen.kappa;
      break;
    case ClassicalModel::AppendixD:
      st.dx_diff = 0.25;
      break;
  }
  return st;
}

// Zero-flux finite volume RHS: limited upwind advection, centered diffusion.
Eigen::ArrayXXd rhs(const Stencil& st, const ClassicalGrid& g,
                    const Eigen::ArrayXXd& rho) {
  Eigen::ArrayXXd out = Eigen::ArrayXXd::Zero(g.nx, g.ny);
  const double dx = g.dx();
  const double dy = g.dy();
  for (int j = 0; j < g.ny; ++j) {
    double flux_prev = 0.0;
    for (int i = 1; i <= g.nx; ++i) {
      double flux = 0.0;
      if (i < g.nx) {
        const double u = st.ux(i, j);
        if (u >= 0.0) {
          const int c = i - 1;
          const double sl = (c > 0 && c < g.nx - 1)
                                ? cell_slope(rho(c - 1, j), rho(c, j),
                                           rho(c + 1, j))
                                : 0.0;
          flux = u * (rho(c, j) + 0.5 * sl);
        } else {
          const int c = i;
          const double sl = (c > 0 && c < g.nx - 1)
                                ? cell_slope(rho(c - 1, j), rho(c, j),
                                           rho(c + 1, j))
                                : 0.0;
          flux = u * (rho(c, j) - 0.5 * sl);
        }
        flux -= st.dx_diff * (rho(i, j) - rho(i - 1, j)) / dx;
      }
      out(i - 1, j) -= (flux - flux_prev) / dx;
      flux_prev = flux;
    }
  }
  if (g.ny > 1) {
    for (int i = 0; i < g.nx; ++i) {
      double flux_prev = 0.0;
      for (int j = 1; j <= g.ny; ++j) {
        double flux = 0.0;
        if (j < g.ny) {
          const double u = st.uy(i, j);
          if (u >= 0.0) {
            const int c = j - 1;
            const double sl = (c > 0 && c < g.ny - 1)
                                  ? cell_slope(rho(i, c - 1), rho(i, c),
                                             rho(i, c + 1))
                                  : 0.0;
            flux = u * (rho(i, c) + 0.5 * sl);
          } else {
            const int c = j;
            const double sl = (c > 0 && c < g.ny - 1)
                                  ? cell_slope(rho(i, c - 1), rho(i, c),
                                             rho(i, c + 1))
                                  : 0.0;
            flux = u * (rho(i, c) - 0.5 * sl);
          }
          flux -= st.dy_diff * (rho(i, j) - rho(i, j - 1)) / dy;
        }
        out(i, j - 1) -= (flux - flux_prev) / dy;
        flux_prev = flux;
      }
    }
  }
  return out;
}

double stable_step(const Stencil& st, const ClassicalGrid& g, double cfl) {
  double rate = 2.0 * st.dx_diff / (g.dx() * g.dx()) +
                st.ux.abs().maxCoeff() / g.dx();
  if (g.ny > 1) {
    rate += 2.0 * st.dy_diff / (g.dy() * g.dy()) +
            st.uy.abs().maxCoeff() / g.dy();
  }
  if (rate <= 0.0) throw std::invalid_argument("degenerate generator");
  return cfl / rate;
}

void heun_advance(const Stencil& st, const ClassicalGrid& g,
                  Eigen::ArrayXXd& rho, double span, double dt_max,
                  bool check_positivity) {
  const int steps = std::max(1, int(std::ceil(span / dt_max)));
  const double dt = span / steps;
  for (int s = 0; s < steps; ++s) {
    const Eigen::ArrayXXd k1 = rhs(st, g, rho);
    const Eigen::ArrayXXd mid = rho + dt * k1;
    const Eigen::ArrayXXd k2 = rhs(st, g, mid);
    rho += 0.5 * dt * (k1 + k2);
  }
  if (check_positivity) {
    // Fromm reconstruction admits a little dispersive undershoot; anything
    // past this floor means the grid is too coarse for the data.
    const double floor_tol = -1e-5 * std::max(1.0, rho.maxCoeff());
    if (rho.minCoeff() < floor_tol) {
      throw std::runtime_error("density undershoot " +
                               std::to_string(rho.minCoeff()) +
                               "; refine the phase-space grid");
    }
  }
}

ClassicalField analytic_density(const ClassicalGrid& grid,
                                const std::function<double(double, double)>& f) {
  ClassicalField field;
  field.grid = grid;
  field.density.resize(grid.nx, grid.ny);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      field.density(i, j) = f(grid.x(i), grid.y(j));
    }
  }
  field.normalize();
  return field;
}

}  // namespace

ClassicalGrid ClassicalGrid::square(double half_width, int n) {
  ClassicalGrid g;
  g.nx = g.ny = n;
  g.x_min = g.y_min = -half_width;
  g.x_max = g.y_max = half_width;
  return g;
}

ClassicalGrid ClassicalGrid::line(double half_width, int n) {
  ClassicalGrid g;
  g.nx = n;
  g.ny = 1;
  g.x_min = -half_width;
  g.x_max = half_width;
  return g;
}

double ClassicalField::mass() const {
  return density.sum() * grid.cell_volume();
}

void ClassicalField::normalize() {
  const double m = mass();
  if (m <= 0.0) throw std::runtime_error("cannot normalize nonpositive field");
  density /= m;
}

double ClassicalField::max_abs() const { return density.abs().maxCoeff(); }

ClassicalGenerator ClassicalGenerator::laser(double zeta) {
  ClassicalGenerator g;
  g.model = ClassicalModel::Laser;
  g.zeta = zeta;
  return g;
}

ClassicalGenerator ClassicalGenerator::tfim(double eta, double kappa) {
  ClassicalGenerator g;
  g.model = ClassicalModel::Tfim;
  g.eta = eta;
  g.kappa = kappa;
  return g;
}

ClassicalGenerator ClassicalGenerator::appendix_d(double delta_star,
                                                  double gamma, double g_) {
  if (gamma <= 0.0 || g_ <= 0.0) {
    throw std::invalid_argument("appendix_d: rates must be positive");
  }
  ClassicalGenerator g;
  g.model = ClassicalModel::AppendixD;
  g.c3 = (delta_star / gamma) * (delta_star / gamma);
  return g;
}

ClassicalGrid default_laser_grid() { return ClassicalGrid::square(3.0, 201); }
ClassicalGrid default_tfim_grid() { return ClassicalGrid::square(3.5, 257); }
ClassicalGrid default_appendix_d_grid() {
  return ClassicalGrid::line(3.0, 1025);
}

ClassicalField laser_steady_density(double zeta, const ClassicalGrid& grid) {
  return analytic_density(grid, [zeta](double x, double y) {
    const double r2 = x * x + y * y;
    return std::exp(-r2 * r2 - zeta * r2);
  });
}

ClassicalField tfim_steady_density(double eta, double kappa,
                                   const ClassicalGrid& grid) {
  return analytic_density(grid, [eta, kappa](double z, double p) {
    const double dp = p - 0.5 * kappa * z;
    const double z2 = z * z;
    return std::exp(-2.0 * dp * dp -
                    2.0 * (eta + 0.25 * kappa * kappa) * z2 - z2 * z2);
  });
}

ClassicalField appendix_d_steady_density(double c3, const ClassicalGrid& grid) {
  return analytic_density(grid, [c3](double y, double) {
    return std::exp(-c3 * y * y * y * y);
  });
}

Eigen::ArrayXXd apply_generator(const ClassicalGenerator& gen,
                                const ClassicalField& field) {
  const Stencil st = build_stencil(gen, field.grid);
  return rhs(st, field.grid, field.density);
}

std::vector<ClassicalField> evolve_classical(
    const ClassicalGenerator& gen, const ClassicalField& initial,
    const std::vector<double>& t_grid, const EvolveClassicalOptions& opts) {
  if (t_grid.empty()) throw std::invalid_argument("empty time grid");
  for (size_t k = 1; k < t_grid.size(); ++k) {
    if (t_grid[k] <= t_grid[k - 1]) {
      throw std::invalid_argument("time grid must increase");
    }
  }
  const Stencil st = build_stencil(gen, initial.grid);
  const double dt_max = stable_step(st, initial.grid, opts.cfl);
  std::vector<ClassicalField> out;
  out.reserve(t_grid.size());
  out.push_back(initial);
  ClassicalField cur = initial;
  for (size_t k = 1; k < t_grid.size(); ++k) {
    heun_advance(st, cur.grid, cur.density, t_grid[k] - t_grid[k - 1], dt_max,
                 opts.check_positivity);
    out.push_back(cur);
  }
  return out;
}

ClassicalCorrelationResult classical_correlation(
    const ClassicalGenerator& gen, const ClassicalField& steady,
    ClassicalCorrelationMode mode, const std::vector<double>& tau_grid,
    const EvolveClassicalOptions& opts_in) {
  const Eigen::ArrayXXd resid = apply_generator(gen, steady);
  if (resid.abs().maxCoeff() > 1e-5 * std::max(1.0, steady.max_abs())) {
    throw std::invalid_argument("correlation base is not stationary");
  }
  EvolveClassicalOptions opts = opts_in;
  opts.check_positivity = false;  // seeds are signed

  const ClassicalGrid& g = steady.grid;
  ClassicalCorrelationResult res;
  res.tau = tau_grid;

  auto weigh_x = [&g](const Eigen::ArrayXXd& f) {
    double acc = 0.0;
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) acc += g.x(i) * f(i, j);
    }
    return acc * g.cell_volume();
  };
  auto weigh_y = [&g](const Eigen::ArrayXXd& f) {
    double acc = 0.0;
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) acc += g.y(j) * f(i, j);
    }
    return acc * g.cell_volume();
  };

  std::vector<ClassicalField> seeds;
  switch (mode) {
    case ClassicalCorrelationMode::LaserC: {
      // complex seed conj(alpha) rho: evolve real and imaginary parts
      ClassicalField re = steady, im = steady;
      for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
          re.density(i, j) *= g.x(i);
          im.density(i, j) *= -g.y(j);
        }
      }
      seeds = {re, im};
      res.n_power = 1.5;
      break;
    }
    case ClassicalCorrelationMode::TfimC: {
      ClassicalField zf = steady;
      for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) zf.density(i, j) *= g.x(i);
      }
      seeds = {zf};
      res.n_power = 0.5;
      break;
    }
    case ClassicalCorrelationMode::TfimChi: {
      // d/dp of the base density, centered in the interior
      ClassicalField dp = steady;
      dp.density.setZero();
      for (int j = 1; j < g.ny - 1; ++j) {
        for (int i = 0; i < g.nx; ++i) {
          dp.density(i, j) = (steady.density(i, j + 1) -
                              steady.density(i, j - 1)) /
                             (2.0 * g.dy());
        }
      }
      seeds = {dp};
      res.n_power = 0.25;
      break;
    }
  }

  std::vector<std::vector<ClassicalField>> runs;
  for (const auto& seed : seeds) {
    runs.push_back(evolve_classical(gen, seed, tau_grid, opts));
  }
  for (size_t k = 0; k < tau_grid.size(); ++k) {
    double v = 0.0;
    switch (mode) {
      case ClassicalCorrelationMode::LaserC:
        // Re of int alpha f dV with f = f_re + i f_im
        v = weigh_x(runs[0][k].density) - weigh_y(runs[1][k].density);
        break;
      case ClassicalCorrelationMode::TfimC:
        v = weigh_x(runs[0][k].density);
        break;
      case ClassicalCorrelationMode::TfimChi:
        v = 0.5 * weigh_x(runs[0][k].density);
        break;
    }
    res.value.push_back(v);
  }
  return res;
}

double field_average(const ClassicalField& field,
                     const std::function<double(double, double)>& weight) {
  const ClassicalGrid& g = field.grid;
  double acc = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      acc += weight(g.x(i), g.y(j)) * field.density(i, j);
    }
  }
  return acc * g.cell_volume() / field.mass();
}

std::vector<std::pair<double, double>> marginal_x(const ClassicalField& field) {
  const ClassicalGrid& g = field.grid;
  std::vector<std::pair<double, double>> out;
  out.reserve(g.nx);
  for (int i = 0; i < g.nx; ++i) {
    out.emplace_back(g.x(i), field.density.row(i).sum() * g.dy());
  }
  return out;
}

std::vector<std::pair<double, double>> marginal_y(const ClassicalField& field) {
  const ClassicalGrid& g = field.grid;
  std::vector<std::pair<double, double>> out;
  out.reserve(g.ny);
  for (int j = 0; j < g.ny; ++j) {
    out.emplace_back(g.y(j), field.density.col(j).sum() * g.dx());
  }
  return out;
}

}  // namespace collspin
