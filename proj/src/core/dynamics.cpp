#include "dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace collspin {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187,
                 kA53 = 64448.0 / 6561, kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33,
                 kA63 = 46732.0 / 5247, kA64 = 49.0 / 176,
                 kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
// b - b* difference for the embedded 4th-order error estimate
constexpr double kE1 = 35.0 / 384 - 5179.0 / 57600;
constexpr double kE3 = 500.0 / 1113 - 7571.0 / 16695;
constexpr double kE4 = 125.0 / 192 - 393.0 / 640;
constexpr double kE5 = -2187.0 / 6784 + 92097.0 / 339200;
constexpr double kE6 = 11.0 / 84 - 187.0 / 2100;
constexpr double kE7 = -1.0 / 40;

double sparse_inf_norm(const SparseC& m) {
  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(m.rows());
  for (int o = 0; o < m.outerSize(); ++o) {
    for (SparseC::InnerIterator it(m, o); it; ++it) {
      row_sums(it.row()) += std::abs(it.value());
    }
  }
  return m.nonZeros() ? row_sums.maxCoeff() : 0.0;
}

}  // namespace

void evolve_grid(const SparseC& liouvillian, VectorC& state,
                 const std::vector<double>& t_grid,
                 const IntegratorControls& controls,
                 const std::function<void(double, const VectorC&)>& on_sample,
                 IntegratorStats* stats) {
  if (t_grid.empty()) return;
  for (size_t i = 1; i < t_grid.size(); ++i) {
    if (t_grid[i] <= t_grid[i - 1]) {
      throw std::invalid_argument("evolve_grid: time grid not increasing");
    }
  }
  IntegratorStats local_stats;
  double t = t_grid.front();
  on_sample(t, state);

  const double t_end = t_grid.back();
  if (t_end == t) {
    if (stats) *stats = local_stats;
    return;
  }
  size_t next_sample = 1;
  const double scale = std::max(1.0, std::abs(t_end));

  VectorC k1 = liouvillian * state;
  double dt = std::min({0.01 * (t_end - t), controls.max_step,
                        t_grid[next_sample] - t});

  VectorC k2, k3, k4, k5, k6, k7, y_new, err;
  while (t < t_end) {
    bool clamped = false;
    double step = std::min(dt, controls.max_step);
    if (t + step >= t_grid[next_sample] - 1e-14 * scale) {
      step = t_grid[next_sample] - t;
      clamped = true;
    }
    if (step < 1e-14 * scale) {
      throw std::runtime_error(
          "evolve_grid: step underflow at t = " + std::to_string(t));
    }
    k2 = liouvillian * (state + step * (kA21 * k1));
    k3 = liouvillian * (state + step * (kA31 * k1 + kA32 * k2));
    k4 = liouvillian * (state + step * (kA41 * k1 + kA42 * k2 + kA43 * k3));
    k5 = liouvillian *
         (state + step * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4));
    k6 = liouvillian * (state + step * (kA61 * k1 + kA62 * k2 + kA63 * k3 +
                                        kA64 * k4 + kA65 * k5));
    y_new = state +
            step * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
    k7 = liouvillian * y_new;
    err = step * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 +
                  kE7 * k7);

    double err_norm = 0.0;
    for (int i = 0; i < state.size(); ++i) {
      const double tol = controls.abs_tol +
                         controls.rel_tol * std::max(std::abs(state(i)),
                                                     std::abs(y_new(i)));
      err_norm = std::max(err_norm, std::abs(err(i)) / tol);
    }

    if (err_norm <= 1.0) {
      t += step;
      state = y_new;
      k1 = k7;  // first-same-as-last
      ++local_stats.accepted;
      local_stats.min_step = std::min(local_stats.min_step, step);
      if (clamped) {
        on_sample(t, state);
        if (++next_sample >= t_grid.size()) break;
      }
    } else {
      ++local_stats.rejected;
    }
    const double factor = err_norm > 0.0
                              ? 0.9 * std::pow(err_norm, -0.2)
                              : 5.0;
    dt = step * std::clamp(factor, 0.2, 5.0);
  }
  if (stats) *stats = local_stats;
}

void Trajectory::write_csv(std::ostream& os) const {
  os << "t,observable,re,im\n";
  os.precision(15);
  for (size_t k = 0; k < times.size(); ++k) {
    for (size_t j = 0; j < labels.size(); ++j) {
      os << times[k] << "," << labels[j] << "," << samples[k][j].real() << ","
         << samples[k][j].imag() << "\n";
    }
  }
}

void Trajectory::save_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("Trajectory: cannot open " + path);
  write_csv(os);
}

Trajectory evolve(const Superoperator& liouvillian,
                  const GeneralizedDickeState& rho0,
                  const std::vector<double>& t_grid,
                  const ObservableList& observables,
                  const IntegratorControls& controls) {
  Trajectory out;
  for (const auto& [label, op] : observables) out.labels.push_back(label);
  VectorC state = rho0.to_stacked();
  const DickeBasis& basis = liouvillian.basis();
  evolve_grid(
      liouvillian.matrix(), state, t_grid, controls,
      [&](double t, const VectorC& x) {
        out.times.push_back(t);
        std::vector<Complex> row;
        row.reserve(observables.size());
        for (const auto& [label, op] : observables) {
          row.push_back(expectation_stacked(basis, op, x));
        }
        out.samples.push_back(std::move(row));
      },
      &out.stats);
  return out;
}

SteadyResult steady_state_stacked(const SparseC& liouvillian,
                                  const VectorC& trace_functional,
                                  const SteadyOptions& options) {
  const int dim = static_cast<int>(liouvillian.rows());
  const double norm_l = sparse_inf_norm(liouvillian);
  if (norm_l == 0.0) {
    throw std::invalid_argument("steady_state: zero generator");
  }

  // kernel probe: block inverse iteration on L - sigma I
  const double sigma = 1e-8 * norm_l;
  SparseC shifted = liouvillian;
  {
    SparseC eye(dim, dim);
    eye.setIdentity();
    shifted -= sigma * eye;
  }
  Eigen::SparseLU<SparseC> shifted_lu;
  shifted_lu.compute(shifted);
  if (shifted_lu.info() != Eigen::Success) {
    throw std::runtime_error("steady_state: shifted factorization failed");
  }
  const int probe = std::min(options.kernel_probe, dim);
  MatrixC block(dim, probe);
  std::mt19937 rng(31337);
  std::normal_distribution<double> gauss;
  for (int c = 0; c < probe; ++c)
    for (int r = 0; r < dim; ++r) block(r, c) = Complex(gauss(rng), gauss(rng));
  for (int it = 0; it < 6; ++it) {
    for (int c = 0; c < probe; ++c) {
      block.col(c) = shifted_lu.solve(block.col(c).eval());
    }
    Eigen::HouseholderQR<MatrixC> qr(block);
    block = qr.householderQ() * MatrixC::Identity(dim, probe);
  }
  MatrixC ritz = block.adjoint() * (liouvillian * block);
  Eigen::ComplexEigenSolver<MatrixC> ritz_eigs(ritz);
  const double kernel_cut = std::max(options.tol, 1e-12) * norm_l;
  int kernel_dim = 0;
  for (int c = 0; c < probe; ++c) {
    if (std::abs(ritz_eigs.eigenvalues()(c)) < kernel_cut) ++kernel_dim;
  }
  kernel_dim = std::max(kernel_dim, 1);

  SteadyResult res;
  res.kernel_dimension = kernel_dim;
  res.unique = kernel_dim == 1;

  if (!res.unique) {
    if (options.seed == nullptr) {
      throw std::runtime_error(
          "steady_state: kernel dimension " + std::to_string(kernel_dim) +
          " > 1 and no seed supplied");
    }
    // project the seed onto the near-kernel Ritz vectors
    MatrixC kernel_basis(dim, kernel_dim);
    int k = 0;
    for (int c = 0; c < probe && k < kernel_dim; ++c) {
      if (std::abs(ritz_eigs.eigenvalues()(c)) < kernel_cut) {
        kernel_basis.col(k++) =
            block * ritz_eigs.eigenvectors().col(c);
      }
    }
    VectorC projected =
        kernel_basis * (kernel_basis.adjoint() * *options.seed);
    const Complex tr = trace_functional.conjugate().dot(projected);
    if (std::abs(tr) < 1e-14) {
      throw std::runtime_error("steady_state: seed projection traceless");
    }
    res.state = projected / tr;
    res.residual = (liouvillian * res.state).norm() / norm_l;
    return res;
  }

  if (options.method == SteadyMethod::DirectKernel) {
    // replace one row of L with the trace functional
    int pivot_row = 0;
    double best = 0.0;
    for (int i = 0; i < dim; ++i) {
      if (std::abs(trace_functional(i)) > best) {
        best = std::abs(trace_functional(i));
        pivot_row = i;
      }
    }
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(liouvillian.nonZeros() + dim);
    for (int o = 0; o < liouvillian.outerSize(); ++o) {
      for (SparseC::InnerIterator it(liouvillian, o); it; ++it) {
        if (it.row() != pivot_row) {
          trips.emplace_back(static_cast<int>(it.row()),
                             static_cast<int>(it.col()), it.value());
        }
      }
    }
    for (int i = 0; i < dim; ++i) {
      if (trace_functional(i) != Complex(0.0)) {
        trips.emplace_back(pivot_row, i, trace_functional(i));
      }
    }
    SparseC aug(dim, dim);
    aug.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<SparseC> lu;
    lu.compute(aug);
    if (lu.info() != Eigen::Success) {
      throw std::runtime_error("steady_state: factorization failed");
    }
    VectorC rhs = VectorC::Zero(dim);
    rhs(pivot_row) = 1.0;
    res.state = lu.solve(rhs);
  } else {
    VectorC x;
    if (options.seed != nullptr) {
      x = *options.seed;
    } else {
      x = VectorC::Zero(dim);
      for (int i = 0; i < dim; ++i) x(i) = trace_functional(i);
    }
    for (int it = 0; it < options.max_iter; ++it) {
      x = shifted_lu.solve(x);
      const Complex tr = trace_functional.conjugate().dot(x);
      if (std::abs(tr) < 1e-300) {
        throw std::runtime_error("steady_state: traceless iterate");
      }
      x /= tr;
      if ((liouvillian * x).norm() / norm_l <= options.tol) break;
    }
    res.state = x;
  }
  res.residual = (liouvillian * res.state).norm() / norm_l;
  if (res.residual > std::max(options.tol, 1e-10) * 1e3) {
    throw std::runtime_error("steady_state: residual " +
                             std::to_string(res.residual) +
                             " above tolerance");
  }
  return res;
}

SteadyResult steady_state(const Superoperator& liouvillian,
                          const SteadyOptions& options) {
  const DickeBasis& basis = liouvillian.basis();
  VectorC trace_row = VectorC::Zero(basis.stacked_dim());
  for (int b = 0; b < basis.n_blocks(); ++b) {
    for (int r = 0; r < basis.block(b).dim; ++r) {
      trace_row(basis.stacked_index(b, r, r)) = 1.0;
    }
  }
  return steady_state_stacked(liouvillian.matrix(), trace_row, options);
}

void CorrelationSeries::write_csv(std::ostream& os) const {
  os << "tau,observable,re,im\n";
  os.precision(15);
  const std::string label = label_a + "." + label_b;
  for (size_t k = 0; k < tau.size(); ++k) {
    os << tau[k] << "," << label << "," << values[k].real() << ","
       << values[k].imag() << "\n";
  }
}

void CorrelationSeries::save_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("CorrelationSeries: cannot open " + path);
  write_csv(os);
}

CorrelationSeries two_time_correlation(const Superoperator& liouvillian,
                                       const BlockOperator& a,
                                       const BlockOperator& b,
                                       const GeneralizedDickeState& rho_ss,
                                       const std::vector<double>& tau_grid,
                                       const IntegratorControls& controls,
                                       double stationarity_tol) {
  CorrelationSeries out;
  const VectorC ss = rho_ss.to_stacked();
  out.seed_residual = (liouvillian.matrix() * ss).norm();
  if (out.seed_residual > stationarity_tol) {
    throw std::invalid_argument(
        "two_time_correlation: input state not stationary (residual " +
        std::to_string(out.seed_residual) + ")");
  }
  VectorC seed = rho_ss.left_multiplied(b).to_stacked();
  const DickeBasis& basis = liouvillian.basis();
  evolve_grid(liouvillian.matrix(), seed, tau_grid, controls,
              [&](double tau, const VectorC& x) {
                out.tau.push_back(tau);
                out.values.push_back(expectation_stacked(basis, a, x));
              });
  return out;
}

PhaseDiffusionReference phase_diffusion_reference(double w, double nc_gamma,
                                                  double c_gamma) {
  if (w >= nc_gamma) {
    throw std::invalid_argument(
        "phase_diffusion_reference: requires w < N C gamma (lasing phase)");
  }
  PhaseDiffusionReference out;
  out.j_cos_theta = w / nc_gamma;
  out.j_sin_theta_sq = 2.0 * w * (nc_gamma - w) / (nc_gamma * nc_gamma);
  out.d_phi = 0.5 * c_gamma * (nc_gamma + w) / (nc_gamma - w);
  return out;
}

}  // namespace collspin
