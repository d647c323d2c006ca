#ifndef COLLSPIN_DYNAMICS_HPP
#define COLLSPIN_DYNAMICS_HPP

#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "liouville.hpp"

namespace collspin {

struct IntegratorControls {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double max_step = std::numeric_limits<double>::infinity();
};

struct IntegratorStats {
  long long accepted = 0;
  long long rejected = 0;
  double min_step = std::numeric_limits<double>::infinity();
};

// Adaptive Dormand-Prince 5(4) on dx/dt = L x.  Sample times are hit
// exactly by clamping the step; the error controller is unaffected.  The
// callback receives (t, state) at every entry of t_grid, including t_grid[0]
// when it coincides with the start.
void evolve_grid(const SparseC& liouvillian, VectorC& state,
                 const std::vector<double>& t_grid,
                 const IntegratorControls& controls,
                 const std::function<void(double, const VectorC&)>& on_sample,
                 IntegratorStats* stats = nullptr);

struct Trajectory {
  std::vector<double> times;
  std::vector<std::string> labels;
  // samples[k][j] = observable j at times[k]
  std::vector<std::vector<Complex>> samples;
  IntegratorStats stats;

  // columns: t, observable, re, im
  void write_csv(std::ostream& os) const;
  void save_csv(const std::string& path) const;
};

using ObservableList = std::vector<std::pair<std::string, BlockOperator>>;

Trajectory evolve(const Superoperator& liouvillian,
                  const GeneralizedDickeState& rho0,
                  const std::vector<double>& t_grid,
                  const ObservableList& observables,
                  const IntegratorControls& controls = {});

enum class SteadyMethod { DirectKernel, ShiftedInverse };

struct SteadyOptions {
  double tol = 1e-10;
  int max_iter = 200;
  SteadyMethod method = SteadyMethod::DirectKernel;
  // disambiguates a multi-dimensional kernel; ignored when the kernel is 1d
  const VectorC* seed = nullptr;
  // how many trailing eigenvalues to probe when estimating the kernel
  int kernel_probe = 4;
};

struct SteadyResult {
  VectorC state;
  int kernel_dimension = 1;
  bool unique = true;
  double residual = 0.0;  // ||L x|| / ||L||
};

// Solves L x = 0 with t . x = 1, where t is the linear trace functional on
// the stacked layout.  Kernel dimension is the count of eigenvalues of L
// with |lambda| below tol * ||L||_inf, probed by shifted inverse iteration.
SteadyResult steady_state_stacked(const SparseC& liouvillian,
                                  const VectorC& trace_functional,
                                  const SteadyOptions& options = {});

SteadyResult steady_state(const Superoperator& liouvillian,
                          const SteadyOptions& options = {});

struct CorrelationSeries {
  std::vector<double> tau;
  std::vector<Complex> values;
  std::string label_a, label_b;
  double seed_residual = 0.0;  // ||L rho_ss|| of the input state

  void write_csv(std::ostream& os) const;
  void save_csv(const std::string& path) const;
};

// C(tau) = Tr[A e^{L tau}(B rho_ss)]; rho_ss must satisfy
// ||L rho_ss|| <= stationarity_tol.
CorrelationSeries two_time_correlation(const Superoperator& liouvillian,
                                       const BlockOperator& a,
                                       const BlockOperator& b,
                                       const GeneralizedDickeState& rho_ss,
                                       const std::vector<double>& tau_grid,
                                       const IntegratorControls& controls = {},
                                       double stationarity_tol = 1e-6);

// Mean-field Bloch vector and phase diffusion rate of the superradiant
// laser in the lasing phase w < N C gamma:
//   j cos(theta)   = w / (NCg)
//   (j sin theta)^2 = 2 w (NCg - w) / (NCg)^2
//   D_phi = (Cg / 2) (NCg + w) / (NCg - w)
struct PhaseDiffusionReference {
  double j_cos_theta = 0.0;
  double j_sin_theta_sq = 0.0;
  double d_phi = 0.0;
};
PhaseDiffusionReference phase_diffusion_reference(double w, double nc_gamma,
                                                  double c_gamma);

}  // namespace collspin

#endif
