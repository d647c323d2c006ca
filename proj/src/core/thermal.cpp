#include "thermal.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace collspin {

namespace {

// monotone bisection for f increasing through zero on [lo, hi]
template <typename F>
double bisect(F f, double lo, double hi, int iters = 200) {
  double flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm >= 0.0) == (flo >= 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct QuarticMoments {
  double log_m0 = 0.0;  // log of the partition integral
  double x2 = 0.0;      // <x^2>
  double var_x2 = 0.0;  // <x^4> - <x^2>^2
};

// Simpson quadrature of exp(-x^4 + z x^2) moments, stabilized by the
// exponent maximum; integrand is even.
QuarticMoments quartic_moments(double z) {
  const double max_expo = z > 0.0 ? 0.25 * z * z : 0.0;
  const double upper2 = 0.5 * z + std::sqrt(0.25 * z * z + 80.0);
  const double upper = std::sqrt(std::max(1.0, upper2)) + 0.5;
  const int n = 8000;  // Simpson intervals, ample for 1e-10 absolute
  const double h = upper / n;
  double m0 = 0.0, m2 = 0.0, m4 = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = i * h;
    const double x2 = x * x;
    const double w = std::exp(-x2 * x2 + z * x2 - max_expo);
    const double simp = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    m0 += simp * w;
    m2 += simp * w * x2;
    m4 += simp * w * x2 * x2;
  }
  QuarticMoments out;
  out.log_m0 = std::log(m0 * h / 3.0 * 2.0) + max_expo;
  out.x2 = m2 / m0;
  out.var_x2 = m4 / m0 - out.x2 * out.x2;
  return out;
}

}  // namespace

double critical_beta(const ThermalModel& model) {
  const double target =
      model.omega * model.omega0 / (4.0 * model.lambda * model.lambda);
  if (target >= 1.0) {
    throw std::domain_error("no finite-temperature transition: lambda^2 <= "
                            "omega*omega0/4");
  }
  double hi = 2.0 / model.omega0;
  while (std::tanh(0.5 * hi * model.omega0) < target) hi *= 2.0;
  return bisect(
      [&](double b) { return std::tanh(0.5 * b * model.omega0) - target; },
      0.0, hi);
}

double spin_length_entropy(double j) {
  if (j < 0.0 || j > 1.0) throw std::domain_error("j outside [0,1]");
  auto xlogx = [](double x) { return x > 0.0 ? x * std::log(0.5 * x) : 0.0; };
  return xlogx(1.0 - j) + xlogx(1.0 + j);
}

double spin_length_entropy_dd(double j) {
  if (j <= -1.0 || j >= 1.0) throw std::domain_error("j outside (-1,1)");
  return 2.0 / (1.0 - j * j);
}

std::vector<MeanFieldThermalSolution> mean_field_solve(
    const ThermalModel& model, double beta) {
  if (beta <= 0.0) throw std::domain_error("beta must be positive");
  std::vector<MeanFieldThermalSolution> out;

  MeanFieldThermalSolution dis;
  dis.phase = ThermalPhase::Disordered;
  dis.j = std::tanh(0.5 * beta * model.omega0);
  dis.free_energy_per_n =
      -std::log(2.0 * std::cosh(0.5 * beta * model.omega0)) / beta;
  out.push_back(dis);

  const double ratio =
      model.omega * model.omega0 / (4.0 * model.lambda * model.lambda);
  // self-consistency in u = cos(theta): tanh(beta w0 / 2u) = ratio / u
  auto resid = [&](double u) {
    return std::tanh(0.5 * beta * model.omega0 / u) - ratio / u;
  };
  if (resid(1.0) >= 0.0 && ratio < 1.0) {
    const double u = resid(ratio) >= 0.0
                         ? ratio  // saturated tanh edge, still bracketed below
                         : bisect(resid, ratio, 1.0);
    MeanFieldThermalSolution sr;
    sr.phase = ThermalPhase::Superradiant;
    sr.theta = std::acos(std::min(1.0, u));
    sr.j = std::tanh(0.5 * beta * model.omega0 / u);
    sr.c = -model.lambda * sr.j * std::sin(sr.theta) / model.omega;
    const double s2 = 1.0 - u * u;
    sr.free_energy_per_n =
        0.25 * model.omega0 * sr.j * s2 / u -
        std::log(2.0 * std::cosh(0.5 * beta * model.omega0 / u)) / beta;
    out.push_back(sr);
  }
  return out;
}

double log_degeneracy(int n_spins, double two_j) {
  const double jj = 0.5 * two_j;
  const double half = 0.5 * n_spins;
  return std::lgamma(n_spins + 1.0) + std::log(two_j + 1.0) -
         std::lgamma(half - jj + 1.0) - std::lgamma(half + jj + 2.0);
}

std::vector<LmgThermalRecord> lmg_partition_observables(
    int n_spins, double g, const std::vector<double>& betas) {
  if (n_spins < 1) throw std::invalid_argument("need at least one spin");

  // all (energy, log-weight) levels across (J, parity) blocks
  std::vector<double> energy;
  std::vector<double> logw;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  for (int two_j = n_spins % 2; two_j <= n_spins; two_j += 2) {
    const double jj = 0.5 * two_j;
    const double lw = log_degeneracy(n_spins, two_j);
    const double casimir = jj * (jj + 1.0);
    for (int parity = 0; parity < 2; ++parity) {
      // chain of M values -J + parity, -J + parity + 2, ...
      std::vector<double> ms;
      for (double m = -jj + parity; m <= jj + 1e-9; m += 2.0) ms.push_back(m);
      const int n = int(ms.size());
      if (n == 0) continue;
      Eigen::VectorXd diag(n), sub(std::max(0, n - 1));
      for (int k = 0; k < n; ++k) {
        const double m = ms[k];
        diag(k) = -m - (g / n_spins) * 0.5 * (casimir - m * m);
      }
      auto raise2 = [&](double m) {
        return 0.25 * std::sqrt((casimir - m * (m + 1.0)) *
                                (casimir - (m + 1.0) * (m + 2.0)));
      };
      for (int k = 0; k + 1 < n; ++k) {
        sub(k) = -(g / n_spins) * raise2(ms[k]);
      }
      if (n == 1) {
        energy.push_back(diag(0));
        logw.push_back(lw);
        continue;
      }
      solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
      if (solver.info() != Eigen::Success) {
        throw std::runtime_error("tridiagonal eigensolver failed in block J=" +
                                 std::to_string(jj));
      }
      for (int k = 0; k < n; ++k) {
        energy.push_back(solver.eigenvalues()(k));
        logw.push_back(lw);
      }
    }
  }

  std::vector<LmgThermalRecord> out;
  out.reserve(betas.size());
  for (double beta : betas) {
    double peak = -1e300;
    for (size_t k = 0; k < energy.size(); ++k) {
      peak = std::max(peak, logw[k] - beta * energy[k]);
    }
    double z = 0.0, ze = 0.0, ze2 = 0.0;
    for (size_t k = 0; k < energy.size(); ++k) {
      const double w = std::exp(logw[k] - beta * energy[k] - peak);
      z += w;
      ze += w * energy[k];
      ze2 += w * energy[k] * energy[k];
    }
    LmgThermalRecord rec;
    rec.beta = beta;
    rec.log_z = peak + std::log(z);
    const double e_mean = ze / z;
    rec.energy_per_n = e_mean / n_spins;
    rec.cv_per_n = beta * beta * (ze2 / z - e_mean * e_mean) / n_spins;
    out.push_back(rec);
  }
  return out;
}

double quartic_log_partition(double z) { return quartic_moments(z).log_m0; }
double quartic_moment_x2(double z) { return quartic_moments(z).x2; }
double quartic_moment_var_x2(double z) { return quartic_moments(z).var_x2; }

double analytic_cv(double xi, double beta_c_omega0) {
  const double jc = std::tanh(0.5 * beta_c_omega0);
  const double one_m = 1.0 - jc * jc;
  const double under = 4.0 * jc - 2.0 * beta_c_omega0 * one_m;
  if (under <= 0.0) {
    throw std::domain_error("soft-mode stiffness not positive at this "
                            "critical coupling");
  }
  const double b = std::pow(beta_c_omega0, 1.5) * one_m / std::sqrt(under);
  return 0.25 * beta_c_omega0 * beta_c_omega0 * one_m +
         b * b * quartic_moment_var_x2(b * xi);
}

namespace {

// normal modes of H = (x^T X x + p^T P p)/2 with diagonal P
std::vector<double> quad_frequencies(const Eigen::Matrix2d& xmat,
                                     const Eigen::Vector2d& pdiag,
                                     bool* stable) {
  Eigen::Matrix2d s;
  const Eigen::Vector2d r = pdiag.cwiseSqrt();
  s = r.asDiagonal() * xmat * r.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(s);
  std::vector<double> freqs;
  *stable = true;
  for (int k = 0; k < 2; ++k) {
    const double w2 = es.eigenvalues()(k);
    if (w2 < 0.0) {
      *stable = false;
      freqs.push_back(-std::sqrt(-w2));
    } else {
      freqs.push_back(std::sqrt(w2));
    }
  }
  return freqs;
}

}  // namespace

ThermalSpectrum effective_thermal_spectrum(const ThermalModel& model,
                                           double beta, ThermalPhase phase) {
  auto sols = mean_field_solve(model, beta);
  ThermalSpectrum out;

  const MeanFieldThermalSolution* sol = nullptr;
  for (const auto& s : sols) {
    if (s.phase == phase) sol = &s;
  }
  if (!sol) {
    throw std::invalid_argument("requested phase has no mean-field solution "
                                "at this temperature");
  }
  out.f_dd = spin_length_entropy_dd(sol->j);

  if (phase == ThermalPhase::Disordered) {
    const double lam_eff = model.lambda * std::sqrt(sol->j);
    Eigen::Matrix2d x;
    x << model.omega0, 2.0 * lam_eff, 2.0 * lam_eff, model.omega;
    Eigen::Vector2d p(model.omega0, model.omega);
    out.frequencies = quad_frequencies(x, p, &out.stable);
    if (!out.stable) out.unstable_direction = "transverse polariton mode";
  } else {
    const double u = std::cos(sol->theta);
    const double wa = beta * model.omega0 / u;
    const double wd = beta * model.omega;
    const double couple = 2.0 * beta * model.lambda * std::sqrt(sol->j) * u;
    const double lcouple = 2.0 * beta * model.lambda * std::sin(sol->theta);
    // integrate out the longitudinal mode (it enters without momentum)
    const double shift = lcouple * lcouple / out.f_dd;
    Eigen::Matrix2d x;
    x << wa, couple, couple, wd - 2.0 * shift;
    Eigen::Vector2d p(wa, wd);
    out.frequencies = quad_frequencies(x, p, &out.stable);
    if (!out.stable) out.unstable_direction = "cavity-longitudinal mixture";
  }

  // near-critical quadratic data (when a transition exists)
  const double target =
      model.omega * model.omega0 / (4.0 * model.lambda * model.lambda);
  if (target < 1.0) {
    const double bc = critical_beta(model);
    const double jc = std::tanh(0.5 * bc * model.omega0);
    out.gapped_mode_coefficient =
        bc * std::sqrt(model.omega0 * model.omega0 + model.omega * model.omega);
    out.soft_mass_coefficient =
        0.5 * std::pow(bc * model.omega0, 1.5) / std::sqrt(jc) *
        (model.omega * model.omega) /
        (model.omega * model.omega + model.omega0 * model.omega0);
  }
  return out;
}

}  // namespace collspin
