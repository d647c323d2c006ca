#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/classical.hpp"

using namespace collspin;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
  return out;
}

double l2_error(const ClassicalField& a, const ClassicalField& b) {
  return std::sqrt((a.density - b.density).square().sum() *
                   a.grid.cell_volume());
}

}  // namespace

TEST_CASE("laser steady density profile") {
  auto grid = ClassicalGrid::square(3.0, 201);
  auto f = laser_steady_density(0.0, grid);
  CHECK(f.mass() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.density.minCoeff() >= 0.0);

  // peak-normalized profile value at |alpha|^2 = 1
  const double peak = f.density.maxCoeff();
  const int i1 = 133;  // cell center x = 1.0 - dx/2... nearest to 1
  const double x1 = grid.x(i1);
  const double r2 = x1 * x1;
  CHECK(f.density(i1, 100) / peak ==
        doctest::Approx(std::exp(-r2 * r2)).epsilon(1e-10));

  // strongly incoherent limit: Gaussian with <|alpha|^2> ~ 1/zeta
  auto g20 = laser_steady_density(20.0, grid);
  const double n20 =
      field_average(g20, [](double x, double y) { return x * x + y * y; });
  CHECK(n20 == doctest::Approx(1.0 / 20.0).epsilon(0.02));

  // coherent side: density peaks on the ring |alpha|^2 = -zeta/2
  auto gm1 = laser_steady_density(-1.0, grid);
  double best = -1.0;
  double best_r2 = 0.0;
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      if (gm1.density(i, j) > best) {
        best = gm1.density(i, j);
        best_r2 = grid.x(i) * grid.x(i) + grid.y(j) * grid.y(j);
      }
    }
  }
  CHECK(best_r2 == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("tfim steady density and marginals") {
  auto grid = ClassicalGrid::square(3.5, 257);

  // kappa -> 0 limit is the Boltzmann form exp(-4 H_c)
  auto f0 = tfim_steady_density(-0.25, 0.0, grid);
  double worst = 0.0;
  const double norm0 = f0.density(128, 128);
  for (int j = 0; j < grid.ny; j += 16) {
    for (int i = 0; i < grid.nx; i += 16) {
      const double z = grid.x(i), p = grid.y(j);
      const double hc = (2 * p * p - 0.25 * 2 * z * z + z * z * z * z) / 4.0;
      const double want = std::exp(-4.0 * hc) /
                          std::exp(-4.0 * 0.0);  // reference point z=p~0
      const double zc = grid.x(128), pc = grid.y(128);
      const double hc0 =
          (2 * pc * pc - 0.5 * zc * zc + zc * zc * zc * zc) / 4.0;
      worst = std::max(worst, std::abs(f0.density(i, j) / norm0 -
                                       want * std::exp(4.0 * hc0)));
    }
  }
  CHECK(worst < 1e-10);

  // kappa=1, eta=-1/2: z-marginal is exp(z^2/2 - z^4) after p integration
  auto f1 = tfim_steady_density(-0.5, 1.0, grid);
  auto pz = marginal_x(f1);
  double p0 = 0.0;
  for (const auto& [z, v] : pz) p0 = std::max(p0, v);
  // the profile peaks at z = 1/2, so normalize the target by its own max
  const double wmax = std::exp(1.0 / 16.0);
  for (const auto& [z, v] : pz) {
    const double want = std::exp(z * z / 2.0 - z * z * z * z) / wmax;
    CHECK(v / p0 == doctest::Approx(want).epsilon(5e-4));
  }

  // critical quartic profile at eta = -kappa^2/4
  auto fc = tfim_steady_density(-0.25, 1.0, grid);
  auto pzc = marginal_x(fc);
  double pc0 = 0.0;
  for (const auto& [z, v] : pzc) pc0 = std::max(pc0, v);
  for (const auto& [z, v] : pzc) {
    CHECK(v / pc0 ==
          doctest::Approx(std::exp(-z * z * z * z)).epsilon(5e-4));
  }
}

TEST_CASE("discrete stationarity residual refines at second order") {
  struct Case {
    ClassicalGenerator gen;
    std::function<ClassicalField(const ClassicalGrid&)> steady;
    bool two_d;
  };
  std::vector<Case> cases = {
      {ClassicalGenerator::laser(1.0),
       [](const ClassicalGrid& g) { return laser_steady_density(1.0, g); },
       true},
      {ClassicalGenerator::tfim(1.0, 1.0),
       [](const ClassicalGrid& g) {
         return tfim_steady_density(1.0, 1.0, g);
       },
       true},
      {ClassicalGenerator::appendix_d(1.0, 1.0, 1.0),
       [](const ClassicalGrid& g) {
         return appendix_d_steady_density(1.0, g);
       },
       false},
  };
  for (const auto& c : cases) {
    std::vector<double> resid;
    for (int n : {64, 128, 256}) {
      auto grid = c.two_d ? ClassicalGrid::square(3.2, n)
                          : ClassicalGrid::line(3.2, n);
      auto f = c.steady(grid);
      resid.push_back(apply_generator(c.gen, f).abs().maxCoeff() /
                      f.max_abs());
    }
    const double slope = std::log2(resid[0] / resid[2]) / 2.0;
    CAPTURE(resid[0]);
    CAPTURE(resid[2]);
    CHECK(slope == doctest::Approx(2.0).epsilon(0.15));
  }
}

TEST_CASE("laser evolution: stationarity, mass, symmetry") {
  auto grid = ClassicalGrid::square(2.4, 121);
  auto start = laser_steady_density(1.0, grid);
  auto traj = evolve_classical(ClassicalGenerator::laser(1.0), start,
                               {0.0, 8.0});
  for (const auto& f : traj) {
    CHECK(f.mass() == doctest::Approx(1.0).epsilon(1e-10));
  }
  // after transients the drift toward the discrete fixed point is tiny
  const double deriv =
      apply_generator(ClassicalGenerator::laser(1.0), traj[1])
          .abs()
          .maxCoeff();
  CHECK(deriv < 1e-6);

  // U(1) symmetry survives discretely: exact 90-degree rotation symmetry
  auto sym_start = laser_steady_density(0.0, grid);  // not steady for zeta=1
  auto out = evolve_classical(ClassicalGenerator::laser(1.0), sym_start,
                              {0.0, 0.5})[1];
  double asym = 0.0;
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      asym = std::max(asym, std::abs(out.density(i, j) -
                                     out.density(j, grid.nx - 1 - i)));
    }
  }
  CHECK(asym < 1e-12);
}

TEST_CASE("appendix D generator converges to the quartic density") {
  auto gen = ClassicalGenerator::appendix_d(1.0, 1.0, 1.0);
  CHECK(gen.c3 == doctest::Approx(1.0));
  auto grid = ClassicalGrid::line(3.0, 513);
  ClassicalField start;
  start.grid = grid;
  start.density.resize(grid.nx, 1);
  for (int i = 0; i < grid.nx; ++i) {
    const double y = grid.x(i);
    start.density(i, 0) = std::exp(-2.0 * (y - 0.4) * (y - 0.4));
  }
  start.normalize();
  auto end = evolve_classical(gen, start, {0.0, 16.0})[1];
  auto want = appendix_d_steady_density(1.0, grid);
  CHECK(l2_error(end, want) < 1e-4);
}

TEST_CASE("tfim evolution reaches the analytic steady state") {
  auto grid = ClassicalGrid::square(3.3, 145);
  auto gen = ClassicalGenerator::tfim(1.0, 1.0);
  ClassicalField start;
  start.grid = grid;
  start.density.resize(grid.nx, grid.ny);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const double z = grid.x(i) - 0.5, p = grid.y(j) + 0.3;
      start.density(i, j) = std::exp(-2.0 * z * z - 2.0 * p * p);
    }
  }
  start.normalize();
  auto end = evolve_classical(gen, start, {0.0, 22.0})[1];
  auto want = tfim_steady_density(1.0, 1.0, grid);
  CHECK(l2_error(end, want) < 1e-3);
}

TEST_CASE("classical correlation functions") {
  auto grid = ClassicalGrid::square(2.2, 81);
  auto gen = ClassicalGenerator::laser(2.0);
  // settle to the discrete fixed point before seeding
  auto base = evolve_classical(gen, laser_steady_density(2.0, grid),
                               {0.0, 12.0})[1];
  auto corr = classical_correlation(gen, base,
                                    ClassicalCorrelationMode::LaserC,
                                    linspace(0.0, 2.0, 9));
  CHECK(corr.n_power == doctest::Approx(1.5));
  const double n0 =
      field_average(base, [](double x, double y) { return x * x + y * y; });
  CHECK(corr.value[0] == doctest::Approx(n0).epsilon(1e-8));
  // decay, staying positive over this window
  CHECK(corr.value[8] < 0.5 * corr.value[0]);
  CHECK(corr.value[8] > 0.0);

  // base must be stationary
  ClassicalField uniform = base;
  uniform.density.setConstant(1.0);
  uniform.normalize();
  CHECK_THROWS_AS(classical_correlation(gen, uniform,
                                        ClassicalCorrelationMode::LaserC,
                                        {0.0, 1.0}),
                  std::invalid_argument);

  auto tgrid = ClassicalGrid::square(3.3, 97);
  auto tgen = ClassicalGenerator::tfim(-0.25, 1.0);
  auto tbase = evolve_classical(tgen, tfim_steady_density(-0.25, 1.0, tgrid),
                                {0.0, 22.0})[1];
  auto tc = classical_correlation(tgen, tbase, ClassicalCorrelationMode::TfimC,
                                  linspace(0.0, 2.0, 5));
  const double z2 =
      field_average(tbase, [](double z, double) { return z * z; });
  CHECK(tc.n_power == doctest::Approx(0.5));
  CHECK(tc.value[0] == doctest::Approx(z2).epsilon(1e-8));

  auto chi = classical_correlation(tgen, tbase,
                                   ClassicalCorrelationMode::TfimChi,
                                   linspace(0.0, 2.0, 5));
  CHECK(chi.n_power == doctest::Approx(0.25));
  // equal-time response vanishes up to the centered-difference floor
  CHECK(std::abs(chi.value[0]) < 1e-6);
  CHECK(std::abs(chi.value[2]) > 1e-3);   // but not at later times
}
