#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "core/boson.hpp"
#include "core/dynamics.hpp"
#include "core/sector.hpp"

using namespace collspin;

namespace {

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = a + (b - a) * i / (count - 1);
  return out;
}

MatrixC random_matrix(int d, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist;
  MatrixC m(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) m(r, c) = Complex(dist(gen), dist(gen));
  }
  return m;
}

double trace_defect(const BosonBasis& basis, const SparseC& superop) {
  const VectorC row = boson_trace_row(basis);
  return (superop.adjoint() * row).norm();
}

// steady state of `superop` restricted to the (dn, dk) = (0, 0) sector,
// returned as a full vec-layout vector
VectorC diagonal_steady(const BosonBasis& basis, const SparseC& superop) {
  const auto keep = boson_vec_sector(basis, 0, 0);
  double leak = 0.0;
  const SparseC restricted = restrict_matrix(superop, keep, &leak);
  REQUIRE(leak == 0.0);
  const VectorC ones = VectorC::Ones(static_cast<int>(keep.size()));
  const auto res = steady_state_stacked(restricted, ones);
  REQUIRE(res.unique);
  const int d = basis.dim();
  return scatter_vector(res.state, keep, d * d);
}

double log_fit_slope(const std::vector<double>& t,
                     const std::vector<double>& v) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int m = static_cast<int>(t.size());
  for (int k = 0; k < m; ++k) {
    const double x = t[k], y = std::log(v[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

TEST_CASE("boson basis layout and mode operators") {
  auto basis = BosonBasis::type_ii(2, 1, 20);
  CHECK(basis.dim() == 6);
  CHECK(basis.index(0, 0) == 0);
  CHECK(basis.index(0, 1) == 1);
  CHECK(basis.index(2, 1) == 5);

  MatrixC a = MatrixC(basis.a());
  CHECK(a(basis.index(0, 0), basis.index(1, 0)).real() == doctest::Approx(1.0));
  CHECK(a(basis.index(1, 1), basis.index(2, 1)).real() ==
        doctest::Approx(std::sqrt(2.0)));
  // [A, A^dag] = 1 away from the Fock edge
  MatrixC comm = a * a.adjoint() - a.adjoint() * a;
  CHECK(comm(basis.index(0, 0), basis.index(0, 0)).real() ==
        doctest::Approx(1.0));
  CHECK(comm(basis.index(1, 1), basis.index(1, 1)).real() ==
        doctest::Approx(1.0));

  CHECK_THROWS_AS(BosonBasis::type_ii(0, 1, 10), std::invalid_argument);
  CHECK_THROWS_AS(BosonBasis::type_i(3, 0, 10), std::invalid_argument);
  CHECK_THROWS_AS(basis.l_op(), std::invalid_argument);
  auto type_i = BosonBasis::type_i(2, 2, 10);
  CHECK_THROWS_AS(type_i.shift(), std::invalid_argument);
}

TEST_CASE("shift operator and delta J lattice") {
  auto basis = BosonBasis::type_ii(1, 1, 20);
  MatrixC s = MatrixC(basis.shift());
  MatrixC dj = MatrixC(basis.delta_j());
  CHECK(s(basis.index(0, 1), basis.index(0, 0)).real() == doctest::Approx(1.0));
  // amplitude leaving the lattice is dropped: on ell_max = 1 the double
  // shift is the zero map
  CHECK((s * s).norm() == 0.0);
  CHECK(dj(basis.index(0, 0), basis.index(0, 0)).real() == doctest::Approx(0.0));
  CHECK(dj(basis.index(0, 1), basis.index(0, 1)).real() ==
        doctest::Approx(-1.0));
  // S^dag S misses only the lower lattice edge, S S^dag only delta J = 0
  MatrixC sds = s.adjoint() * s;
  CHECK(sds(basis.index(0, 0), basis.index(0, 0)).real() == doctest::Approx(1));
  CHECK(sds(basis.index(0, 1), basis.index(0, 1)).real() == doctest::Approx(0));
  MatrixC ssd = s * s.adjoint();
  CHECK(ssd(basis.index(0, 0), basis.index(0, 0)).real() == doctest::Approx(0));
  CHECK(ssd(basis.index(0, 1), basis.index(0, 1)).real() == doctest::Approx(1));
}

TEST_CASE("type I canonical pair") {
  auto basis = BosonBasis::type_i(1, 8, 20);
  MatrixC l = MatrixC(basis.l_op()), q = MatrixC(basis.q_op());
  MatrixC comm = l * q - q * l;
  // [l, q] = i on states away from the oscillator cutoff
  for (int k = 0; k + 1 <= basis.long_max - 1; ++k) {
    const int i = basis.index(0, k);
    CHECK(std::abs(comm(i, i) - Complex(0.0, 1.0)) < 1e-12);
  }
  CHECK(l.adjoint().isApprox(l, 1e-12));
  CHECK(q.adjoint().isApprox(q, 1e-12));
}

TEST_CASE("vec-space superoperator helpers") {
  const int d = 4;
  MatrixC x = random_matrix(d, 11), y = random_matrix(d, 22);
  MatrixC rho = random_matrix(d, 33);
  SparseC xs = x.sparseView(), ys = y.sparseView();
  VectorC vec(d * d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) vec(r * d + c) = rho(r, c);
  }
  const auto unvec = [&](const VectorC& v) {
    MatrixC m(d, d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) m(r, c) = v(r * d + c);
    }
    return m;
  };
  CHECK(unvec(super_left(xs) * vec).isApprox(x * rho, 1e-12));
  CHECK(unvec(super_right(ys) * vec).isApprox(rho * y, 1e-12));
  CHECK(unvec(super_sandwich(xs, ys) * vec).isApprox(x * rho * y, 1e-12));
  CHECK(unvec(super_commutator(xs) * vec).isApprox(x * rho - rho * x, 1e-12));
  MatrixC diss = x * rho * x.adjoint() -
                 0.5 * (x.adjoint() * x * rho + rho * x.adjoint() * x);
  CHECK(unvec(super_dissipator(xs) * vec).isApprox(diss, 1e-12));

  // conjugate channel of rho -> x rho y is rho -> y^dag rho x^dag
  SparseC m = super_sandwich(xs, ys);
  SparseC conj = conjugate_channel(m, d);
  SparseC expected =
      super_sandwich(SparseC(ys.adjoint()), SparseC(xs.adjoint()));
  CHECK((MatrixC(conj) - MatrixC(expected)).norm() < 1e-12);
}

TEST_CASE("table I rows: structure and trace annihilation") {
  auto basis = BosonBasis::type_i(6, 6, 40);
  // at j = 1 the dephasing row collapses to plain transverse decay
  SparseC deph = table1_term(basis, BosonTermKind::Dephasing, 1.0);
  CHECK((MatrixC(deph) - MatrixC(super_dissipator(basis.a()))).norm() < 1e-12);

  for (auto kind :
       {BosonTermKind::Dephasing, BosonTermKind::Pumping, BosonTermKind::Decay,
        BosonTermKind::PlusPlus, BosonTermKind::PlusZ, BosonTermKind::MinusZ}) {
    SparseC m = table1_term(basis, kind, 0.6);
    CHECK(trace_defect(basis, m) < 1e-10 * std::max(1.0, m.norm()));
  }
  CHECK_THROWS_AS(table1_term(basis, BosonTermKind::Decay, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(table1_term(basis, BosonTermKind::Decay, 1.5),
                  std::invalid_argument);
}

TEST_CASE("sqrt-N terms cancel only at the mean field length") {
  const double w = 1.0, gamma = 0.5;
  const double j_mf = (w - gamma) / (w + gamma);
  CHECK(table1_sqrtn_residual(w, gamma, j_mf, 400) == doctest::Approx(0.0));
  CHECK(table1_sqrtn_residual(w, gamma, 0.9, 400) > 1.0);

  // assembled pump + decay generator: transverse mode thermalizes with
  // occupation gamma / (w - gamma) = 1 at w = 2 gamma
  auto basis = BosonBasis::type_i(12, 12, 400);
  SparseC gen = SparseC(w * table1_term(basis, BosonTermKind::Pumping, j_mf) +
                        gamma * table1_term(basis, BosonTermKind::Decay, j_mf));
  CHECK(trace_defect(basis, gen) < 1e-8 * gen.norm());

  // the phase variable q is neither damped nor diffused by this generator,
  // so the kernel is degenerate; relax towards it dynamically instead
  const int d = basis.dim();
  VectorC rho = VectorC::Zero(d * d);
  rho(0) = 1.0;  // vacuum times oscillator ground state
  std::vector<Complex> nbar, lbar;
  evolve_grid(gen, rho, linspace(0.0, 20.0, 5), {},
              [&](double, const VectorC& x) {
                nbar.push_back(boson_vec_expectation(basis, basis.num(), x));
                lbar.push_back(boson_vec_expectation(basis, basis.l_op(), x));
              });
  CHECK(std::abs(boson_vec_trace(basis, rho) - 1.0) < 1e-8);
  CHECK(nbar.back().real() == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(std::abs(lbar.back()) < 1e-6);
  // the length fluctuation l is an OU process: diffusion at
  // (w(1-j) + gamma(1+j)) / 4 against relaxation at 2(w + gamma) gives
  // Var(l) = 2/9 for these rates
  const SparseC l2 = SparseC(basis.l_op() * basis.l_op());
  CHECK(boson_vec_expectation(basis, l2, rho).real() ==
        doctest::Approx(2.0 / 9.0).epsilon(1e-3));
  CHECK(boson_edge_population(basis, rho) < 1e-3);
}

TEST_CASE("table II rows: population transport on the lattice") {
  const int n_spins = 24;
  auto basis = BosonBasis::type_ii(3, 2, n_spins);
  const int d = basis.dim();

  // decay moves weight from delta J = 0 to delta J = -1 with rate N
  VectorC rho = VectorC::Zero(d * d);
  const int i00 = basis.index(0, 0);
  rho(i00 * d + i00) = 1.0;
  VectorC out = table2_term(basis, BosonTermKind::Decay) * rho;
  const int i01 = basis.index(0, 1);
  CHECK(out(i01 * d + i01).real() == doctest::Approx(double(n_spins)));
  CHECK(out.norm() == doctest::Approx(double(n_spins)));

  // pumping moves weight from delta J = -1 back to delta J = 0
  VectorC rho1 = VectorC::Zero(d * d);
  rho1(i01 * d + i01) = 1.0;
  VectorC out1 = table2_term(basis, BosonTermKind::Pumping) * rho1;
  CHECK(out1(i00 * d + i00).real() == doctest::Approx(1.0));

  SparseC plus_z = table2_term(basis, BosonTermKind::PlusZ);
  CHECK((MatrixC(plus_z) -
         MatrixC(SparseC(0.5 * std::sqrt(double(n_spins)) *
                         super_left(basis.a()))))
            .norm() < 1e-12);
}

TEST_CASE("assembled dissipators annihilate trace at the right order") {
  const int n_spins = 24;
  auto basis = BosonBasis::type_ii(3, 2, n_spins);
  const int d = basis.dim();
  const SparseC n_op = basis.num(), dj = basis.delta_j();
  const auto anti = [](const SparseC& o) {
    return SparseC(0.5 * (super_left(o) + super_right(o)));
  };
  // interior test state, away from both truncation edges
  VectorC rho = VectorC::Zero(d * d);
  const int i = basis.index(1, 0);
  rho(i * d + i) = 1.0;
  const auto image_trace = [&](const SparseC& m) {
    return std::abs(boson_vec_trace(basis, VectorC(m * rho)));
  };

  // full pumping dissipator: sum sigma+ rho sigma- - {sigma- sigma+, rho}/2,
  // with the pair sum sum sigma- sigma+ = N/2 - Jz = A^dag A - delta J
  SparseC pump2 = SparseC(table2_term(basis, BosonTermKind::Pumping) -
                          anti(SparseC(n_op - dj)));
  CHECK(image_trace(pump2) < 1e-12);

  // decay pair sum is sigma+ sigma- = N/2 + Jz = N + delta J - A^dag A; the
  // leading-order sandwich leaves an O(1) trace defect that the 1/N row
  // removes
  SparseC pair_decay =
      SparseC(double(n_spins) * basis.identity() + dj - n_op);
  SparseC decay2 = SparseC(table2_term(basis, BosonTermKind::Decay) -
                           anti(pair_decay));
  SparseC decay3 = SparseC(table3_term(basis, BosonTermKind::Decay) -
                           anti(pair_decay));
  CHECK(image_trace(decay2) > 0.5);
  CHECK(image_trace(decay3) < 1e-12);

  // dephasing: sandwich row minus {sum sz sz, rho}/2 = N/4 rho
  SparseC id(d * d, d * d);
  id.setIdentity();
  SparseC deph3 = SparseC(table3_term(basis, BosonTermKind::Dephasing) -
                          0.25 * double(n_spins) * id);
  CHECK(image_trace(deph3) < 1e-12);
}

TEST_CASE("exact channels reproduce the spin triangle at N=6") {
  const int n_spins = 6;
  auto spin = DickeBasis::build(n_spins);
  auto basis = BosonBasis::type_ii(3, 1, n_spins);
  const int d = basis.dim();

  // |n, k> maps onto |J, M> with J = N/2 - k and M = J - n, so the matrix
  // element |n_i, k><n_j, k| sits in the 2J = N - 2k block at row index
  // M_i + J counted from the bottom of the ladder
  const auto spin_vec_index = [&](int bi, int bj) {
    const int ki = bi % basis.long_dim(), kj = bj % basis.long_dim();
    const int ni = bi / basis.long_dim(), nj = bj / basis.long_dim();
    if (ki != kj) return -1;  // different J blocks never share an element
    const int b = spin.block_index(n_spins - 2 * ki);
    const int dim = n_spins - 2 * ki + 1;
    return spin.stacked_index(b, dim - 1 - ni, dim - 1 - nj);
  };

  for (auto q : {Channel::Plus, Channel::Minus, Channel::Z}) {
    for (auto r : {Channel::Plus, Channel::Minus, Channel::Z}) {
      MatrixC exact = MatrixC(exact_hp_channel(basis, q, r));
      MatrixC full = MatrixC(local_channel_superoperator(spin, q, r).matrix());
      double worst = 0.0;
      for (int ti = 0; ti < d; ++ti) {
        for (int tj = 0; tj < d; ++tj) {
          const int tgt = spin_vec_index(ti, tj);
          if (tgt < 0) continue;
          for (int si = 0; si < d; ++si) {
            for (int sj = 0; sj < d; ++sj) {
              const int src = spin_vec_index(si, sj);
              if (src < 0) continue;
              worst = std::max(worst, std::abs(exact(ti * d + tj, si * d + sj) -
                                               full(tgt, src)));
            }
          }
        }
      }
      CAPTURE(int(q));
      CAPTURE(int(r));
      CHECK(worst < 1e-10);
    }
  }
}

TEST_CASE("table rows converge to the exact channels") {
  struct FamilySpec {
    BosonTermKind kind;
    Channel q, r;
    double lo_slope, nlo_slope;
  };
  const std::vector<FamilySpec> families = {
      {BosonTermKind::Dephasing, Channel::Z, Channel::Z, -1.0, -2.0},
      {BosonTermKind::Pumping, Channel::Plus, Channel::Plus, -1.0, -2.0},
      {BosonTermKind::Decay, Channel::Minus, Channel::Minus, 0.0, -1.0},
      {BosonTermKind::PlusPlus, Channel::Plus, Channel::Minus, -1.0, -1.0},
      {BosonTermKind::PlusZ, Channel::Plus, Channel::Z, -0.5, -1.5},
      {BosonTermKind::MinusZ, Channel::Minus, Channel::Z, -0.5, -1.5},
  };
  const std::vector<int> sizes = {20, 40, 80};
  for (const auto& fam : families) {
    std::vector<double> lo_err, nlo_err;
    for (int n : sizes) {
      auto basis = BosonBasis::type_ii(4, 2, n);
      // physical density matrices carry no coherence between different spin
      // lengths, so compare the superoperators on the k-conserving sector
      std::vector<int> phys;
      const int d = basis.dim();
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          if (i % basis.long_dim() == j % basis.long_dim()) {
            phys.push_back(i * d + j);
          }
        }
      }
      MatrixC exact = MatrixC(exact_hp_channel(basis, fam.q, fam.r));
      MatrixC lo = MatrixC(table2_term(basis, fam.kind));
      MatrixC nlo = MatrixC(table3_term(basis, fam.kind));
      double e2 = 0.0, e3 = 0.0;
      for (int i : phys) {
        for (int j : phys) {
          e2 += std::norm(lo(i, j) - exact(i, j));
          e3 += std::norm(nlo(i, j) - exact(i, j));
        }
      }
      lo_err.push_back(std::sqrt(e2));
      nlo_err.push_back(std::sqrt(e3));
    }
    const double lo_slope = std::log(lo_err[2] / lo_err[0]) /
                            std::log(double(sizes[2]) / sizes[0]);
    const double nlo_slope = std::log(nlo_err[2] / nlo_err[0]) /
                             std::log(double(sizes[2]) / sizes[0]);
    CAPTURE(int(fam.kind));
    CAPTURE(lo_err);
    CAPTURE(nlo_err);
    if (fam.lo_slope != 0.0) {
      CHECK(lo_slope == doctest::Approx(fam.lo_slope).epsilon(0.15));
    } else {
      CHECK(std::abs(lo_slope) < 0.15);
    }
    CHECK(nlo_slope == doctest::Approx(fam.nlo_slope).epsilon(0.15));
    // the NLO row is never worse
    CHECK(nlo_err[2] <= lo_err[2] * 1.0000001);
  }
}

TEST_CASE("collective operators in the boson representation") {
  for (int n_spins : {20, 80}) {
    auto basis = BosonBasis::type_ii(4, 2, n_spins);
    // Jz = N/2 + delta J - A^dag A is exact
    MatrixC jz = MatrixC(boson_jz(basis));
    for (int n = 0; n <= basis.n_max; ++n) {
      for (int k = 0; k <= basis.long_max; ++k) {
        const int i = basis.index(n, k);
        CHECK(jz(i, i).real() ==
              doctest::Approx(0.5 * n_spins - k - n).epsilon(1e-12));
      }
    }
    // exact J+ from the spin matrix elements sqrt((J - M)(J + M + 1))
    MatrixC exact = MatrixC::Zero(basis.dim(), basis.dim());
    for (int n = 1; n <= basis.n_max; ++n) {
      for (int k = 0; k <= basis.long_max; ++k) {
        const double two_j = n_spins - 2.0 * k;
        exact(basis.index(n - 1, k), basis.index(n, k)) =
            std::sqrt(n * (two_j + 1.0 - n));
      }
    }
    const double lo_err =
        (MatrixC(boson_jplus(basis, ExpansionOrder::LO)) - exact).norm();
    const double nlo_err =
        (MatrixC(boson_jplus(basis, ExpansionOrder::NLO)) - exact).norm();
    CHECK(nlo_err < 0.35 * lo_err);
    // absolute errors shrink like 1/sqrt(N)
    if (n_spins == 80) {
      auto small = BosonBasis::type_ii(4, 2, 20);
      MatrixC exact_small = MatrixC::Zero(small.dim(), small.dim());
      for (int n = 1; n <= small.n_max; ++n) {
        for (int k = 0; k <= small.long_max; ++k) {
          const double two_j = 20 - 2.0 * k;
          exact_small(small.index(n - 1, k), small.index(n, k)) =
              std::sqrt(n * (two_j + 1.0 - n));
        }
      }
      const double lo_err_small =
          (MatrixC(boson_jplus(small, ExpansionOrder::LO)) - exact_small)
              .norm();
      const double ratio = lo_err / lo_err_small;
      CHECK(ratio == doctest::Approx(std::sqrt(20.0 / 80.0)).epsilon(0.2));
    }
  }
}

TEST_CASE("laser boson model at leading order") {
  const double w = 2.0, w_c = 1.0;
  auto basis = BosonBasis::type_ii(24, 3, 60);
  SparseC gen = build_laser_boson_liouvillian(basis, w, w_c,
                                              ExpansionOrder::LO);
  CHECK(trace_defect(basis, gen) < 1e-10 * gen.norm());

  VectorC ss = diagonal_steady(basis, gen);
  const double nbar =
      boson_vec_expectation(basis, basis.num(), ss).real();
  CHECK(nbar == doctest::Approx(w_c / (w - w_c)).epsilon(1e-3));
  CHECK(boson_edge_population(basis, ss) < 1e-6);
  // longitudinal boson relaxes fully onto delta J = 0
  const int d = basis.dim();
  double p_k0 = 0.0;
  for (int n = 0; n <= basis.n_max; ++n) {
    const int i = basis.index(n, 0);
    p_k0 += ss(i * d + i).real();
  }
  CHECK(p_k0 == doctest::Approx(1.0).epsilon(1e-8));

  // amplitude correlation N <A(tau) A^dag> decays at (w - w_c) / 2
  const auto keep1 = boson_vec_sector(basis, 1, 0);
  double leak = 0.0;
  SparseC gen1 = restrict_matrix(gen, keep1, &leak);
  CHECK(leak == 0.0);
  VectorC seed = restrict_vector(VectorC(super_left(basis.ad()) * ss), keep1);
  auto grid = linspace(0.0, 4.0, 9);
  std::vector<Complex> corr;
  evolve_grid(gen1, seed, grid, {}, [&](double, const VectorC& x) {
    corr.push_back(boson_vec_expectation(
        basis, basis.a(), scatter_vector(x, keep1, d * d)));
  });
  for (size_t k = 0; k < grid.size(); ++k) {
    const double expected = (nbar + 1.0) * std::exp(-0.5 * (w - w_c) * grid[k]);
    CHECK(std::abs(corr[k] - expected) < 1e-4 * (nbar + 1.0));
  }
}

TEST_CASE("boson and spin correlators agree for the laser at N=60") {
  const int n = 60;
  const double c_gamma = 1.0 / n;
  const double ncg = n * c_gamma;  // = 1
  const double w = 2.0 * ncg;
  auto spin = DickeBasis::build(n);
  LocalRateMatrix local;
  local(Channel::Plus, Channel::Plus) = w;
  CollectiveJumpSpec coll = {{c_gamma, CollectiveKind::Jminus}};
  auto L = build_liouvillian(spin, {}, coll, local);

  auto keep0 = m_difference_sector(spin, 0);
  double leak = 0.0;
  auto L0 = restrict_matrix(L.matrix(), keep0, &leak);
  REQUIRE(leak == 0.0);
  VectorC ones = VectorC::Ones(static_cast<int>(keep0.size()));
  auto res = steady_state_stacked(L0, ones);
  REQUIRE(res.unique);
  auto ss = GeneralizedDickeState::from_stacked(
      spin, scatter_vector(res.state, keep0, spin.stacked_dim()));

  auto jp = BlockOperator::collective(spin, CollectiveKind::Jplus);
  auto jm = BlockOperator::collective(spin, CollectiveKind::Jminus);
  auto grid = linspace(0.0, 2.0 / (w - ncg), 9);
  auto keep1 = m_difference_sector(spin, -1);
  auto L1 = restrict_matrix(L.matrix(), keep1, &leak);
  REQUIRE(leak == 0.0);
  VectorC seed = restrict_vector(ss.left_multiplied(jm).to_stacked(), keep1);
  std::vector<double> spin_abs;
  evolve_grid(L1, seed, grid, {}, [&](double, const VectorC& x) {
    spin_abs.push_back(std::abs(expectation_stacked(
        spin, jp, scatter_vector(x, keep1, spin.stacked_dim()))));
  });
  const double spin_rate = -log_fit_slope(grid, spin_abs);

  // same correlator from the leading-order boson model
  auto basis = BosonBasis::type_ii(24, 3, n);
  SparseC gen = build_laser_boson_liouvillian(basis, w, ncg,
                                              ExpansionOrder::LO);
  VectorC bss = diagonal_steady(basis, gen);
  const auto bkeep = boson_vec_sector(basis, 1, 0);
  SparseC gen1 = restrict_matrix(gen, bkeep, &leak);
  VectorC bseed = restrict_vector(VectorC(super_left(basis.ad()) * bss), bkeep);
  const int d = basis.dim();
  std::vector<double> boson_abs;
  evolve_grid(gen1, bseed, grid, {}, [&](double, const VectorC& x) {
    boson_abs.push_back(n * std::abs(boson_vec_expectation(
                                basis, basis.a(),
                                scatter_vector(x, bkeep, d * d))));
  });
  const double boson_rate = -log_fit_slope(grid, boson_abs);
  CHECK(boson_rate == doctest::Approx(0.5 * (w - ncg)).epsilon(5e-3));
  CHECK(std::abs(boson_rate - spin_rate) / spin_rate < 0.10);
  // amplitudes agree at the 1/N level
  CHECK(std::abs(boson_abs[0] - spin_abs[0]) / spin_abs[0] < 0.1);
}

TEST_CASE("critical steady state distribution at N=300") {
  const int n_spins = 300;
  const double w_c = 1.0;
  auto basis = BosonBasis::type_ii(66, 10, n_spins);
  // zeta = 0: exactly at the upper threshold
  SparseC gen = build_laser_boson_liouvillian(basis, w_c, w_c,
                                              ExpansionOrder::NLO);
  CHECK(trace_defect(basis, gen) < 1e-9 * gen.norm());

  VectorC ss = diagonal_steady(basis, gen);
  CHECK(boson_edge_population(basis, ss) < 1e-6);
  const int d = basis.dim();
  std::vector<double> p_n(basis.n_max + 1, 0.0);
  double p_k0 = 0.0;
  for (int n = 0; n <= basis.n_max; ++n) {
    for (int k = 0; k <= basis.long_max; ++k) {
      const int i = basis.index(n, k);
      p_n[n] += ss(i * d + i).real();
      if (k == 0) p_k0 += ss(i * d + i).real();
    }
  }
  // near criticality the 1/N feedback keeps an O(1) fraction of the weight
  // off delta J = 0, but the lattice marginal still decays with k
  CHECK(p_k0 > 0.5);
  // peak-normalized histogram of |alpha|^2 = n / sqrt(N) against the
  // predicted critical profile exp(-|alpha|^4)
  double worst = 0.0;
  for (int n = 0; n <= basis.n_max; ++n) {
    const double alpha_sq = n / std::sqrt(double(n_spins));
    const double predicted = std::exp(-alpha_sq * alpha_sq);
    worst = std::max(worst, std::abs(p_n[n] / p_n[0] - predicted));
  }
  CHECK(worst < 0.1);
}

TEST_CASE("tfim boson model") {
  const double g = 1.0, gamma = 0.6;
  auto basis = BosonBasis::type_ii(50, 3, 100);
  SparseC gen = build_tfim_boson_liouvillian(basis, 1.2, g, gamma);
  CHECK(trace_defect(basis, gen) < 1e-10 * gen.norm());

  // g = 0, harmonic limit: dissipation empties the transverse mode and the
  // lattice collapses onto delta J = 0
  SparseC free_gen = build_tfim_boson_liouvillian(basis, 1.0, 0.0, 0.3);
  // the x^2 coupling mixes transverse coherences, so only the lattice
  // coherence index k - k' is conserved here
  const int d = basis.dim();
  std::vector<int> dk0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (i % basis.long_dim() == j % basis.long_dim()) dk0.push_back(i * d + j);
    }
  }
  double leak = 0.0;
  SparseC free0 = restrict_matrix(free_gen, dk0, &leak);
  CHECK(leak == 0.0);
  VectorC trace_row = restrict_vector(boson_trace_row(basis), dk0);
  auto res = steady_state_stacked(free0, trace_row);
  REQUIRE(res.unique);
  VectorC vac = scatter_vector(res.state, dk0, d * d);
  CHECK(std::abs(boson_vec_expectation(basis, basis.num(), vac)) < 1e-8);

  // quadratic theory: steady covariance solves the Lyapunov equation for
  // drift [[-gamma/2, Delta], [-(Delta - g), -gamma/2]], diffusion gamma/4
  const auto lyapunov_var_x = [&](double delta) {
    const double om = delta - g;
    Eigen::Matrix3d m;
    Eigen::Vector3d rhs;
    // unknowns (a, b, c) = (Var x, Var p, Cov xp)
    m << -gamma, 0.0, 2.0 * delta, 0.0, -gamma, -2.0 * om, -om, delta, -gamma;
    rhs << -gamma / 2.0, -gamma / 2.0, 0.0;
    return double(m.colPivHouseholderQr().solve(rhs)(0));
  };
  const SparseC x2 = SparseC(basis.x_op() * basis.x_op());
  std::vector<double> vars;
  for (double delta : {1.5, 1.2, 1.0}) {
    SparseC gd = build_tfim_boson_liouvillian(basis, delta, g, gamma);
    SparseC g0 = restrict_matrix(gd, dk0, &leak);
    CHECK(leak == 0.0);
    auto rs = steady_state_stacked(g0, trace_row);
    REQUIRE(rs.unique);
    VectorC full = scatter_vector(rs.state, dk0, d * d);
    const double var_x = boson_vec_expectation(basis, x2, full).real();
    CHECK(var_x == doctest::Approx(lyapunov_var_x(delta)).epsilon(1e-3));
    CHECK(boson_edge_population(basis, full) < 1e-6);
    vars.push_back(var_x);
  }
  // fluctuations blow up as Delta - g approaches -gamma^2 / (4 Delta)
  CHECK(vars[2] > 3.0 * vars[0]);
}
