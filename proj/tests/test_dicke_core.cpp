#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "core/state.hpp"

using namespace collspin;

TEST_CASE("basis enumeration and stacked dimension") {
  auto b2 = DickeBasis::build(2);
  CHECK(b2.n_blocks() == 2);
  CHECK(b2.block(0).two_j == 2);
  CHECK(b2.block(1).two_j == 0);
  CHECK(b2.stacked_dim() == 10);

  auto b3 = DickeBasis::build(3);
  CHECK(b3.stacked_dim() == 20);
  CHECK(b3.block(b3.n_blocks() - 1).two_j == 1);

  auto b4 = DickeBasis::build(4);
  CHECK(b4.stacked_dim() == 35);

  // sum over J of (2J+1)^2 = binom(N+3, 3)-ish growth; check a larger case
  // against the closed form N(N+2)(2N+5)/24 rounded per parity via brute sum.
  for (int n : {7, 10, 33, 100}) {
    auto b = DickeBasis::build(n);
    long long sum = 0;
    for (const auto& blk : b.blocks()) sum += 1LL * blk.dim * blk.dim;
    CHECK(b.stacked_dim() == sum);
    // offsets tile the stacked vector contiguously
    int off = 0;
    for (const auto& blk : b.blocks()) {
      CHECK(blk.offset == off);
      off += blk.dim * blk.dim;
    }
  }

  CHECK_THROWS_AS(DickeBasis::build(0), std::invalid_argument);
  CHECK_THROWS_AS(DickeBasis::build(-3), std::invalid_argument);
}

TEST_CASE("irrep degeneracies and the 2^N sum rule") {
  CHECK(degeneracy_u64(2, 2) == 1);
  CHECK(degeneracy_u64(2, 0) == 1);
  CHECK(degeneracy_u64(4, 4) == 1);
  CHECK(degeneracy_u64(4, 2) == 3);
  CHECK(degeneracy_u64(4, 0) == 2);
  CHECK(degeneracy_u64(3, 1) == 2);

  for (int n : {1, 2, 3, 4, 5, 8, 13, 20, 40, 60}) {
    auto b = DickeBasis::build(n);
    std::uint64_t sum = 0;
    for (const auto& blk : b.blocks()) {
      sum += degeneracy_u64(n, blk.two_j) * (blk.two_j + 1);
    }
    CHECK(sum == (std::uint64_t{1} << n));
  }

  // string and log forms agree with the 64-bit values where those exist
  CHECK(degeneracy_string(10, 4) == std::to_string(degeneracy_u64(10, 4)));
  for (int n : {6, 21, 50}) {
    auto b = DickeBasis::build(n);
    for (const auto& blk : b.blocks()) {
      double lg = log_degeneracy(n, blk.two_j);
      CHECK(lg == doctest::Approx(std::log(double(degeneracy_u64(n, blk.two_j))))
                      .epsilon(1e-12));
    }
  }

  // large-N degeneracy stays exact in the string form: d_J satisfies the
  // Catalan-triangle recursion d(N,J) = d(N-1,J-1/2) + d(N-1,J+1/2)
  auto as_check = [](int n, int tj) { return degeneracy_string(n, tj); };
  CHECK(as_check(100, 0) ==
        "1978261657756160653623774456");  // Catalan number C_50
}

TEST_CASE("collective operators satisfy su(2)") {
  for (int n : {2, 3, 5, 8}) {
    auto basis = DickeBasis::build(n);
    auto Jx = BlockOperator::collective(basis, CollectiveKind::Jx);
    auto Jy = BlockOperator::collective(basis, CollectiveKind::Jy);
    auto Jz = BlockOperator::collective(basis, CollectiveKind::Jz);
    auto Jp = BlockOperator::collective(basis, CollectiveKind::Jplus);
    auto Jm = BlockOperator::collective(basis, CollectiveKind::Jminus);
    auto Jsq = BlockOperator::collective(basis, CollectiveKind::Jsq);

    for (int b = 0; b < basis.n_blocks(); ++b) {
      MatrixC x = Jx.block(b), y = Jy.block(b), z = Jz.block(b);
      MatrixC comm = x * y - y * x - Complex(0, 1) * z;
      CHECK(comm.cwiseAbs().maxCoeff() < 1e-12);
      MatrixC casimir = x * x + y * y + z * z;
      CHECK((casimir - MatrixC(Jsq.block(b))).cwiseAbs().maxCoeff() < 1e-12);
      MatrixC ladder = x + Complex(0, 1) * y;
      CHECK((ladder - MatrixC(Jp.block(b))).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((MatrixC(Jm.block(b)) - MatrixC(Jp.block(b)).adjoint())
                .cwiseAbs()
                .maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("block operator arithmetic") {
  auto basis = DickeBasis::build(4);
  auto Jp = BlockOperator::collective(basis, CollectiveKind::Jplus);
  auto Jm = BlockOperator::collective(basis, CollectiveKind::Jminus);
  auto Jz = BlockOperator::collective(basis, CollectiveKind::Jz);
  auto id = BlockOperator::identity(basis);

  // [J+, J-] = 2 Jz
  auto lhs = Jp * Jm + (Jm * Jp).scaled(-1.0);
  auto rhs = Jz.scaled(2.0);
  for (int b = 0; b < basis.n_blocks(); ++b) {
    CHECK((MatrixC(lhs.block(b)) - MatrixC(rhs.block(b))).cwiseAbs().maxCoeff() <
          1e-12);
  }
  CHECK((MatrixC(id.block(0)) - MatrixC::Identity(5, 5)).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK_THROWS_AS(Jp * BlockOperator::identity(DickeBasis::build(3)),
                  std::invalid_argument);
}

TEST_CASE("all-up and coherent states") {
  auto basis = DickeBasis::build(6);
  auto up = GeneralizedDickeState::all_up(basis);
  CHECK(std::abs(up.trace() - 1.0) < 1e-15);
  auto Jz = BlockOperator::collective(basis, CollectiveKind::Jz);
  CHECK(expectation(up, Jz).real() == doctest::Approx(3.0));
  CHECK(up.min_eigenvalue() >= -1e-15);

  // theta=0 coherent state is all-up
  auto c0 = GeneralizedDickeState::coherent(basis, 0.0, 0.3);
  CHECK(std::abs(expectation(c0, Jz) - 3.0) < 1e-12);

  // Bloch vector of a tilted coherent state
  const double theta = 0.7, phi = 1.1, J = 3.0;
  auto c = GeneralizedDickeState::coherent(basis, theta, phi);
  auto Jx = BlockOperator::collective(basis, CollectiveKind::Jx);
  auto Jy = BlockOperator::collective(basis, CollectiveKind::Jy);
  CHECK(expectation(c, Jz).real() ==
        doctest::Approx(J * std::cos(theta)).epsilon(1e-12));
  CHECK(expectation(c, Jx).real() ==
        doctest::Approx(J * std::sin(theta) * std::cos(phi)).epsilon(1e-12));
  CHECK(expectation(c, Jy).real() ==
        doctest::Approx(J * std::sin(theta) * std::sin(phi)).epsilon(1e-12));
  CHECK(c.hermiticity_error() < 1e-14);
}

TEST_CASE("stacked round trip and two-operator expectation") {
  auto basis = DickeBasis::build(5);
  auto c = GeneralizedDickeState::coherent(basis, 1.2, 0.4);
  auto v = c.to_stacked();
  CHECK(v.size() == basis.stacked_dim());
  auto back = GeneralizedDickeState::from_stacked(basis, v);
  for (int b = 0; b < basis.n_blocks(); ++b) {
    CHECK((back.block(b) - c.block(b)).cwiseAbs().maxCoeff() == 0.0);
  }

  auto Jp = BlockOperator::collective(basis, CollectiveKind::Jplus);
  auto Jm = BlockOperator::collective(basis, CollectiveKind::Jminus);
  auto Jz = BlockOperator::collective(basis, CollectiveKind::Jz);
  auto Jsq = BlockOperator::collective(basis, CollectiveKind::Jsq);
  // J+J- = J^2 - Jz^2 + Jz as an expectation identity
  Complex lhs = expectation(c, Jp, Jm);
  Complex rhs = expectation(c, Jsq) - expectation(c, Jz, Jz) + expectation(c, Jz);
  CHECK(std::abs(lhs - rhs) < 1e-12);
  CHECK(std::abs(expectation_stacked(basis, Jz, v) - expectation(c, Jz)) <
        1e-14);
}

TEST_CASE("projection distributions") {
  auto basis = DickeBasis::build(4);
  auto c = GeneralizedDickeState::coherent(basis, 0.9, 0.0);
  auto pj = projection_distribution(c, ProjectionAxis::J);
  CHECK(pj.size() == basis.n_blocks());
  CHECK(pj(0) == doctest::Approx(1.0));  // coherent states live in J=N/2

  auto pm = projection_distribution(c, ProjectionAxis::Jz);
  CHECK(pm.size() == 5);
  CHECK(pm.sum() == doctest::Approx(1.0));
  double mean = 0.0;
  for (int k = 0; k < 5; ++k) mean += (-2.0 + k) * pm(k);
  CHECK(mean == doctest::Approx(2.0 * std::cos(0.9)).epsilon(1e-12));

  auto pe = projection_distribution(c, ProjectionAxis::JMinusJz);
  CHECK(pe.sum() == doctest::Approx(1.0));
  CHECK(pe(0) == doctest::Approx(pm(4)));  // J-M=0 is M=+2 here
}

TEST_CASE("snapshot round trip") {
  auto basis = DickeBasis::build(3);
  GeneralizedDickeState s(basis);
  s.block(0) = MatrixC::Random(4, 4);
  s.block(1) = MatrixC::Random(2, 2);
  std::stringstream ss;
  s.write_snapshot(ss);
  auto r = GeneralizedDickeState::read_snapshot(ss);
  for (int b = 0; b < basis.n_blocks(); ++b) {
    CHECK((r.block(b) - s.block(b)).cwiseAbs().maxCoeff() < 1e-14);
  }
}
