#include "liouville.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <random>
#include <set>
#include <stdexcept>

namespace collspin {

namespace {

using Triplet = Eigen::Triplet<Complex>;

// Matrix-element families for a single local channel acting inside (A),
// one step below (B), or one step above (D) the source spin-length sector.
double coeff_a(Channel q, double J, double M) {
  switch (q) {
    case Channel::Plus:
      return std::sqrt(std::max(0.0, (J - M) * (J + M + 1)));
    case Channel::Minus:
      return std::sqrt(std::max(0.0, (J + M) * (J - M + 1)));
    case Channel::Z:
      return M;
  }
  return 0.0;
}

double coeff_b(Channel q, double J, double M) {
  switch (q) {
    case Channel::Plus:
      return std::sqrt(std::max(0.0, (J - M) * (J - M - 1)));
    case Channel::Minus:
      return -std::sqrt(std::max(0.0, (J + M) * (J + M - 1)));
    case Channel::Z:
      return std::sqrt(std::max(0.0, (J + M) * (J - M)));
  }
  return 0.0;
}

double coeff_d(Channel q, double J, double M) {
  switch (q) {
    case Channel::Plus:
      return -std::sqrt((J + M + 1) * (J + M + 2));
    case Channel::Minus:
      return std::sqrt((J - M + 1) * (J - M + 2));
    case Channel::Z:
      return std::sqrt((J + M + 1) * (J - M + 1));
  }
  return 0.0;
}

int m_shift(Channel q) {
  switch (q) {
    case Channel::Plus:
      return 1;
    case Channel::Minus:
      return -1;
    case Channel::Z:
      return 0;
  }
  return 0;
}

// vec(X rho Y) with the row-major stacked layout: the superoperator entry
// coupling target (r,c) to source (a,b) inside one J block is X(r,a) Y(b,c).
void add_sandwich(std::vector<Triplet>& out, const DickeBasis& basis,
                  const BlockOperator& x, const BlockOperator& y,
                  Complex factor) {
  for (int blk = 0; blk < basis.n_blocks(); ++blk) {
    const SparseC& xb = x.block(blk);
    const SparseC& yb = y.block(blk);
    for (int xo = 0; xo < xb.outerSize(); ++xo) {
      for (SparseC::InnerIterator xi(xb, xo); xi; ++xi) {
        for (int yo = 0; yo < yb.outerSize(); ++yo) {
          for (SparseC::InnerIterator yi(yb, yo); yi; ++yi) {
            out.emplace_back(
                basis.stacked_index(blk, static_cast<int>(xi.row()),
                                    static_cast<int>(yi.col())),
                basis.stacked_index(blk, static_cast<int>(xi.col()),
                                    static_cast<int>(yi.row())),
                factor * xi.value() * yi.value());
          }
        }
      }
    }
  }
}

void add_left(std::vector<Triplet>& out, const DickeBasis& basis,
              const BlockOperator& x, Complex factor) {
  add_sandwich(out, basis, x, BlockOperator::identity(basis), factor);
}

void add_right(std::vector<Triplet>& out, const DickeBasis& basis,
               const BlockOperator& y, Complex factor) {
  add_sandwich(out, basis, BlockOperator::identity(basis), y, factor);
}

Channel hermitian_conjugate(Channel c) {
  switch (c) {
    case Channel::Plus:
      return Channel::Minus;
    case Channel::Minus:
      return Channel::Plus;
    case Channel::Z:
      return Channel::Z;
  }
  return Channel::Z;
}

}  // namespace

double LocalRateMatrix::hermiticity_error() const {
  return (gamma - gamma.adjoint()).cwiseAbs().maxCoeff();
}

double LocalRateMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(
      0.5 * (gamma + gamma.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Superoperator::Superoperator(DickeBasis basis, SparseC matrix)
    : basis_(std::move(basis)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != basis_.stacked_dim() ||
      matrix_.cols() != basis_.stacked_dim()) {
    throw std::invalid_argument("Superoperator: matrix does not match basis");
  }
}

GeneralizedDickeState Superoperator::apply(const GeneralizedDickeState& s) const {
  if (s.basis() != basis_) {
    throw std::invalid_argument("Superoperator::apply: basis mismatch");
  }
  return GeneralizedDickeState::from_stacked(basis_, matrix_ * s.to_stacked());
}

Superoperator Superoperator::operator+(const Superoperator& rhs) const {
  if (basis_ != rhs.basis_) {
    throw std::invalid_argument("Superoperator: basis mismatch");
  }
  return Superoperator(basis_, matrix_ + rhs.matrix_);
}

Superoperator Superoperator::scaled(Complex factor) const {
  return Superoperator(basis_, SparseC(factor * matrix_));
}

std::vector<std::pair<int, int>> Superoperator::block_connectivity() const {
  auto block_of = [this](int idx) {
    for (int b = basis_.n_blocks() - 1; b >= 0; --b) {
      if (idx >= basis_.block(b).offset) return b;
    }
    return 0;
  };
  std::set<std::pair<int, int>> seen;
  for (int o = 0; o < matrix_.outerSize(); ++o) {
    for (SparseC::InnerIterator it(matrix_, o); it; ++it) {
      if (std::abs(it.value()) < 1e-15) continue;
      const int src = basis_.block(block_of(static_cast<int>(it.col()))).two_j;
      const int dst = basis_.block(block_of(static_cast<int>(it.row()))).two_j;
      seen.insert({src, dst});
    }
  }
  return {seen.begin(), seen.end()};
}

double Superoperator::trace_annihilation_error(int trials) const {
  std::mt19937 rng(12345);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    GeneralizedDickeState s(basis_);
    for (int b = 0; b < basis_.n_blocks(); ++b) {
      const int d = basis_.block(b).dim;
      MatrixC m(d, d);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) m(r, c) = Complex(gauss(rng), gauss(rng));
      s.block(b) = m * m.adjoint();
    }
    s.normalize();
    worst = std::max(worst, std::abs(apply(s).trace()));
  }
  return worst;
}

EfgCoefficients efg_coefficients(int n_spins, int two_j) {
  if (two_j < 0 || two_j > n_spins || (n_spins - two_j) % 2 != 0) {
    throw std::invalid_argument("efg_coefficients: illegal (N, J)");
  }
  const double half_n = 0.5 * n_spins;
  const double J = 0.5 * two_j;
  EfgCoefficients out;
  if (two_j > 0) out.e = (1.0 + half_n) / (2.0 * J * (J + 1.0));
  out.f = (half_n + J + 2.0) / (2.0 * (J + 1.0) * (2.0 * J + 3.0));
  if (two_j >= 2) out.g = (half_n - J + 1.0) / (2.0 * J * (2.0 * J - 1.0));
  return out;
}

Superoperator local_channel_superoperator(const DickeBasis& basis, Channel q,
                                          Channel r) {
  const int n = basis.n_spins();
  const double half_n = 0.5 * n;
  const int dq = m_shift(q);
  const int dr = m_shift(r);
  std::vector<Triplet> trips;
  for (int blk = 0; blk < basis.n_blocks(); ++blk) {
    const DickeBlock& src = basis.block(blk);
    const double J = 0.5 * src.two_j;
    const int below = basis.block_index(src.two_j - 2);
    const int above = basis.block_index(src.two_j + 2);

    // Prefactors attach to the target sector: E(J) in place, F(J-1) one step
    // down, G(J+1) one step up.
    const double e_pref =
        src.two_j > 0 ? (1.0 + half_n) / (2.0 * J * (J + 1.0)) : 0.0;
    const double f_pref =
        below >= 0 ? (half_n + (J - 1.0) + 2.0) / (2.0 * J * (2.0 * J + 1.0))
                   : 0.0;
    const double g_pref =
        above >= 0
            ? (half_n - (J + 1.0) + 1.0) / (2.0 * (J + 1.0) * (2.0 * J + 1.0))
            : 0.0;

    for (int row = 0; row < src.dim; ++row) {
      const double M = -J + row;
      for (int col = 0; col < src.dim; ++col) {
        const double Mp = -J + col;
        const int source = basis.stacked_index(blk, row, col);

        if (e_pref != 0.0) {
          const double amp = e_pref * coeff_a(q, J, M) * coeff_a(r, J, Mp);
          if (amp != 0.0) {
            trips.emplace_back(basis.stacked_index(blk, row + dq, col + dr),
                               source, amp);
          }
        }
        if (below >= 0) {
          const double amp = f_pref * coeff_b(q, J, M) * coeff_b(r, J, Mp);
          const int tr = row - 1 + dq;  // M+dq counted from -(J-1)
          const int tc = col - 1 + dr;
          if (amp != 0.0 && tr >= 0 && tc >= 0 && tr < src.dim - 2 &&
              tc < src.dim - 2) {
            trips.emplace_back(basis.stacked_index(below, tr, tc), source, amp);
          }
        }
        if (above >= 0) {
          const double amp = g_pref * coeff_d(q, J, M) * coeff_d(r, J, Mp);
          const int tr = row + 1 + dq;  // M+dq counted from -(J+1)
          const int tc = col + 1 + dr;
          if (amp != 0.0 && tr >= 0 && tc >= 0 && tr < src.dim + 2 &&
              tc < src.dim + 2) {
            trips.emplace_back(basis.stacked_index(above, tr, tc), source, amp);
          }
        }
      }
    }
  }
  SparseC m(basis.stacked_dim(), basis.stacked_dim());
  m.setFromTriplets(trips.begin(), trips.end());
  return Superoperator(basis, std::move(m));
}

BlockOperator collective_pair_operator(const DickeBasis& basis, Channel beta,
                                       Channel alpha) {
  const double half_n = 0.5 * basis.n_spins();
  auto coll = [&](CollectiveKind k) {
    return BlockOperator::collective(basis, k);
  };
  const auto id = BlockOperator::identity(basis);
  if (beta == Channel::Plus && alpha == Channel::Minus) {
    return id.scaled(half_n) + coll(CollectiveKind::Jz);
  }
  if (beta == Channel::Minus && alpha == Channel::Plus) {
    return id.scaled(half_n) + coll(CollectiveKind::Jz).scaled(-1.0);
  }
  if (beta == Channel::Z && alpha == Channel::Z) {
    return id.scaled(0.25 * basis.n_spins());
  }
  if (beta == Channel::Plus && alpha == Channel::Z) {
    return coll(CollectiveKind::Jplus).scaled(-0.5);
  }
  if (beta == Channel::Z && alpha == Channel::Plus) {
    return coll(CollectiveKind::Jplus).scaled(0.5);
  }
  if (beta == Channel::Minus && alpha == Channel::Z) {
    return coll(CollectiveKind::Jminus).scaled(0.5);
  }
  if (beta == Channel::Z && alpha == Channel::Minus) {
    return coll(CollectiveKind::Jminus).scaled(-0.5);
  }
  // (+,+) and (-,-): the on-site product vanishes for spin 1/2.
  return id.scaled(0.0);
}

BlockOperator hamiltonian_operator(const DickeBasis& basis,
                                   const HamiltonianSpec& h) {
  const double n = basis.n_spins();
  auto coll = [&](CollectiveKind k) {
    return BlockOperator::collective(basis, k);
  };
  auto quad_coeff = [&](const HamiltonianSpec::Quadratic& q) {
    return q.over_n ? q.coeff / n : q.coeff;
  };
  BlockOperator jx = coll(CollectiveKind::Jx);
  BlockOperator jy = coll(CollectiveKind::Jy);
  BlockOperator jz = coll(CollectiveKind::Jz);
  BlockOperator out = jx.scaled(h.hx) + jy.scaled(h.hy) + jz.scaled(h.hz);
  if (h.jx2.coeff != 0.0) out = out + (jx * jx).scaled(quad_coeff(h.jx2));
  if (h.jy2.coeff != 0.0) out = out + (jy * jy).scaled(quad_coeff(h.jy2));
  if (h.jz2.coeff != 0.0) out = out + (jz * jz).scaled(quad_coeff(h.jz2));
  if (h.jpjm.coeff != 0.0) {
    out = out + (coll(CollectiveKind::Jplus) * coll(CollectiveKind::Jminus))
                    .scaled(quad_coeff(h.jpjm));
  }
  return out;
}

Superoperator build_liouvillian(const DickeBasis& basis,
                                const HamiltonianSpec& h,
                                const CollectiveJumpSpec& collective,
                                const LocalRateMatrix& local,
                                PsdPolicy policy) {
  if (local.hermiticity_error() > 1e-12) {
    throw std::invalid_argument("build_liouvillian: rate matrix not Hermitian");
  }
  const double min_ev = local.min_eigenvalue();
  if (min_ev < -1e-12) {
    if (policy == PsdPolicy::Strict) {
      throw std::invalid_argument(
          "build_liouvillian: rate matrix not positive semidefinite "
          "(min eigenvalue " +
          std::to_string(min_ev) + ")");
    }
    std::cerr << "warning: rate matrix not PSD (min eigenvalue " << min_ev
              << "); generator may be unphysical\n";
  }

  std::vector<Triplet> trips;
  const Complex i_unit(0.0, 1.0);

  BlockOperator ham = hamiltonian_operator(basis, h);
  add_left(trips, basis, ham, -i_unit);
  add_right(trips, basis, ham, i_unit);

  for (const auto& jump : collective) {
    if (jump.rate < 0.0) {
      throw std::invalid_argument("build_liouvillian: negative collective rate");
    }
    if (jump.rate == 0.0) continue;
    BlockOperator a = BlockOperator::collective(basis, jump.kind);
    BlockOperator ad = a.adjoint();
    BlockOperator ada = ad * a;
    add_sandwich(trips, basis, a, ad, jump.rate);
    add_left(trips, basis, ada, -0.5 * jump.rate);
    add_right(trips, basis, ada, -0.5 * jump.rate);
  }

  SparseC total(basis.stacked_dim(), basis.stacked_dim());
  total.setFromTriplets(trips.begin(), trips.end());

  const Channel channels[3] = {Channel::Plus, Channel::Minus, Channel::Z};
  for (Channel alpha : channels) {
    for (Channel beta : channels) {
      const Complex g = local(alpha, beta);
      if (g == Complex(0.0)) continue;
      Superoperator sandwich = local_channel_superoperator(basis, alpha, beta);
      total += g * sandwich.matrix();
      std::vector<Triplet> anti;
      BlockOperator pair =
          collective_pair_operator(basis, hermitian_conjugate(beta), alpha);
      add_left(anti, basis, pair, -0.5 * g);
      add_right(anti, basis, pair, -0.5 * g);
      SparseC am(basis.stacked_dim(), basis.stacked_dim());
      am.setFromTriplets(anti.begin(), anti.end());
      total += am;
    }
  }
  total.makeCompressed();
  return Superoperator(basis, std::move(total));
}

}  // namespace collspin
