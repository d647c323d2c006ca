#ifndef COLLSPIN_ORACLE_BRUTE_HPP
#define COLLSPIN_ORACLE_BRUTE_HPP

#include <array>
#include <utility>
#include <vector>

#include "core/liouville.hpp"

// Gold-standard reference implementations at small N.  Dense and slow by
// design; linked into tests only, never into the solver library.
namespace collspin::oracle {

// Eq.-(1) dynamics on the untruncated 2^N Hilbert space, with every operator
// built from explicit single-site embeddings.
struct FullSpaceModel {
  int n_spins = 0;
  MatrixC hamiltonian;
  std::vector<std::pair<double, MatrixC>> collective_jumps;
  Eigen::Matrix3cd gamma;
  // site_ops[i] = (s_plus, s_minus, s_z) acting on site i
  std::vector<std::array<MatrixC, 3>> site_ops;

  static FullSpaceModel build(int n_spins, const HamiltonianSpec& h,
                              const CollectiveJumpSpec& collective,
                              const LocalRateMatrix& local);

  MatrixC rhs(const MatrixC& rho) const;
  // Classical RK4 with fixed step count.
  MatrixC evolve(MatrixC rho, double t, int steps) const;
};

// (cos(t/2)|up> + e^{i p} sin(t/2)|down>)^{tensor N}, the full-space twin of
// GeneralizedDickeState::coherent.
MatrixC product_state(int n_spins, double theta, double phi);

// Sum of single-site embeddings, e.g. Jz = sum_i s_z^i.
MatrixC full_space_collective(int n_spins, CollectiveKind kind);

// Max deviation of [rho, U_P] over all site transpositions P.
double permutation_symmetry_error(const MatrixC& rho, int n_spins);

// Two-mode Fock sector n_a + n_b in {N, N-2, ...} with the identification
// n_a = J - M, n_b = J + M.  States enumerated to match DickeBasis order:
// blocks by descending J, then M ascending.
struct SchwingerSector {
  int n_spins = 0;
  std::vector<std::pair<int, int>> states;  // (n_a, n_b)

  static SchwingerSector build(int n_spins);
  int dim() const { return static_cast<int>(states.size()); }
  int index(int n_a, int n_b) const;
};

// Superoperator for sum_i s_q^i rho (s_r^i)^dagger assembled from the
// Schwinger vector construction
//   E(J) J_q rho J_r^dag + F(J) K_q rho K_r^dag + G(J) L_q rho L_r^dag
// with K = (-a^2, b^2, -ab), L = K^dag componentwise under + <-> -, and the
// spin-length prefactors evaluated on the output sector.  Returned directly
// in the stacked generalized-Dicke layout for element-by-element comparison.
MatrixC schwinger_channel(const DickeBasis& basis, Channel q, Channel r);

}  // namespace collspin::oracle

#endif
