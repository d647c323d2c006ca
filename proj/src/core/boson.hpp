#ifndef COLLSPIN_BOSON_HPP
#define COLLSPIN_BOSON_HPP

#include <vector>

#include "liouville.hpp"

namespace collspin {

// Two-boson state space for the fluctuation expansions: a transverse Fock
// mode A (occupation 0..n_max) tensored with a longitudinal factor that is
// either a harmonic-oscillator representation of the canonical pair (l, q)
// (TypeI, used when the mean-field spin length j < 1) or the integer
// delta-J lattice {-ell_max..0} with a unit-shift phase operator (TypeII,
// used when j = 1).
enum class LongitudinalKind { TypeI, TypeII };

struct BosonBasis {
  int n_max = 0;                // transverse Fock cutoff
  LongitudinalKind kind = LongitudinalKind::TypeII;
  int long_max = 0;             // m_max (TypeI) or ell_max (TypeII)
  int n_spins = 0;              // the N appearing in coefficients

  static BosonBasis type_i(int n_max, int m_max, int n_spins);
  static BosonBasis type_ii(int n_max, int ell_max, int n_spins);

  int long_dim() const { return long_max + 1; }
  int dim() const { return (n_max + 1) * long_dim(); }
  // transverse occupation n, longitudinal index k (TypeII: delta J = -k)
  int index(int n, int k) const { return n * long_dim() + k; }

  SparseC identity() const;
  SparseC a() const;        // transverse annihilation
  SparseC ad() const;
  SparseC num() const;      // A^dag A
  // TypeII only
  SparseC shift() const;    // e^{i phi}: lowers delta J by one, edge dropped
  SparseC delta_j() const;  // diagonal delta J <= 0
  // TypeI only; [l, q] = i on the interior subspace
  SparseC l_op() const;
  SparseC q_op() const;
  // quadratures x = (A + A^dag)/sqrt(2), p = -i(A - A^dag)/sqrt(2)
  SparseC x_op() const;
  SparseC p_op() const;
};

// Superoperators on the row-major vec layout (r * dim + c).
SparseC super_left(const SparseC& x);
SparseC super_right(const SparseC& y);          // rho -> rho y
SparseC super_sandwich(const SparseC& x, const SparseC& y);  // x rho y
SparseC super_commutator(const SparseC& x);     // [x, rho]
SparseC super_dissipator(const SparseC& o);     // o rho o^dag - {o^dag o, rho}/2

// Conjugate channel: M~(rho) = (M(rho^dag))^dag; realizes the "remaining
// combinations by complex conjugation" rule for table rows.
SparseC conjugate_channel(const SparseC& m, int dim);

// vec indices with fixed transverse and longitudinal coherence offsets
// (n_row - n_col = dn, k_row - k_col = dk); generators without coherent
// transverse drive conserve both.
std::vector<int> boson_vec_sector(const BosonBasis& basis, int dn, int dk);
VectorC boson_trace_row(const BosonBasis& basis);
Complex boson_vec_trace(const BosonBasis& basis, const VectorC& vec_state);
Complex boson_vec_expectation(const BosonBasis& basis, const SparseC& op,
                              const VectorC& vec_state);
// largest diagonal population on the truncation edges (n = n_max row or
// k = long_max row); used to flag undersized cutoffs
double boson_edge_population(const BosonBasis& basis, const VectorC& vec_state);

// Rows of the three replacement tables, identified by the spin-side channel
// they approximate.  The first three are the complete dissipator rows when
// j < 1 (TypeI) and the bare sandwiches when j = 1 (TypeII); the rest are
// mixed channels whose conjugates follow from conjugate_channel.
enum class BosonTermKind { Dephasing, Pumping, Decay, PlusPlus, PlusZ, MinusZ };

// j < 1 rules, order N^0, on a TypeI basis.
SparseC table1_term(const BosonBasis& basis, BosonTermKind kind, double j);
// j = 1 rules, leading order, on a TypeII basis.
SparseC table2_term(const BosonBasis& basis, BosonTermKind kind);
// j = 1 rules including the 1/N corrections.
SparseC table3_term(const BosonBasis& basis, BosonTermKind kind);

// Coefficient of the residual sqrt(N) [q, rho] commutator left after
// assembling w * pumping + gamma * decay at mean-field length j; vanishes
// at j = (w - gamma)/(w + gamma).
double table1_sqrtn_residual(double w, double gamma, double j, int n_spins);

enum class ExpansionOrder { LO, NLO };

// Collective operators in the TypeII representation.  J+ carries the
// 1/sqrt(N) corrections at NLO; Jz = N/2 + delta J - A^dag A is exact.
SparseC boson_jplus(const BosonBasis& basis, ExpansionOrder order);
SparseC boson_jz(const BosonBasis& basis);

// Exact number-phase dissipator channel sum_i s_q rho (s_r)^dag with
// operator square roots sqrt(2J - A^dag A), J = N/2 + delta J, evaluated on
// the occupation basis.  Throws if a retained state would make a square
// root argument negative (basis too small for this N).
SparseC exact_hp_channel(const BosonBasis& basis, Channel q, Channel r);

// Superradiant laser near the upper threshold, TypeII basis:
// LO:  w D[A] + w_c D[A^dag] + w (dJ rho - e^{-i phi} dJ rho e^{i phi})
// NLO: adds every 1/N term of the next-order expansion.
SparseC build_laser_boson_liouvillian(const BosonBasis& basis, double w,
                                      double w_c, ExpansionOrder order);

// Dissipative transverse-field Ising model in the disordered phase:
// -(i/2)[Delta p^2 + (Delta - g) x^2, rho] + gamma D[A]
// + i Delta [dJ, rho] + gamma (dJ rho - e^{-i phi} dJ rho e^{i phi})
SparseC build_tfim_boson_liouvillian(const BosonBasis& basis, double delta,
                                     double g, double gamma);

}  // namespace collspin

#endif
