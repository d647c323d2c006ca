#ifndef COLLSPIN_LIOUVILLE_HPP
#define COLLSPIN_LIOUVILLE_HPP

#include <optional>
#include <utility>
#include <vector>

#include "state.hpp"

namespace collspin {

// Single-particle channel basis, fixed as (s_plus, s_minus, s_z) with
// s_z = sigma_z / 2.  Dephasing along other axes is expressed by the caller
// through a basis change of the rate matrix.
enum class Channel { Plus = 0, Minus = 1, Z = 2 };

// Collective Hamiltonian
//   H = hx Jx + hy Jy + hz Jz + cxx Jx^2 + cyy Jy^2 + czz Jz^2 + cpm J+J-
// where each quadratic coefficient may carry a 1/N normalization.
struct HamiltonianSpec {
  struct Quadratic {
    double coeff = 0.0;
    bool over_n = false;
  };
  double hx = 0.0, hy = 0.0, hz = 0.0;
  Quadratic jx2, jy2, jz2, jpjm;
};

struct CollectiveJump {
  double rate = 0.0;
  CollectiveKind kind = CollectiveKind::Jminus;
};
using CollectiveJumpSpec = std::vector<CollectiveJump>;

// Rates gamma_{alpha beta} multiplying sum_i s_alpha rho s_beta^dagger in
// the channel order (+, -, z), so the diagonal entries are the familiar
// pump / decay / dephasing rates.  Must be Hermitian; positivity of the
// generator additionally needs it PSD.
struct LocalRateMatrix {
  Eigen::Matrix3cd gamma = Eigen::Matrix3cd::Zero();

  Complex& operator()(Channel a, Channel b) {
    return gamma(static_cast<int>(a), static_cast<int>(b));
  }
  Complex operator()(Channel a, Channel b) const {
    return gamma(static_cast<int>(a), static_cast<int>(b));
  }
  double hermiticity_error() const;
  double min_eigenvalue() const;
};

enum class PsdPolicy { Strict, Warn };

// Sparse linear map on stacked generalized-Dicke vectors.
class Superoperator {
 public:
  Superoperator() = default;
  Superoperator(DickeBasis basis, SparseC matrix);

  const DickeBasis& basis() const { return basis_; }
  const SparseC& matrix() const { return matrix_; }

  VectorC apply(const VectorC& v) const { return matrix_ * v; }
  GeneralizedDickeState apply(const GeneralizedDickeState& s) const;

  Superoperator operator+(const Superoperator& rhs) const;
  Superoperator scaled(Complex factor) const;

  // Pairs (source 2J, target 2J) with any coupling in the sparse pattern.
  std::vector<std::pair<int, int>> block_connectivity() const;

  // Max |Tr L(rho)| over a deterministic set of random Hermitian unit-trace
  // states; zero for a physical generator.
  double trace_annihilation_error(int trials = 8) const;

 private:
  DickeBasis basis_;
  SparseC matrix_;
};

// Spin-length dependent prefactors of the three J sectors reached by a local
// channel.  Fields are absent where the formula is singular because the
// corresponding target sector does not exist (E at J=0, G below J=1).
struct EfgCoefficients {
  std::optional<double> e, f, g;
};
EfgCoefficients efg_coefficients(int n_spins, int two_j);

// Superoperator for sum_i s_q^i rho (s_r^i)^dagger.  The channel pair (q,r)
// conjugate-transposes to (r,q).
Superoperator local_channel_superoperator(const DickeBasis& basis, Channel q,
                                          Channel r);

// Collective operator equal to the single-site sum  sum_i s_beta^i s_alpha^i,
// reduced through the on-site product identities (s_+s_- = 1/2 + s_z, ...).
BlockOperator collective_pair_operator(const DickeBasis& basis, Channel beta,
                                       Channel alpha);

BlockOperator hamiltonian_operator(const DickeBasis& basis,
                                   const HamiltonianSpec& h);

// Full generator
//   L(rho) = -i[H,rho] + sum_k rate_k D[J_k](rho)
//          + sum_{ab} gamma_{ab} (s_a rho s_b^dag - 1/2 {s_b^dag s_a, rho})
// with the local sums taken over sites and reduced to the Dicke triangle.
Superoperator build_liouvillian(const DickeBasis& basis,
                                const HamiltonianSpec& h,
                                const CollectiveJumpSpec& collective,
                                const LocalRateMatrix& local,
                                PsdPolicy policy = PsdPolicy::Strict);

}  // namespace collspin

#endif
