#ifndef COLLSPIN_STATE_HPP
#define COLLSPIN_STATE_HPP

#include <iosfwd>
#include <string>

#include "operators.hpp"

namespace collspin {

enum class ProjectionAxis { J, Jz, JMinusJz };

// Block-diagonal density matrix on the generalized Dicke manifold.  Block b
// holds the coefficients of |J,M><J,M'| with M (row) and M' (col) ascending
// from -J; the global trace is the sum of block traces.
class GeneralizedDickeState {
 public:
  GeneralizedDickeState() = default;
  explicit GeneralizedDickeState(DickeBasis basis);

  const DickeBasis& basis() const { return basis_; }
  MatrixC& block(int b) { return blocks_[b]; }
  const MatrixC& block(int b) const { return blocks_[b]; }
  int n_blocks() const { return static_cast<int>(blocks_.size()); }

  Complex trace() const;
  void normalize();

  // All spins up: |N/2, N/2><N/2, N/2|.
  static GeneralizedDickeState all_up(const DickeBasis& basis);
  // Pure spin-coherent state exp(-i phi Jz) exp(-i theta Jy) |N/2,N/2> in the
  // maximal-J block, Bloch vector (sin t cos p, sin t sin p, cos t).
  static GeneralizedDickeState coherent(const DickeBasis& basis, double theta,
                                        double phi);

  // Stacked-vector views used by the superoperator machinery.
  VectorC to_stacked() const;
  static GeneralizedDickeState from_stacked(const DickeBasis& basis, const VectorC& v);

  // Max deviation from Hermiticity across blocks.
  double hermiticity_error() const;
  // Smallest block eigenvalue (states are PSD up to tolerance).
  double min_eigenvalue() const;

  GeneralizedDickeState left_multiplied(const BlockOperator& op) const;
  GeneralizedDickeState right_multiplied(const BlockOperator& op) const;

  void write_snapshot(std::ostream& os) const;
  static GeneralizedDickeState read_snapshot(std::istream& is);
  void save_snapshot(const std::string& path) const;
  static GeneralizedDickeState load_snapshot(const std::string& path);

 private:
  DickeBasis basis_;
  std::vector<MatrixC> blocks_;
};

// Tr[op rho], contracted block by block.
Complex expectation(const GeneralizedDickeState& state, const BlockOperator& op);
// Tr[a b rho].
Complex expectation(const GeneralizedDickeState& state, const BlockOperator& a,
                    const BlockOperator& b);
// Same contractions on a raw stacked vector (used for correlation seeds,
// which need not be Hermitian or normalized).
Complex expectation_stacked(const DickeBasis& basis, const BlockOperator& op,
                            const VectorC& stacked);

// Probability vector over spin-length sectors (axis J), magnetization values
// (axis Jz, length N+1, M from -N/2 ascending), or the excitation count
// J - M (axis JMinusJz, length N+1 counting 0..N).
Eigen::VectorXd projection_distribution(const GeneralizedDickeState& state,
                                        ProjectionAxis axis);

}  // namespace collspin

#endif
