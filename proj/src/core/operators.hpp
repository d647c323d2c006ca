#ifndef COLLSPIN_OPERATORS_HPP
#define COLLSPIN_OPERATORS_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "basis.hpp"

namespace collspin {

using SparseC = Eigen::SparseMatrix<Complex>;
using MatrixC = Eigen::MatrixXcd;
using VectorC = Eigen::VectorXcd;

enum class CollectiveKind { Jx, Jy, Jz, Jplus, Jminus, Jsq };

// A J-preserving operator on the generalized Dicke manifold: one sparse
// (2J+1)x(2J+1) matrix per spin-length sector, acting on the column space
// spanned by |J,M> with M ascending.
class BlockOperator {
 public:
  BlockOperator() = default;
  BlockOperator(DickeBasis basis, std::vector<SparseC> per_block);

  const DickeBasis& basis() const { return basis_; }
  const SparseC& block(int b) const { return per_block_[b]; }
  int n_blocks() const { return static_cast<int>(per_block_.size()); }

  static BlockOperator identity(const DickeBasis& basis);
  static BlockOperator collective(const DickeBasis& basis, CollectiveKind kind);

  // Matrix product, block by block.
  BlockOperator operator*(const BlockOperator& rhs) const;
  BlockOperator operator+(const BlockOperator& rhs) const;
  BlockOperator scaled(Complex factor) const;
  BlockOperator adjoint() const;

 private:
  DickeBasis basis_;
  std::vector<SparseC> per_block_;
};

}  // namespace collspin

#endif
