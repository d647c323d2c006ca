#include "operators.hpp"

#include <cmath>
#include <stdexcept>

namespace collspin {

BlockOperator::BlockOperator(DickeBasis basis, std::vector<SparseC> per_block)
    : basis_(std::move(basis)), per_block_(std::move(per_block)) {
  if (static_cast<int>(per_block_.size()) != basis_.n_blocks()) {
    throw std::invalid_argument("BlockOperator: block count mismatch");
  }
}

BlockOperator BlockOperator::identity(const DickeBasis& basis) {
  std::vector<SparseC> blocks;
  blocks.reserve(basis.n_blocks());
  for (const auto& blk : basis.blocks()) {
    SparseC m(blk.dim, blk.dim);
    m.setIdentity();
    blocks.push_back(std::move(m));
  }
  return BlockOperator(basis, std::move(blocks));
}

BlockOperator BlockOperator::collective(const DickeBasis& basis, CollectiveKind kind) {
  std::vector<SparseC> blocks;
  blocks.reserve(basis.n_blocks());
  const Complex I(0.0, 1.0);
  for (const auto& blk : basis.blocks()) {
    const double J = 0.5 * blk.two_j;
    SparseC m(blk.dim, blk.dim);
    std::vector<Eigen::Triplet<Complex>> trips;
    auto mval = [&](int row) { return -J + row; };  // M value at row index
    switch (kind) {
      case CollectiveKind::Jz:
        for (int r = 0; r < blk.dim; ++r) trips.emplace_back(r, r, mval(r));
        break;
      case CollectiveKind::Jsq:
        for (int r = 0; r < blk.dim; ++r) trips.emplace_back(r, r, J * (J + 1.0));
        break;
      case CollectiveKind::Jplus:
        // J+ |J,M> = sqrt((J-M)(J+M+1)) |J,M+1>
        for (int r = 0; r + 1 < blk.dim; ++r) {
          const double M = mval(r);
          trips.emplace_back(r + 1, r, std::sqrt((J - M) * (J + M + 1.0)));
        }
        break;
      case CollectiveKind::Jminus:
        for (int r = 1; r < blk.dim; ++r) {
          const double M = mval(r);
          trips.emplace_back(r - 1, r, std::sqrt((J + M) * (J - M + 1.0)));
        }
        break;
      case CollectiveKind::Jx:
        for (int r = 0; r + 1 < blk.dim; ++r) {
          const double M = mval(r);
          const double amp = 0.5 * std::sqrt((J - M) * (J + M + 1.0));
          trips.emplace_back(r + 1, r, amp);
          trips.emplace_back(r, r + 1, amp);
        }
        break;
      case CollectiveKind::Jy:
        for (int r = 0; r + 1 < blk.dim; ++r) {
          const double M = mval(r);
          const double amp = 0.5 * std::sqrt((J - M) * (J + M + 1.0));
          trips.emplace_back(r + 1, r, -I * amp);
          trips.emplace_back(r, r + 1, I * amp);
        }
        break;
    }
    m.setFromTriplets(trips.begin(), trips.end());
    blocks.push_back(std::move(m));
  }
  return BlockOperator(basis, std::move(blocks));
}

BlockOperator BlockOperator::operator*(const BlockOperator& rhs) const {
  if (basis_ != rhs.basis_) throw std::invalid_argument("BlockOperator: basis mismatch");
  std::vector<SparseC> blocks;
  blocks.reserve(per_block_.size());
  for (size_t b = 0; b < per_block_.size(); ++b) {
    blocks.push_back(SparseC(per_block_[b] * rhs.per_block_[b]));
  }
  return BlockOperator(basis_, std::move(blocks));
}

BlockOperator BlockOperator::operator+(const BlockOperator& rhs) const {
  if (basis_ != rhs.basis_) throw std::invalid_argument("BlockOperator: basis mismatch");
  std::vector<SparseC> blocks;
  blocks.reserve(per_block_.size());
  for (size_t b = 0; b < per_block_.size(); ++b) {
    blocks.push_back(SparseC(per_block_[b] + rhs.per_block_[b]));
  }
  return BlockOperator(basis_, std::move(blocks));
}

BlockOperator BlockOperator::scaled(Complex factor) const {
  std::vector<SparseC> blocks;
  blocks.reserve(per_block_.size());
  for (const auto& m : per_block_) blocks.push_back(SparseC(factor * m));
  return BlockOperator(basis_, std::move(blocks));
}

BlockOperator BlockOperator::adjoint() const {
  std::vector<SparseC> blocks;
  blocks.reserve(per_block_.size());
  for (const auto& m : per_block_) blocks.push_back(SparseC(m.adjoint()));
  return BlockOperator(basis_, std::move(blocks));
}

}  // namespace collspin
