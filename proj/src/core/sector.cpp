#include "sector.hpp"

#include <algorithm>
#include <cmath>

namespace collspin {

std::vector<int> m_difference_sector(const DickeBasis& basis, int delta) {
  std::vector<int> keep;
  for (int b = 0; b < basis.n_blocks(); ++b) {
    const DickeBlock& blk = basis.block(b);
    for (int r = 0; r < blk.dim; ++r) {
      const int c = r - delta;  // M - M' = row - col
      if (c >= 0 && c < blk.dim) keep.push_back(basis.stacked_index(b, r, c));
    }
  }
  std::sort(keep.begin(), keep.end());
  return keep;
}

SparseC restrict_matrix(const SparseC& m, const std::vector<int>& keep,
                        double* leakage) {
  std::vector<int> full_to_local(m.rows(), -1);
  for (size_t k = 0; k < keep.size(); ++k) full_to_local[keep[k]] = static_cast<int>(k);
  std::vector<Eigen::Triplet<Complex>> trips;
  double worst = 0.0;
  for (int o = 0; o < m.outerSize(); ++o) {
    for (SparseC::InnerIterator it(m, o); it; ++it) {
      const int lc = full_to_local[it.col()];
      if (lc < 0) continue;
      const int lr = full_to_local[it.row()];
      if (lr < 0) {
        worst = std::max(worst, std::abs(it.value()));
        continue;
      }
      trips.emplace_back(lr, lc, it.value());
    }
  }
  if (leakage) *leakage = worst;
  SparseC out(static_cast<int>(keep.size()), static_cast<int>(keep.size()));
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

VectorC restrict_vector(const VectorC& full, const std::vector<int>& keep) {
  VectorC out(static_cast<int>(keep.size()));
  for (size_t k = 0; k < keep.size(); ++k) out(k) = full(keep[k]);
  return out;
}

VectorC scatter_vector(const VectorC& restricted, const std::vector<int>& keep,
                       int full_dim) {
  VectorC out = VectorC::Zero(full_dim);
  for (size_t k = 0; k < keep.size(); ++k) out(keep[k]) = restricted(k);
  return out;
}

}  // namespace collspin
