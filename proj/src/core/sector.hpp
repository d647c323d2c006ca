#ifndef COLLSPIN_SECTOR_HPP
#define COLLSPIN_SECTOR_HPP

#include <vector>

#include "liouville.hpp"

namespace collspin {

// U(1)-symmetric generators (no transverse drive) conserve the coherence
// index M - M'.  Restricting to one value of it turns the N^3-sized stacked
// problem into an N^2-sized one, which is what makes direct steady-state
// factorization at N ~ 100 tractable.

// Stacked indices whose basis element |J,M><J,M'| has M - M' = delta.
std::vector<int> m_difference_sector(const DickeBasis& basis, int delta);

// Square submatrix of `m` on `keep` (ascending stacked indices).  If
// `leakage` is given it receives the largest |entry| coupling a kept column
// to a dropped row; a conserved sector has zero leakage.
SparseC restrict_matrix(const SparseC& m, const std::vector<int>& keep,
                        double* leakage = nullptr);

VectorC restrict_vector(const VectorC& full, const std::vector<int>& keep);
VectorC scatter_vector(const VectorC& restricted, const std::vector<int>& keep,
                       int full_dim);

}  // namespace collspin

#endif
