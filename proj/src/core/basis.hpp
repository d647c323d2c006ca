#ifndef COLLSPIN_BASIS_HPP
#define COLLSPIN_BASIS_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace collspin {

using Complex = std::complex<double>;

// Half-integer spin lengths are carried as doubled integers (twoJ) so that
// block lookup never touches floating point keys.
struct DickeBlock {
  int two_j = 0;    // 2J
  int dim = 0;      // 2J+1
  int offset = 0;   // start of this block in the stacked (2J+1)^2 layout
};

// Enumeration of the spin-length sectors for N spin-1/2 particles.  Blocks
// are ordered by decreasing J, from N/2 down to 0 (N even) or 1/2 (N odd).
// The stacked vector places each block's (2J+1)x(2J+1) coefficient matrix
// row-major, rows indexed by M ascending from -J, columns by M' ascending.
class DickeBasis {
 public:
  static constexpr int kMaxSpins = 4096;

  static DickeBasis build(int n_spins);

  int n_spins() const { return n_spins_; }
  const std::vector<DickeBlock>& blocks() const { return blocks_; }
  int n_blocks() const { return static_cast<int>(blocks_.size()); }
  int stacked_dim() const { return stacked_dim_; }

  // Index of the block with given 2J, or -1 if absent.
  int block_index(int two_j) const;

  const DickeBlock& block(int b) const { return blocks_[b]; }

  // Stacked index of coefficient (M row, M' col) inside block b, with
  // row/col counted from M = -J upward.
  int stacked_index(int b, int row, int col) const {
    const DickeBlock& blk = blocks_[b];
    return blk.offset + row * blk.dim + col;
  }

  bool operator==(const DickeBasis& o) const {
    return n_spins_ == o.n_spins_;
  }
  bool operator!=(const DickeBasis& o) const { return !(*this == o); }

 private:
  int n_spins_ = 0;
  std::vector<DickeBlock> blocks_;
  int stacked_dim_ = 0;
};

// Exact irrep degeneracy d_J = N!(2J+1)/((N/2-J)!(N/2+J+1)!), returned as a
// decimal string to keep the big-integer arithmetic out of the header.
std::string degeneracy_string(int n_spins, int two_j);

// log(d_J) for partition-sum weights; valid to N of several thousand.
double log_degeneracy(int n_spins, int two_j);

// Convenience for small N where d_J fits in 64 bits (N <= 64 always does
// for the sum rule check; individual d_J overflow earlier, so callers that
// need exactness at large N use degeneracy_string).
std::uint64_t degeneracy_u64(int n_spins, int two_j);

}  // namespace collspin

#endif
