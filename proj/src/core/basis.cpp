#include "basis.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <stdexcept>

namespace collspin {

DickeBasis DickeBasis::build(int n_spins) {
  if (n_spins < 1) {
    throw std::invalid_argument("DickeBasis: n_spins must be >= 1");
  }
  if (n_spins > kMaxSpins) {
    throw std::invalid_argument("DickeBasis: n_spins exceeds supported limit " +
                                std::to_string(kMaxSpins));
  }
  DickeBasis basis;
  basis.n_spins_ = n_spins;
  int offset = 0;
  for (int two_j = n_spins; two_j >= 0; two_j -= 2) {
    DickeBlock blk;
    blk.two_j = two_j;
    blk.dim = two_j + 1;
    blk.offset = offset;
    offset += blk.dim * blk.dim;
    basis.blocks_.push_back(blk);
  }
  basis.stacked_dim_ = offset;
  return basis;
}

int DickeBasis::block_index(int two_j) const {
  if (two_j < 0 || two_j > n_spins_ || (n_spins_ - two_j) % 2 != 0) return -1;
  return (n_spins_ - two_j) / 2;
}

namespace {

void check_degeneracy_args(int n_spins, int two_j) {
  if (n_spins < 1) throw std::invalid_argument("degeneracy: n_spins must be >= 1");
  if (two_j < 0 || two_j > n_spins || (n_spins - two_j) % 2 != 0) {
    throw std::invalid_argument("degeneracy: J is not a legal spin length for N=" +
                                std::to_string(n_spins));
  }
}

boost::multiprecision::cpp_int degeneracy_exact(int n_spins, int two_j) {
  using boost::multiprecision::cpp_int;
  // d_J = binom(N, N/2 - J) * (2J+1)/(N/2 + J + 1), evaluated exactly.
  const int k = (n_spins - two_j) / 2;  // N/2 - J
  cpp_int binom = 1;
  for (int i = 1; i <= k; ++i) {
    binom *= (n_spins - k + i);
    binom /= i;
  }
  cpp_int num = binom * (two_j + 1);
  cpp_int den = (n_spins + two_j) / 2 + 1;  // N/2 + J + 1 (integer: parities match)
  return num / den;
}

}  // namespace

std::string degeneracy_string(int n_spins, int two_j) {
  check_degeneracy_args(n_spins, two_j);
  return degeneracy_exact(n_spins, two_j).str();
}

std::uint64_t degeneracy_u64(int n_spins, int two_j) {
  check_degeneracy_args(n_spins, two_j);
  auto d = degeneracy_exact(n_spins, two_j);
  if (d > boost::multiprecision::cpp_int(UINT64_MAX)) {
    throw std::overflow_error("degeneracy_u64: value exceeds 64 bits, use degeneracy_string");
  }
  return d.convert_to<std::uint64_t>();
}

double log_degeneracy(int n_spins, int two_j) {
  check_degeneracy_args(n_spins, two_j);
  const double n = n_spins;
  const double j2 = two_j;
  // log N! + log(2J+1) - log (N/2-J)! - log (N/2+J+1)!
  return std::lgamma(n + 1.0) + std::log(j2 + 1.0) -
         std::lgamma((n - j2) / 2.0 + 1.0) - std::lgamma((n + j2) / 2.0 + 2.0);
}

}  // namespace collspin
