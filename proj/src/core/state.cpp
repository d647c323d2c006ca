#include "state.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace collspin {

GeneralizedDickeState::GeneralizedDickeState(DickeBasis basis)
    : basis_(std::move(basis)) {
  blocks_.reserve(basis_.n_blocks());
  for (const auto& blk : basis_.blocks()) {
    blocks_.push_back(MatrixC::Zero(blk.dim, blk.dim));
  }
}

Complex GeneralizedDickeState::trace() const {
  Complex tr = 0.0;
  for (const auto& m : blocks_) tr += m.trace();
  return tr;
}

void GeneralizedDickeState::normalize() {
  const Complex tr = trace();
  if (std::abs(tr) < 1e-300) throw std::runtime_error("normalize: zero trace");
  for (auto& m : blocks_) m /= tr;
}

GeneralizedDickeState GeneralizedDickeState::all_up(const DickeBasis& basis) {
  GeneralizedDickeState s(basis);
  const int top = basis.block(0).dim - 1;
  s.blocks_[0](top, top) = 1.0;
  return s;
}

GeneralizedDickeState GeneralizedDickeState::coherent(const DickeBasis& basis,
                                                      double theta, double phi) {
  GeneralizedDickeState s(basis);
  const int n = basis.n_spins();
  const double J = 0.5 * n;
  // <J,M| e^{-i theta Jy} |J,J> expanded with binomial amplitudes:
  // c_M = sqrt(binom(N, J+M)) cos(theta/2)^{J+M} sin(theta/2)^{J-M} e^{-i(J-M)phi}
  VectorC c(n + 1);
  const double ct = std::cos(0.5 * theta);
  const double st = std::sin(0.5 * theta);
  for (int r = 0; r <= n; ++r) {
    const double M = -J + r;
    double log_binom = std::lgamma(n + 1.0) - std::lgamma(J + M + 1.0) -
                       std::lgamma(J - M + 1.0);
    double amp = std::exp(0.5 * log_binom) * std::pow(ct, J + M) * std::pow(st, J - M);
    c(r) = amp * std::exp(Complex(0.0, (J - M) * phi));
  }
  c /= c.norm();
  s.blocks_[0] = c * c.adjoint();
  return s;
}

VectorC GeneralizedDickeState::to_stacked() const {
  VectorC v(basis_.stacked_dim());
  for (int b = 0; b < n_blocks(); ++b) {
    const auto& blk = basis_.block(b);
    for (int r = 0; r < blk.dim; ++r)
      for (int k = 0; k < blk.dim; ++k)
        v(basis_.stacked_index(b, r, k)) = blocks_[b](r, k);
  }
  return v;
}

GeneralizedDickeState GeneralizedDickeState::from_stacked(const DickeBasis& basis,
                                                          const VectorC& v) {
  if (v.size() != basis.stacked_dim()) {
    throw std::invalid_argument("from_stacked: dimension mismatch");
  }
  GeneralizedDickeState s(basis);
  for (int b = 0; b < basis.n_blocks(); ++b) {
    const auto& blk = basis.block(b);
    for (int r = 0; r < blk.dim; ++r)
      for (int k = 0; k < blk.dim; ++k)
        s.blocks_[b](r, k) = v(basis.stacked_index(b, r, k));
  }
  return s;
}

double GeneralizedDickeState::hermiticity_error() const {
  double err = 0.0;
  for (const auto& m : blocks_) {
    err = std::max(err, (m - m.adjoint()).cwiseAbs().maxCoeff());
  }
  return err;
}

double GeneralizedDickeState::min_eigenvalue() const {
  double lo = 0.0;
  for (const auto& m : blocks_) {
    Eigen::SelfAdjointEigenSolver<MatrixC> es(0.5 * (m + m.adjoint()),
                                              Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
  }
  return lo;
}

GeneralizedDickeState GeneralizedDickeState::left_multiplied(const BlockOperator& op) const {
  if (op.basis() != basis_) throw std::invalid_argument("left_multiplied: basis mismatch");
  GeneralizedDickeState out(basis_);
  for (int b = 0; b < n_blocks(); ++b) out.blocks_[b] = op.block(b) * blocks_[b];
  return out;
}

GeneralizedDickeState GeneralizedDickeState::right_multiplied(const BlockOperator& op) const {
  if (op.basis() != basis_) throw std::invalid_argument("right_multiplied: basis mismatch");
  GeneralizedDickeState out(basis_);
  for (int b = 0; b < n_blocks(); ++b) out.blocks_[b] = blocks_[b] * op.block(b);
  return out;
}

void GeneralizedDickeState::write_snapshot(std::ostream& os) const {
  os << "collspin-state 1\n";
  os << "n_spins " << basis_.n_spins() << "\n";
  os << "two_j";
  for (const auto& blk : basis_.blocks()) os << " " << blk.two_j;
  os << "\n";
  os << "J,M,Mp,re,im\n";
  os.precision(17);
  for (int b = 0; b < n_blocks(); ++b) {
    const auto& blk = basis_.block(b);
    const double J = 0.5 * blk.two_j;
    for (int r = 0; r < blk.dim; ++r)
      for (int k = 0; k < blk.dim; ++k) {
        const Complex z = blocks_[b](r, k);
        os << J << "," << (-J + r) << "," << (-J + k) << "," << z.real() << ","
           << z.imag() << "\n";
      }
  }
}

GeneralizedDickeState GeneralizedDickeState::read_snapshot(std::istream& is) {
  std::string magic;
  int version = 0;
  is >> magic >> version;
  if (magic != "collspin-state" || version != 1) {
    throw std::runtime_error("read_snapshot: unrecognized header");
  }
  std::string key;
  int n = 0;
  is >> key >> n;
  if (key != "n_spins") throw std::runtime_error("read_snapshot: missing n_spins");
  DickeBasis basis = DickeBasis::build(n);
  is >> key;
  if (key != "two_j") throw std::runtime_error("read_snapshot: missing two_j list");
  for (const auto& blk : basis.blocks()) {
    int tj = -1;
    is >> tj;
    if (tj != blk.two_j) throw std::runtime_error("read_snapshot: block list mismatch");
  }
  is >> key;  // CSV header
  GeneralizedDickeState s(basis);
  std::string line;
  std::getline(is, line);  // consume rest of header line
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    double J, M, Mp, re, im;
    char comma;
    ls >> J >> comma >> M >> comma >> Mp >> comma >> re >> comma >> im;
    const int b = basis.block_index(static_cast<int>(std::lround(2 * J)));
    if (b < 0) throw std::runtime_error("read_snapshot: bad J value");
    const int r = static_cast<int>(std::lround(M + J));
    const int c = static_cast<int>(std::lround(Mp + J));
    s.blocks_[b](r, c) = Complex(re, im);
  }
  return s;
}

void GeneralizedDickeState::save_snapshot(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_snapshot: cannot open " + path);
  write_snapshot(os);
}

GeneralizedDickeState GeneralizedDickeState::load_snapshot(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_snapshot: cannot open " + path);
  return read_snapshot(is);
}

Complex expectation(const GeneralizedDickeState& state, const BlockOperator& op) {
  if (state.basis() != op.basis()) throw std::invalid_argument("expectation: basis mismatch");
  Complex acc = 0.0;
  for (int b = 0; b < state.n_blocks(); ++b) {
    acc += (op.block(b) * state.block(b)).eval().trace();
  }
  return acc;
}

Complex expectation(const GeneralizedDickeState& state, const BlockOperator& a,
                    const BlockOperator& b) {
  if (state.basis() != a.basis() || state.basis() != b.basis()) {
    throw std::invalid_argument("expectation: basis mismatch");
  }
  Complex acc = 0.0;
  for (int blk = 0; blk < state.n_blocks(); ++blk) {
    acc += (a.block(blk) * (b.block(blk) * state.block(blk)).eval()).eval().trace();
  }
  return acc;
}

Complex expectation_stacked(const DickeBasis& basis, const BlockOperator& op,
                            const VectorC& stacked) {
  GeneralizedDickeState s = GeneralizedDickeState::from_stacked(basis, stacked);
  return expectation(s, op);
}

Eigen::VectorXd projection_distribution(const GeneralizedDickeState& state,
                                        ProjectionAxis axis) {
  const DickeBasis& basis = state.basis();
  const int n = basis.n_spins();
  Eigen::VectorXd out;
  switch (axis) {
    case ProjectionAxis::J: {
      out = Eigen::VectorXd::Zero(basis.n_blocks());
      for (int b = 0; b < basis.n_blocks(); ++b) out(b) = state.block(b).trace().real();
      break;
    }
    case ProjectionAxis::Jz: {
      // Entry k corresponds to M = -N/2 + k.
      out = Eigen::VectorXd::Zero(n + 1);
      for (int b = 0; b < basis.n_blocks(); ++b) {
        const auto& blk = basis.block(b);
        const int base = (n - blk.two_j) / 2;  // index of M=-J in the global M grid
        for (int r = 0; r < blk.dim; ++r) out(base + r) += state.block(b)(r, r).real();
      }
      break;
    }
    case ProjectionAxis::JMinusJz: {
      // Entry k corresponds to J - M = k (0..N).
      out = Eigen::VectorXd::Zero(n + 1);
      for (int b = 0; b < basis.n_blocks(); ++b) {
        const auto& blk = basis.block(b);
        for (int r = 0; r < blk.dim; ++r) {
          const int k = blk.dim - 1 - r;  // J - M
          out(k) += state.block(b)(r, r).real();
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace collspin
