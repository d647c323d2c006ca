#include "brute.hpp"

#include <cmath>
#include <stdexcept>

namespace collspin::oracle {

namespace {

MatrixC kron(const MatrixC& a, const MatrixC& b) {
  MatrixC out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Basis convention per site: index 0 = |up>, 1 = |down>.
MatrixC single_spin(Channel c) {
  MatrixC m = MatrixC::Zero(2, 2);
  switch (c) {
    case Channel::Plus:
      m(0, 1) = 1.0;
      break;
    case Channel::Minus:
      m(1, 0) = 1.0;
      break;
    case Channel::Z:
      m(0, 0) = 0.5;
      m(1, 1) = -0.5;
      break;
  }
  return m;
}

MatrixC embed(int n, int site, const MatrixC& op) {
  MatrixC out = MatrixC::Identity(1, 1);
  for (int i = 0; i < n; ++i) {
    out = kron(out, i == site ? op : MatrixC::Identity(2, 2));
  }
  return out;
}

}  // namespace

FullSpaceModel FullSpaceModel::build(int n_spins, const HamiltonianSpec& h,
                                     const CollectiveJumpSpec& collective,
                                     const LocalRateMatrix& local) {
  if (n_spins < 1 || n_spins > 5) {
    throw std::invalid_argument("FullSpaceModel: N must be in 1..5");
  }
  FullSpaceModel m;
  m.n_spins = n_spins;
  m.gamma = local.gamma;
  for (int i = 0; i < n_spins; ++i) {
    m.site_ops.push_back({embed(n_spins, i, single_spin(Channel::Plus)),
                          embed(n_spins, i, single_spin(Channel::Minus)),
                          embed(n_spins, i, single_spin(Channel::Z))});
  }
  MatrixC jx = full_space_collective(n_spins, CollectiveKind::Jx);
  MatrixC jy = full_space_collective(n_spins, CollectiveKind::Jy);
  MatrixC jz = full_space_collective(n_spins, CollectiveKind::Jz);
  auto quad = [&](const HamiltonianSpec::Quadratic& q) {
    return q.over_n ? q.coeff / n_spins : q.coeff;
  };
  m.hamiltonian = h.hx * jx + h.hy * jy + h.hz * jz +
                  quad(h.jx2) * jx * jx + quad(h.jy2) * jy * jy +
                  quad(h.jz2) * jz * jz;
  if (h.jpjm.coeff != 0.0) {
    MatrixC jp = full_space_collective(n_spins, CollectiveKind::Jplus);
    m.hamiltonian += quad(h.jpjm) * jp * jp.adjoint();
  }
  for (const auto& jump : collective) {
    if (jump.rate != 0.0) {
      m.collective_jumps.emplace_back(
          jump.rate, full_space_collective(n_spins, jump.kind));
    }
  }
  return m;
}

MatrixC FullSpaceModel::rhs(const MatrixC& rho) const {
  const Complex i_unit(0.0, 1.0);
  MatrixC out = -i_unit * (hamiltonian * rho - rho * hamiltonian);
  for (const auto& [rate, a] : collective_jumps) {
    MatrixC ad = a.adjoint();
    MatrixC ada = ad * a;
    out += rate * (a * rho * ad - 0.5 * (ada * rho + rho * ada));
  }
  for (int al = 0; al < 3; ++al) {
    for (int be = 0; be < 3; ++be) {
      const Complex g = gamma(al, be);
      if (g == Complex(0.0)) continue;
      for (const auto& ops : site_ops) {
        const MatrixC& sa = ops[al];
        const MatrixC sbd = ops[be].adjoint();
        out += g * (sa * rho * sbd - 0.5 * (sbd * sa * rho + rho * sbd * sa));
      }
    }
  }
  return out;
}

MatrixC FullSpaceModel::evolve(MatrixC rho, double t, int steps) const {
  const double dt = t / steps;
  for (int s = 0; s < steps; ++s) {
    MatrixC k1 = rhs(rho);
    MatrixC k2 = rhs(rho + 0.5 * dt * k1);
    MatrixC k3 = rhs(rho + 0.5 * dt * k2);
    MatrixC k4 = rhs(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

MatrixC product_state(int n_spins, double theta, double phi) {
  VectorC single(2);
  single(0) = std::cos(0.5 * theta);
  single(1) = std::exp(Complex(0.0, phi)) * std::sin(0.5 * theta);
  VectorC psi = VectorC::Ones(1);
  for (int i = 0; i < n_spins; ++i) {
    VectorC next(psi.size() * 2);
    for (int k = 0; k < psi.size(); ++k) {
      next(2 * k) = psi(k) * single(0);
      next(2 * k + 1) = psi(k) * single(1);
    }
    psi = next;
  }
  return psi * psi.adjoint();
}

MatrixC full_space_collective(int n_spins, CollectiveKind kind) {
  const int dim = 1 << n_spins;
  MatrixC out = MatrixC::Zero(dim, dim);
  const Complex i_unit(0.0, 1.0);
  for (int i = 0; i < n_spins; ++i) {
    MatrixC sp = embed(n_spins, i, single_spin(Channel::Plus));
    MatrixC sm = embed(n_spins, i, single_spin(Channel::Minus));
    MatrixC sz = embed(n_spins, i, single_spin(Channel::Z));
    switch (kind) {
      case CollectiveKind::Jx:
        out += 0.5 * (sp + sm);
        break;
      case CollectiveKind::Jy:
        out += -0.5 * i_unit * (sp - sm);
        break;
      case CollectiveKind::Jz:
        out += sz;
        break;
      case CollectiveKind::Jplus:
        out += sp;
        break;
      case CollectiveKind::Jminus:
        out += sm;
        break;
      case CollectiveKind::Jsq:
        throw std::invalid_argument("full_space_collective: build Jsq from components");
    }
  }
  return out;
}

double permutation_symmetry_error(const MatrixC& rho, int n_spins) {
  const int dim = 1 << n_spins;
  double worst = 0.0;
  for (int i = 0; i < n_spins; ++i) {
    for (int j = i + 1; j < n_spins; ++j) {
      // permutation matrix swapping the bits of sites i and j
      MatrixC u = MatrixC::Zero(dim, dim);
      for (int s = 0; s < dim; ++s) {
        const int bi = (s >> (n_spins - 1 - i)) & 1;
        const int bj = (s >> (n_spins - 1 - j)) & 1;
        int t = s & ~(1 << (n_spins - 1 - i)) & ~(1 << (n_spins - 1 - j));
        t |= bj << (n_spins - 1 - i);
        t |= bi << (n_spins - 1 - j);
        u(t, s) = 1.0;
      }
      worst = std::max(worst, (u * rho - rho * u).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

SchwingerSector SchwingerSector::build(int n_spins) {
  if (n_spins < 1 || n_spins > 12) {
    throw std::invalid_argument("SchwingerSector: N must be in 1..12");
  }
  SchwingerSector s;
  s.n_spins = n_spins;
  for (int two_j = n_spins; two_j >= 0; two_j -= 2) {
    for (int r = 0; r <= two_j; ++r) {
      // M = -J + r, so n_a = J - M = two_j - r, n_b = J + M = r
      s.states.emplace_back(two_j - r, r);
    }
  }
  return s;
}

int SchwingerSector::index(int n_a, int n_b) const {
  for (int k = 0; k < dim(); ++k) {
    if (states[k].first == n_a && states[k].second == n_b) return k;
  }
  return -1;
}

namespace {

// Dense sector matrices for the quadratic mode operators.
MatrixC sector_op(const SchwingerSector& s, char which, Channel q) {
  const int d = s.dim();
  MatrixC m = MatrixC::Zero(d, d);
  auto put = [&](int na_t, int nb_t, int col, double amp) {
    const int row = s.index(na_t, nb_t);
    if (row >= 0) m(row, col) += amp;
  };
  for (int col = 0; col < d; ++col) {
    const auto [na, nb] = s.states[col];
    if (which == 'J') {
      switch (q) {
        case Channel::Plus:  // b^dag a
          if (na >= 1) put(na - 1, nb + 1, col, std::sqrt(double(na) * (nb + 1)));
          break;
        case Channel::Minus:  // a^dag b
          if (nb >= 1) put(na + 1, nb - 1, col, std::sqrt(double(nb) * (na + 1)));
          break;
        case Channel::Z:
          put(na, nb, col, 0.5 * (nb - na));
          break;
      }
    } else if (which == 'K') {
      switch (q) {
        case Channel::Plus:  // -a^2
          if (na >= 2) put(na - 2, nb, col, -std::sqrt(double(na) * (na - 1)));
          break;
        case Channel::Minus:  // b^2
          if (nb >= 2) put(na, nb - 2, col, std::sqrt(double(nb) * (nb - 1)));
          break;
        case Channel::Z:  // -ab
          if (na >= 1 && nb >= 1)
            put(na - 1, nb - 1, col, -std::sqrt(double(na) * nb));
          break;
      }
    } else {  // 'L' = K^dag under + <-> -
      switch (q) {
        case Channel::Plus:  // b^dag^2
          put(na, nb + 2, col, std::sqrt(double(nb + 1) * (nb + 2)));
          break;
        case Channel::Minus:  // -a^dag^2
          put(na + 2, nb, col, -std::sqrt(double(na + 1) * (na + 2)));
          break;
        case Channel::Z:  // -a^dag b^dag
          put(na + 1, nb + 1, col, -std::sqrt(double(na + 1) * (nb + 1)));
          break;
      }
    }
  }
  return m;
}

}  // namespace

MatrixC schwinger_channel(const DickeBasis& basis, Channel q, Channel r) {
  const int n = basis.n_spins();
  const SchwingerSector sec = SchwingerSector::build(n);
  const int d = sec.dim();
  const double half_n = 0.5 * n;

  // spin length of each sector state
  std::vector<double> jval(d);
  for (int k = 0; k < d; ++k) {
    jval[k] = 0.5 * (sec.states[k].first + sec.states[k].second);
  }
  auto e_of = [&](double J) {
    return J > 0 ? (1.0 + half_n) / (2.0 * J * (J + 1.0)) : 0.0;
  };
  auto f_of = [&](double J) {
    return (half_n + J + 2.0) / (2.0 * (J + 1.0) * (2.0 * J + 3.0));
  };
  auto g_of = [&](double J) {
    return J >= 1.0 ? (half_n - J + 1.0) / (2.0 * J * (2.0 * J - 1.0)) : 0.0;
  };

  MatrixC jq = sector_op(sec, 'J', q), jr = sector_op(sec, 'J', r);
  MatrixC kq = sector_op(sec, 'K', q), kr = sector_op(sec, 'K', r);
  MatrixC lq = sector_op(sec, 'L', q), lr = sector_op(sec, 'L', r);

  // Pair-space superoperator with prefactors applied to the output sector.
  const auto stacked = basis.stacked_dim();
  MatrixC out = MatrixC::Zero(stacked, stacked);

  // map sector state index -> (block, row-in-block)
  std::vector<std::pair<int, int>> loc(d);
  for (int k = 0; k < d; ++k) {
    const auto [na, nb] = sec.states[k];
    const int b = basis.block_index(na + nb);
    loc[k] = {b, nb};  // row counts M from -J, and n_b = J + M
  }

  auto accumulate = [&](const MatrixC& x, const MatrixC& y, auto pf) {
    for (int rr = 0; rr < d; ++rr) {
      for (int pp = 0; pp < d; ++pp) {
        if (x(rr, pp) == Complex(0.0)) continue;
        for (int cc = 0; cc < d; ++cc) {
          for (int ss = 0; ss < d; ++ss) {
            if (y(cc, ss) == Complex(0.0)) continue;
            // output pair (rr, cc), input pair (pp, ss); only same-block
            // pairs live on the Dicke triangle
            if (loc[rr].first != loc[cc].first) continue;
            if (loc[pp].first != loc[ss].first) continue;
            const Complex val =
                pf(jval[rr]) * x(rr, pp) * std::conj(y(cc, ss));
            out(basis.stacked_index(loc[rr].first, loc[rr].second,
                                    loc[cc].second),
                basis.stacked_index(loc[pp].first, loc[pp].second,
                                    loc[ss].second)) += val;
          }
        }
      }
    }
  };
  accumulate(jq, jr, e_of);
  accumulate(kq, kr, f_of);
  accumulate(lq, lr, g_of);
  return out;
}

}  // namespace collspin::oracle
