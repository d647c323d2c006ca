#include "boson.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace collspin {

namespace {

using Triplets = std::vector<Eigen::Triplet<Complex>>;

SparseC from_triplets(int rows, int cols, Triplets& t) {
  SparseC m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

void require_type(const BosonBasis& basis, LongitudinalKind kind,
                  const char* what) {
  if (basis.kind != kind) {
    throw std::invalid_argument(std::string(what) +
                                " needs the other longitudinal kind");
  }
}

// diagonal operator built from a function of (n, k)
SparseC diag_op(const BosonBasis& basis,
                const std::function<double(int, int)>& f) {
  Triplets t;
  for (int n = 0; n <= basis.n_max; ++n) {
    for (int k = 0; k <= basis.long_max; ++k) {
      const int i = basis.index(n, k);
      const double v = f(n, k);
      if (v != 0.0) t.emplace_back(i, i, Complex(v, 0.0));
    }
  }
  return from_triplets(basis.dim(), basis.dim(), t);
}

}  // namespace

BosonBasis BosonBasis::type_i(int n_max, int m_max, int n_spins) {
  if (n_max < 1 || m_max < 1 || n_spins < 1) {
    throw std::invalid_argument("boson basis cutoffs must be positive");
  }
  return BosonBasis{n_max, LongitudinalKind::TypeI, m_max, n_spins};
}

BosonBasis BosonBasis::type_ii(int n_max, int ell_max, int n_spins) {
  if (n_max < 1 || ell_max < 1 || n_spins < 1) {
    throw std::invalid_argument("boson basis cutoffs must be positive");
  }
  return BosonBasis{n_max, LongitudinalKind::TypeII, ell_max, n_spins};
}

SparseC BosonBasis::identity() const {
  SparseC m(dim(), dim());
  m.setIdentity();
  return m;
}

SparseC BosonBasis::a() const {
  Triplets t;
  for (int n = 1; n <= n_max; ++n) {
    for (int k = 0; k <= long_max; ++k) {
      t.emplace_back(index(n - 1, k), index(n, k),
                     Complex(std::sqrt(double(n)), 0.0));
    }
  }
  return from_triplets(dim(), dim(), t);
}

SparseC BosonBasis::ad() const { return SparseC(a().adjoint()); }

SparseC BosonBasis::num() const {
  return diag_op(*this, [](int n, int) { return double(n); });
}

SparseC BosonBasis::shift() const {
  require_type(*this, LongitudinalKind::TypeII, "shift");
  Triplets t;
  for (int n = 0; n <= n_max; ++n) {
    for (int k = 0; k < long_max; ++k) {
      t.emplace_back(index(n, k + 1), index(n, k), Complex(1.0, 0.0));
    }
  }
  return from_triplets(dim(), dim(), t);
}

SparseC BosonBasis::delta_j() const {
  require_type(*this, LongitudinalKind::TypeII, "delta_j");
  return diag_op(*this, [](int, int k) { return -double(k); });
}

SparseC BosonBasis::l_op() const {
  require_type(*this, LongitudinalKind::TypeI, "l_op");
  Triplets t;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int n = 0; n <= n_max; ++n) {
    for (int k = 1; k <= long_max; ++k) {
      const double v = std::sqrt(double(k)) * inv_sqrt2;
      t.emplace_back(index(n, k - 1), index(n, k), Complex(v, 0.0));
      t.emplace_back(index(n, k), index(n, k - 1), Complex(v, 0.0));
    }
  }
  return from_triplets(dim(), dim(), t);
}

SparseC BosonBasis::q_op() const {
  require_type(*this, LongitudinalKind::TypeI, "q_op");
  Triplets t;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int n = 0; n <= n_max; ++n) {
    for (int k = 1; k <= long_max; ++k) {
      const double v = std::sqrt(double(k)) * inv_sqrt2;
      t.emplace_back(index(n, k - 1), index(n, k), Complex(0.0, -v));
      t.emplace_back(index(n, k), index(n, k - 1), Complex(0.0, v));
    }
  }
  return from_triplets(dim(), dim(), t);
}

SparseC BosonBasis::x_op() const {
  return SparseC((a() + ad()) / std::sqrt(2.0));
}

SparseC BosonBasis::p_op() const {
  return SparseC(Complex(0.0, -1.0) / std::sqrt(2.0) * (a() - ad()));
}

SparseC super_left(const SparseC& x) {
  const int d = int(x.rows());
  Triplets t;
  t.reserve(size_t(x.nonZeros()) * d);
  for (int outer = 0; outer < x.outerSize(); ++outer) {
    for (SparseC::InnerIterator it(x, outer); it; ++it) {
      for (int c = 0; c < d; ++c) {
        t.emplace_back(int(it.row()) * d + c, int(it.col()) * d + c,
                       it.value());
      }
    }
  }
  return from_triplets(d * d, d * d, t);
}

SparseC super_right(const SparseC& y) {
  const int d = int(y.rows());
  Triplets t;
  t.reserve(size_t(y.nonZeros()) * d);
  for (int outer = 0; outer < y.outerSize(); ++outer) {
    for (SparseC::InnerIterator it(y, outer); it; ++it) {
      for (int r = 0; r < d; ++r) {
        t.emplace_back(r * d + int(it.col()), r * d + int(it.row()),
                       it.value());
      }
    }
  }
  return from_triplets(d * d, d * d, t);
}

SparseC super_sandwich(const SparseC& x, const SparseC& y) {
  return SparseC(super_left(x) * super_right(y));
}

SparseC super_commutator(const SparseC& x) {
  return SparseC(super_left(x) - super_right(x));
}

SparseC super_dissipator(const SparseC& o) {
  const SparseC od = SparseC(o.adjoint());
  const SparseC odo = SparseC(od * o);
  return SparseC(super_sandwich(o, od) - 0.5 * super_left(odo) -
                 0.5 * super_right(odo));
}

SparseC conjugate_channel(const SparseC& m, int dim) {
  Triplets t;
  t.reserve(size_t(m.nonZeros()));
  for (int outer = 0; outer < m.outerSize(); ++outer) {
    for (SparseC::InnerIterator it(m, outer); it; ++it) {
      const int r = int(it.row()) / dim, c = int(it.row()) % dim;
      const int a = int(it.col()) / dim, b = int(it.col()) % dim;
      t.emplace_back(c * dim + r, b * dim + a, std::conj(it.value()));
    }
  }
  return from_triplets(dim * dim, dim * dim, t);
}

std::vector<int> boson_vec_sector(const BosonBasis& basis, int dn, int dk) {
  std::vector<int> keep;
  const int d = basis.dim();
  for (int nr = 0; nr <= basis.n_max; ++nr) {
    for (int kr = 0; kr <= basis.long_max; ++kr) {
      const int nc = nr - dn, kc = kr - dk;
      if (nc < 0 || nc > basis.n_max || kc < 0 || kc > basis.long_max) continue;
      keep.push_back(basis.index(nr, kr) * d + basis.index(nc, kc));
    }
  }
  return keep;
}

VectorC boson_trace_row(const BosonBasis& basis) {
  const int d = basis.dim();
  VectorC row = VectorC::Zero(d * d);
  for (int i = 0; i < d; ++i) row(i * d + i) = 1.0;
  return row;
}

Complex boson_vec_trace(const BosonBasis& basis, const VectorC& vec_state) {
  const int d = basis.dim();
  Complex tr = 0.0;
  for (int i = 0; i < d; ++i) tr += vec_state(i * d + i);
  return tr;
}

Complex boson_vec_expectation(const BosonBasis& basis, const SparseC& op,
                              const VectorC& vec_state) {
  const int d = basis.dim();
  Complex val = 0.0;
  for (int outer = 0; outer < op.outerSize(); ++outer) {
    for (SparseC::InnerIterator it(op, outer); it; ++it) {
      val += it.value() * vec_state(int(it.col()) * d + int(it.row()));
    }
  }
  return val;
}

double boson_edge_population(const BosonBasis& basis,
                             const VectorC& vec_state) {
  const int d = basis.dim();
  double worst = 0.0;
  for (int n = 0; n <= basis.n_max; ++n) {
    for (int k = 0; k <= basis.long_max; ++k) {
      if (n != basis.n_max && k != basis.long_max) continue;
      const int i = basis.index(n, k);
      worst = std::max(worst, std::abs(vec_state(i * d + i)));
    }
  }
  return worst;
}

SparseC table1_term(const BosonBasis& basis, BosonTermKind kind, double j) {
  require_type(basis, LongitudinalKind::TypeI, "table1_term");
  if (j <= 0.0 || j > 1.0) {
    throw std::invalid_argument("mean field length j must be in (0, 1]");
  }
  const double rn = std::sqrt(double(basis.n_spins));
  const double sj = std::sqrt(j);
  const Complex im(0.0, 1.0);
  const SparseC a = basis.a(), ad = basis.ad();
  const SparseC l = basis.l_op(), q = basis.q_op();
  const SparseC da = super_dissipator(a), dad = super_dissipator(ad);
  const SparseC comm_q = super_commutator(q);
  switch (kind) {
    case BosonTermKind::Dephasing:
      return SparseC((j + 1.0) / (2.0 * j) * da +
                     (1.0 - j) / (2.0 * j) * dad);
    case BosonTermKind::Pumping:
      return SparseC(
          (1.0 / j) * da +
          (1.0 - j) / 4.0 * (comm_q * (super_right(q) - super_left(q))) +
          0.5 * im * (comm_q * (super_left(l) + super_right(l))) -
          0.5 * im * rn * (1.0 - j) * comm_q);
    case BosonTermKind::Decay:
      return SparseC(
          (1.0 / j) * dad +
          (1.0 + j) / 4.0 * (comm_q * (super_right(q) - super_left(q))) +
          0.5 * im * (comm_q * (super_left(l) + super_right(l))) +
          0.5 * im * rn * (1.0 + j) * comm_q);
    case BosonTermKind::PlusPlus: {
      const SparseC a2 = SparseC(a * a);
      return SparseC((1.0 / j) * (super_sandwich(a, a) -
                                  0.5 * (super_left(a2) + super_right(a2))) -
                     0.5 * super_commutator(a2));
    }
    case BosonTermKind::PlusZ:
      return SparseC(rn * (2.0 - j) / (4.0 * sj) * super_commutator(a) -
                     (2.0 + j) / (4.0 * j * sj) *
                         (super_right(l) * super_commutator(a)) +
                     im * (1.0 - j) / (2.0 * sj) * (super_right(a) * comm_q));
    case BosonTermKind::MinusZ:
      return SparseC(rn * (j + 2.0) / (4.0 * sj) * super_commutator(ad) -
                     (2.0 - j) / (4.0 * j * sj) *
                         (super_right(l) * super_commutator(ad)) -
                     im * (1.0 + j) / (2.0 * sj) * (super_right(ad) * comm_q));
  }
  throw std::logic_error("unreachable");
}

SparseC table2_term(const BosonBasis& basis, BosonTermKind kind) {
  require_type(basis, LongitudinalKind::TypeII, "table2_term");
  const double nn = double(basis.n_spins);
  const SparseC a = basis.a(), ad = basis.ad(), n = basis.num();
  const SparseC s = basis.shift(), sd = SparseC(s.adjoint());
  const SparseC dj = basis.delta_j();
  switch (kind) {
    case BosonTermKind::Dephasing: {
      SparseC m = super_sandwich(SparseC(a * s), SparseC(sd * ad));
      m -= 0.5 * (super_left(n) + super_right(n));
      const int d2 = basis.dim() * basis.dim();
      SparseC id(d2, d2);
      id.setIdentity();
      return SparseC(m + 0.25 * nn * id);
    }
    case BosonTermKind::Pumping:
      return SparseC(super_sandwich(a, ad) -
                     super_sandwich(SparseC(sd * dj), s));
    case BosonTermKind::Decay:
      return SparseC(nn * super_sandwich(s, sd));
    case BosonTermKind::PlusPlus:
      return SparseC(super_sandwich(a, a) -
                     super_sandwich(SparseC(a * a * s), sd));
    case BosonTermKind::PlusZ:
      return SparseC(0.5 * std::sqrt(nn) * super_left(a));
    case BosonTermKind::MinusZ:
      return SparseC(std::sqrt(nn) *
                     (0.5 * super_left(ad) -
                      super_sandwich(s, SparseC(sd * ad))));
  }
  throw std::logic_error("unreachable");
}

SparseC table3_term(const BosonBasis& basis, BosonTermKind kind) {
  require_type(basis, LongitudinalKind::TypeII, "table3_term");
  const double nn = double(basis.n_spins);
  const double inv_n = 1.0 / nn, inv_rn = 1.0 / std::sqrt(nn);
  const SparseC a = basis.a(), ad = basis.ad(), n = basis.num();
  const SparseC s = basis.shift(), sd = SparseC(s.adjoint());
  const SparseC dj = basis.delta_j();
  switch (kind) {
    case BosonTermKind::Dephasing: {
      SparseC m = table2_term(basis, kind);
      m -= inv_n * (super_sandwich(SparseC(a * s * dj), SparseC(sd * ad)) +
                    super_sandwich(SparseC(ad * sd * dj), SparseC(s * a)) +
                    0.5 * super_sandwich(SparseC(a * n * s), SparseC(sd * ad)) +
                    0.5 * super_sandwich(SparseC(a * s), SparseC(sd * n * ad)));
      m += inv_n * (super_left(dj) + super_left(SparseC(dj * n)) +
                    super_sandwich(dj, n) + super_sandwich(n, n));
      return m;
    }
    case BosonTermKind::Pumping: {
      SparseC m = table2_term(basis, kind);
      m -= inv_n * (2.0 * super_sandwich(SparseC(dj * a), ad) +
                    0.5 * super_sandwich(SparseC(n * a), ad) +
                    0.5 * super_sandwich(a, SparseC(ad * n)));
      m += inv_n * (super_sandwich(SparseC(n * sd * dj), s) +
                    super_sandwich(SparseC(sd * dj), SparseC(s * n)) +
                    super_sandwich(SparseC(a * a * s), SparseC(sd * ad * ad)));
      return m;
    }
    case BosonTermKind::Decay:
      return SparseC(table2_term(basis, kind) +
                     super_sandwich(SparseC(dj * s), sd) +
                     super_sandwich(ad, a) -
                     super_sandwich(SparseC(n * s), sd) -
                     super_sandwich(s, SparseC(sd * n)));
    case BosonTermKind::PlusPlus:
      return table2_term(basis, kind);
    // The two mixed rows below are the 1/sqrt(N) expansions of the exact
    // number-phase channels, term-exact at this order on the whole space.
    // On states without spin-length coherence they agree with the common
    // tabulated form up to a phase factor in one term.
    case BosonTermKind::PlusZ: {
      SparseC m = table2_term(basis, kind);
      m += inv_rn * (super_sandwich(a, dj) - super_sandwich(a, n) -
                     1.5 * super_left(SparseC(dj * a)) -
                     0.25 * super_left(SparseC(n * a)));
      m += inv_rn * super_sandwich(SparseC(a * a * s), SparseC(sd * ad));
      m += inv_rn * super_sandwich(SparseC(sd * dj), SparseC(a * s));
      return m;
    }
    case BosonTermKind::MinusZ: {
      SparseC m = table2_term(basis, kind);
      m += inv_rn * (super_sandwich(ad, dj) - super_sandwich(ad, n) -
                     1.5 * super_left(SparseC(dj * ad)) -
                     0.25 * super_left(SparseC(ad * n)));
      m += inv_rn *
           (super_sandwich(SparseC(s * (dj + n)), SparseC(sd * ad)) +
            0.5 * super_sandwich(s, SparseC(sd * ad)) -
            super_sandwich(s, SparseC(dj * sd * ad)) +
            0.5 * super_sandwich(s, SparseC(n * sd * ad)));
      return m;
    }
  }
  throw std::logic_error("unreachable");
}

double table1_sqrtn_residual(double w, double gamma, double j, int n_spins) {
  return 0.5 * std::sqrt(double(n_spins)) *
         std::abs(gamma * (1.0 + j) - w * (1.0 - j));
}

SparseC boson_jplus(const BosonBasis& basis, ExpansionOrder order) {
  require_type(basis, LongitudinalKind::TypeII, "boson_jplus");
  const double rn = std::sqrt(double(basis.n_spins));
  SparseC jp = SparseC(rn * basis.a());
  if (order == ExpansionOrder::NLO) {
    jp += SparseC((1.0 / rn) * (basis.delta_j() * basis.a() -
                                0.5 * basis.num() * basis.a()));
  }
  return jp;
}

SparseC boson_jz(const BosonBasis& basis) {
  require_type(basis, LongitudinalKind::TypeII, "boson_jz");
  return SparseC(0.5 * double(basis.n_spins) * basis.identity() +
                 basis.delta_j() - basis.num());
}

SparseC exact_hp_channel(const BosonBasis& basis, Channel q, Channel r) {
  require_type(basis, LongitudinalKind::TypeII, "exact_hp_channel");
  const double nn = double(basis.n_spins);
  if (basis.n_max + 2 * basis.long_max + 1 > basis.n_spins) {
    throw std::invalid_argument(
        "exact channel would take an operator square root of a negative "
        "number; shrink the cutoffs or raise N");
  }
  if (q == Channel::Plus && r == Channel::Minus) {
    return conjugate_channel(
        exact_hp_channel(basis, Channel::Minus, Channel::Plus), basis.dim());
  }
  if (q == Channel::Z && r == Channel::Minus) {
    return conjugate_channel(exact_hp_channel(basis, Channel::Minus, Channel::Z),
                             basis.dim());
  }
  if (q == Channel::Z && r == Channel::Plus) {
    return conjugate_channel(exact_hp_channel(basis, Channel::Plus, Channel::Z),
                             basis.dim());
  }
  const SparseC a = basis.a(), ad = basis.ad();
  const SparseC s = basis.shift(), sd = SparseC(s.adjoint());
  // J = N/2 + delta J = N/2 - k
  const auto jval = [nn](int k) { return 0.5 * nn - double(k); };
  const SparseC jmn = diag_op(
      basis, [&](int n, int k) { return jval(k) - double(n); });
  const auto root = [&](double offset) {
    return diag_op(basis, [&, offset](int n, int k) {
      return std::sqrt(2.0 * jval(k) + offset - double(n));
    });
  };
  const SparseC r0 = root(0.0);    // sqrt(2J - n)
  const SparseC rm1 = root(-1.0);  // sqrt(2J - 1 - n)
  const SparseC rp1 = root(1.0);   // sqrt(2J + 1 - n)
  const SparseC rp2 = root(2.0);   // sqrt(2J + 2 - n)
  const SparseC e_pref = diag_op(basis, [&](int, int k) {
    const double jj = jval(k);
    return (1.0 + 0.5 * nn) / (2.0 * jj * (jj + 1.0));
  });
  const SparseC f_pref = diag_op(basis, [&](int, int k) {
    const double jj = jval(k);
    return (0.5 * nn + jj + 2.0) / (2.0 * (jj + 1.0) * (2.0 * jj + 3.0));
  });
  const SparseC g_pref = diag_op(basis, [&](int, int k) {
    const double jj = jval(k);
    return (0.5 * nn - jj + 1.0) / (2.0 * jj * (2.0 * jj - 1.0));
  });
  const auto term = [&](const SparseC& pref, const SparseC& x,
                        const SparseC& y) {
    return super_sandwich(SparseC(pref * x), y);
  };
  if (q == Channel::Z && r == Channel::Z) {
    return SparseC(term(e_pref, jmn, jmn) +
                   term(f_pref, SparseC(a * rp2 * s), SparseC(sd * rp2 * ad)) +
                   term(g_pref, SparseC(r0 * sd * ad), SparseC(a * s * r0)));
  }
  if (q == Channel::Plus && r == Channel::Plus) {  // sigma+ rho sigma-
    return SparseC(term(e_pref, SparseC(r0 * a), SparseC(ad * r0)) +
                   term(f_pref, SparseC(a * a * s), SparseC(sd * ad * ad)) +
                   term(g_pref, SparseC(r0 * rm1 * sd), SparseC(s * r0 * rm1)));
  }
  if (q == Channel::Minus && r == Channel::Minus) {  // sigma- rho sigma+
    return SparseC(term(e_pref, SparseC(ad * r0), SparseC(r0 * a)) +
                   term(f_pref, SparseC(rp2 * rp1 * s), SparseC(sd * rp2 * rp1)) +
                   term(g_pref, SparseC(ad * ad * sd), SparseC(s * a * a)));
  }
  if (q == Channel::Minus && r == Channel::Plus) {  // sigma- rho sigma-
    return SparseC(term(e_pref, SparseC(ad * r0), SparseC(ad * r0)) -
                   term(f_pref, SparseC(rp2 * rp1 * s), SparseC(sd * ad * ad)) -
                   term(g_pref, SparseC(ad * ad * sd), SparseC(s * r0 * rm1)));
  }
  if (q == Channel::Minus && r == Channel::Z) {  // sigma- rho sz
    return SparseC(term(e_pref, SparseC(ad * r0), jmn) -
                   term(f_pref, SparseC(rp2 * rp1 * s), SparseC(sd * rp2 * ad)) +
                   term(g_pref, SparseC(ad * ad * sd), SparseC(a * s * r0)));
  }
  if (q == Channel::Plus && r == Channel::Z) {  // sigma+ rho sz
    return SparseC(term(e_pref, SparseC(r0 * a), jmn) +
                   term(f_pref, SparseC(a * a * s), SparseC(sd * rp2 * ad)) -
                   term(g_pref, SparseC(r0 * rm1 * sd), SparseC(a * s * r0)));
  }
  throw std::logic_error("unreachable");
}

SparseC build_laser_boson_liouvillian(const BosonBasis& basis, double w,
                                      double w_c, ExpansionOrder order) {
  require_type(basis, LongitudinalKind::TypeII, "laser boson liouvillian");
  const SparseC a = basis.a(), ad = basis.ad(), n = basis.num();
  const SparseC s = basis.shift(), sd = SparseC(s.adjoint());
  const SparseC dj = basis.delta_j();
  const SparseC long_relax =
      SparseC(super_left(dj) - super_sandwich(SparseC(sd * dj), s));
  if (order == ExpansionOrder::LO) {
    return SparseC(w * super_dissipator(a) + w_c * super_dissipator(ad) +
                   w * long_relax);
  }
  const double inv_n = 1.0 / double(basis.n_spins);
  const SparseC d_as = super_dissipator(SparseC(a * s));
  SparseC m = SparseC(w * super_dissipator(a) + w_c * long_relax +
                      w_c * super_dissipator(ad));
  m += w_c * inv_n * SparseC(d_as * super_sandwich(a, ad));
  m -= 2.0 * w_c * inv_n *
       SparseC(super_sandwich(sd, s) * (d_as * super_left(dj)));
  m += 2.0 * w_c * inv_n * SparseC(super_dissipator(ad) * super_left(dj));
  const SparseC aadda = SparseC(a * ad * ad * a);
  m += 0.5 * w_c * inv_n *
       SparseC(super_left(aadda) + super_right(aadda) -
               super_sandwich(SparseC(ad * n), a) -
               super_sandwich(ad, SparseC(n * a)));
  return m;
}

SparseC build_tfim_boson_liouvillian(const BosonBasis& basis, double delta,
                                     double g, double gamma) {
  require_type(basis, LongitudinalKind::TypeII, "tfim boson liouvillian");
  const SparseC x = basis.x_op(), p = basis.p_op();
  const SparseC dj = basis.delta_j();
  const SparseC s = basis.shift(), sd = SparseC(s.adjoint());
  const SparseC h = SparseC(delta * p * p + (delta - g) * x * x);
  SparseC m = SparseC(Complex(0.0, -0.5) * super_commutator(h));
  m += gamma * super_dissipator(basis.a());
  m += Complex(0.0, delta) * super_commutator(dj);
  m += gamma * SparseC(super_left(dj) - super_sandwich(SparseC(sd * dj), s));
  return m;
}

}  // namespace collspin
