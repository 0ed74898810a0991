#include "quatlat/zlattice.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "quatlat/error.hpp"

namespace quatlat::lat {

namespace {

void fdiv_mod(mpz_class& x, const mpz_class& m) { mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t()); }

bool is_zero_vec(const ZVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

long double to_ld(const mpz_class& z) {
  if (mpz_fits_slong_p(z.get_mpz_t())) return static_cast<long double>(z.get_si());
  const long bits = static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2));
  const long shift = bits - 62;
  mpz_class t;
  mpz_tdiv_q_2exp(t.get_mpz_t(), z.get_mpz_t(), shift);
  return std::ldexp(static_cast<long double>(t.get_si()), static_cast<int>(shift));
}

}  // namespace

HnfBuilder::HnfBuilder(std::size_t dim) : dim_(dim), piv_(dim) {}

void HnfBuilder::reduce_mod(ZVec& v, std::size_t from) const {
  if (modulus_ != 0) {
    for (std::size_t k = from; k < dim_; ++k) fdiv_mod(v[k], modulus_);
    return;
  }
  // Exact mode: keep entries at pivot columns in [0, pivot).
  mpz_class q;
  for (std::size_t k = from; k < dim_; ++k) {
    const ZVec& P = piv_[k];
    if (P.empty() || v[k] == 0) continue;
    mpz_fdiv_q(q.get_mpz_t(), v[k].get_mpz_t(), P[k].get_mpz_t());
    if (q == 0) continue;
    for (std::size_t c = k; c < dim_; ++c) v[c] -= q * P[c];
  }
}

void HnfBuilder::update_modulus() {
  if (rank_ < dim_) return;
  mpz_class prod = 1;
  for (std::size_t j = 0; j < dim_; ++j) prod *= piv_[j][j];
  modulus_ = modulus_ == 0 ? prod : gcd(modulus_, prod);
  for (std::size_t j = 0; j < dim_; ++j) reduce_mod(piv_[j], j + 1);
}

bool HnfBuilder::insert(ZVec v) {
  if (v.size() != dim_) throw Error(ErrorKind::Internal, "vector length does not match lattice dimension");
  reduce_mod(v, 0);
  bool changed = false;
  for (std::size_t j = 0; j < dim_; ++j) {
    if (v[j] == 0) continue;
    if (piv_[j].empty()) {
      if (v[j] < 0)
        for (auto& x : v) x = -x;
      reduce_mod(v, j + 1);
      piv_[j] = std::move(v);
      ++rank_;
      if (modulus_ == 0)
        for (std::size_t i = 0; i < j; ++i)
          if (!piv_[i].empty()) reduce_mod(piv_[i], i + 1);
      update_modulus();
      return true;
    }
    ZVec& P = piv_[j];
    const mpz_class p = P[j];
    const mpz_class a = v[j];
    if (mpz_divisible_p(a.get_mpz_t(), p.get_mpz_t())) {
      const mpz_class q = a / p;
      for (std::size_t k = j; k < dim_; ++k) v[k] -= q * P[k];
    } else {
      mpz_class g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), p.get_mpz_t(), a.get_mpz_t());
      const mpz_class pg = p / g, ag = a / g;
      for (std::size_t k = j; k < dim_; ++k) {
        mpz_class np = s * P[k] + t * v[k];
        v[k] = ag * P[k] - pg * v[k];
        P[k] = std::move(np);
      }
      if (P[j] < 0)
        for (auto& x : P) x = -x;
      reduce_mod(P, j + 1);
      if (modulus_ == 0)
        for (std::size_t i = 0; i < j; ++i)
          if (!piv_[i].empty()) reduce_mod(piv_[i], i + 1);
      changed = true;
    }
    reduce_mod(v, j + 1);
  }
  if (changed) update_modulus();
  return changed;
}

bool HnfBuilder::contains(const ZVec& v0) const {
  ZVec v = v0;
  reduce_mod(v, 0);
  for (std::size_t j = 0; j < dim_; ++j) {
    if (v[j] == 0) continue;
    if (piv_[j].empty()) return false;
    const ZVec& P = piv_[j];
    if (modulus_ == 0) {
      if (!mpz_divisible_p(v[j].get_mpz_t(), P[j].get_mpz_t())) return false;
      const mpz_class q = v[j] / P[j];
      for (std::size_t k = j; k < dim_; ++k) v[k] -= q * P[k];
    } else {
      // v[j] must be a combination x*P[j] + y*modulus.
      mpz_class g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), P[j].get_mpz_t(), modulus_.get_mpz_t());
      if (!mpz_divisible_p(v[j].get_mpz_t(), g.get_mpz_t())) return false;
      const mpz_class x = (v[j] / g) * s;
      for (std::size_t k = j; k < dim_; ++k) v[k] -= x * P[k];
      v[j] = 0;
      reduce_mod(v, j + 1);
    }
  }
  return true;
}

ZMat HnfBuilder::result() const {
  std::vector<ZVec> piv = piv_;
  const mpz_class M = modulus_;
  if (M != 0) {
    // Fold in M e_j one column at a time; later columns may still be reduced
    // modulo M since their M e_k are inserted afterwards.
    auto red = [&](ZVec& v, std::size_t from) {
      for (std::size_t k = from; k < dim_; ++k) fdiv_mod(v[k], M);
    };
    for (std::size_t j = 0; j < dim_; ++j) {
      ZVec v(dim_, 0);
      v[j] = M;
      for (std::size_t c = j; c < dim_; ++c) {
        if (v[c] == 0) continue;
        if (piv[c].empty()) {
          piv[c] = v;
          break;
        }
        ZVec& P = piv[c];
        const mpz_class p = P[c], a = v[c];
        if (mpz_divisible_p(a.get_mpz_t(), p.get_mpz_t())) {
          const mpz_class q = a / p;
          for (std::size_t k = c; k < dim_; ++k) v[k] -= q * P[k];
        } else {
          mpz_class g, s, t;
          mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), p.get_mpz_t(), a.get_mpz_t());
          const mpz_class pg = p / g, ag = a / g;
          for (std::size_t k = c; k < dim_; ++k) {
            mpz_class np = s * P[k] + t * v[k];
            v[k] = ag * P[k] - pg * v[k];
            P[k] = std::move(np);
          }
          if (P[c] < 0)
            for (auto& x : P) x = -x;
          red(P, std::max(c, j) + 1);
        }
        red(v, j + 1);
      }
    }
  }
  ZMat rows;
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < dim_; ++j) {
    if (piv[j].empty()) continue;
    rows.push_back(piv[j]);
    cols.push_back(j);
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t j = cols[r];
    const mpz_class& p = rows[r][j];
    for (std::size_t i = 0; i < r; ++i) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), rows[i][j].get_mpz_t(), p.get_mpz_t());
      if (q == 0) continue;
      for (std::size_t k = j; k < dim_; ++k) rows[i][k] -= q * rows[r][k];
    }
  }
  return rows;
}

void HnfBuilder::set_modulus(const mpz_class& m) {
  if (m == 0) return;
  modulus_ = modulus_ == 0 ? mpz_class(abs(m)) : mpz_class(gcd(modulus_, m));
  for (std::size_t j = 0; j < dim_; ++j)
    if (!piv_[j].empty()) reduce_mod(piv_[j], j + 1);
}

namespace {

// Determinant of a full-rank subset of the rows (chosen modulo a large prime),
// or 0 if none is found. Any nonzero value is a multiple of the index of the
// spanned lattice.
mpz_class full_rank_minor(const ZMat& rows, std::size_t dim) {
  if (rows.size() < dim) return 0;
  const std::uint64_t q = 2305843009213693951ULL;  // 2^61 - 1
  auto mm = [&](std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % q);
  };
  std::vector<std::vector<std::uint64_t>> ech;
  std::vector<std::size_t> pc, chosen;
  for (std::size_t r = 0; r < rows.size() && chosen.size() < dim; ++r) {
    std::vector<std::uint64_t> v(dim);
    for (std::size_t k = 0; k < dim; ++k) v[k] = nt::fp_mod_mpz(rows[r][k], q);
    for (std::size_t e = 0; e < ech.size(); ++e) {
      const std::uint64_t f = v[pc[e]];
      if (f == 0) continue;
      for (std::size_t k = 0; k < dim; ++k) v[k] = (v[k] + q - mm(f, ech[e][k])) % q;
    }
    std::size_t c = 0;
    while (c < dim && v[c] == 0) ++c;
    if (c == dim) continue;
    const std::uint64_t inv = nt::fp_inv(v[c], q);
    for (auto& x : v) x = mm(x, inv);
    ech.push_back(std::move(v));
    pc.push_back(c);
    chosen.push_back(r);
  }
  if (chosen.size() < dim) return 0;
  ZMat sub;
  for (std::size_t r : chosen) sub.push_back(rows[r]);
  return abs(nt::det(sub));
}

ZMat hnf_modular(const ZMat& rows, std::size_t dim) {
  HnfBuilder b(dim);
  if (rows.size() > dim) b.set_modulus(full_rank_minor(rows, dim));
  for (const auto& r : rows) b.insert(r);
  return b.result();
}

}  // namespace

ZMat hnf(const ZMat& rows) {
  if (rows.empty()) return {};
  return hnf_modular(rows, rows[0].size());
}

QMat RatLattice::basis() const {
  QMat out;
  for (const auto& r : rows) {
    QVec q(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) {
      q[k] = mpq_class(r[k], denom);
      q[k].canonicalize();
    }
    out.push_back(std::move(q));
  }
  return out;
}

RatLattice make_lattice(const ZMat& rows, const mpz_class& denom, std::size_t dim) {
  RatLattice lat;
  lat.dim = dim;
  lat.rows = hnf_modular(rows, dim);
  mpz_class g = denom;
  for (const auto& r : lat.rows)
    for (const auto& x : r) g = gcd(g, x);
  if (lat.rows.empty()) g = denom;
  lat.denom = denom / g;
  if (g != 1)
    for (auto& r : lat.rows)
      for (auto& x : r) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  return lat;
}

RatLattice make_lattice(const QMat& rows, std::size_t dim) {
  mpz_class l = 1;
  for (const auto& r : rows) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), nt::lcm_of_denominators(r).get_mpz_t());
  ZMat z;
  z.reserve(rows.size());
  for (const auto& r : rows) {
    ZVec v(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      mpq_class t = r[k] * l;
      v[k] = t.get_num();
    }
    z.push_back(std::move(v));
  }
  return make_lattice(z, l, dim);
}

ZVec coordinates(const RatLattice& lat, const QVec& v) {
  ZVec w(lat.dim);
  for (std::size_t k = 0; k < lat.dim; ++k) {
    mpq_class t = v[k] * lat.denom;
    if (t.get_den() != 1) throw Error(ErrorKind::NotPresent, "vector not in lattice");
    w[k] = t.get_num();
  }
  ZVec coef(lat.rows.size(), 0);
  std::size_t col = 0;
  for (std::size_t r = 0; r < lat.rows.size(); ++r) {
    const ZVec& P = lat.rows[r];
    while (P[col] == 0) {
      if (w[col] != 0) throw Error(ErrorKind::NotPresent, "vector not in lattice");
      ++col;
    }
    if (!mpz_divisible_p(w[col].get_mpz_t(), P[col].get_mpz_t()))
      throw Error(ErrorKind::NotPresent, "vector not in lattice");
    coef[r] = w[col] / P[col];
    for (std::size_t k = col; k < lat.dim; ++k) w[k] -= coef[r] * P[k];
    ++col;
  }
  if (!is_zero_vec(w)) throw Error(ErrorKind::NotPresent, "vector not in lattice");
  return coef;
}

bool contains(const RatLattice& lat, const QVec& v) {
  try {
    coordinates(lat, v);
    return true;
  } catch (const Error&) {
    return false;
  }
}

bool contains(const RatLattice& big, const RatLattice& small) {
  for (const auto& r : small.basis())
    if (!contains(big, r)) return false;
  return true;
}

mpz_class index(const RatLattice& big, const RatLattice& small) {
  if (big.rank() != small.rank()) throw Error(ErrorKind::RankDeficient, "index needs equal ranks");
  mpq_class vb = 1, vs = 1;
  std::size_t col = 0;
  for (const auto& r : big.rows) {
    while (r[col] == 0) ++col;
    mpq_class q(r[col], big.denom);
    q.canonicalize();
    vb *= q;
    ++col;
  }
  col = 0;
  for (const auto& r : small.rows) {
    while (r[col] == 0) ++col;
    mpq_class q(r[col], small.denom);
    q.canonicalize();
    vs *= q;
    ++col;
  }
  vb.canonicalize();
  vs.canonicalize();
  mpq_class q = vs / vb;
  if (q.get_den() != 1) throw Error(ErrorKind::NotPresent, "not a sublattice");
  return q.get_num();
}

mpq_class lattice_det(const RatLattice& lat, const QMat* gram) {
  if (lat.rank() != lat.dim) throw Error(ErrorKind::RankDeficient, "lattice_det needs full rank");
  QMat B = lat.basis();
  const std::size_t n = lat.dim;
  QMat BG = B;
  if (gram) {
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = 0; k < n; ++k) {
        mpq_class s = 0;
        for (std::size_t l = 0; l < n; ++l) s += B[r][l] * (*gram)[l][k];
        BG[r][k] = s;
      }
  }
  QMat M(n, QVec(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t s = 0; s < n; ++s) {
      mpq_class t = 0;
      for (std::size_t k = 0; k < n; ++k) t += BG[r][k] * B[s][k];
      M[r][s] = t;
    }
  return nt::det(M);
}

bool is_positive_definite(const ZMat& gram) {
  const std::size_t n = gram.size();
  ZMat m = gram;
  mpz_class prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (m[k][k] <= 0) return false;
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    prev = m[k][k];
  }
  return true;
}

ZMat lll_gram(const ZMat& gram) {
  const std::size_t n = gram.size();
  if (!is_positive_definite(gram)) throw Error(ErrorKind::NotPositiveDefinite, "Gram matrix not positive definite");
  ZMat G = gram;
  ZMat U(n, ZVec(n, 0));
  for (std::size_t i = 0; i < n; ++i) U[i][i] = 1;
  if (n <= 1) return U;
  const long double delta = 0.99L;
  std::vector<std::vector<long double>> mu(n, std::vector<long double>(n, 0)), r(n, std::vector<long double>(n, 0));
  r[0][0] = to_ld(G[0][0]);

  auto sub_row = [&](std::size_t k, std::size_t j, const mpz_class& q) {
    // b_k -= q b_j
    const mpz_class gkj = G[k][j];
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      G[k][i] -= q * G[j][i];
      G[i][k] = G[k][i];
    }
    G[k][k] += q * q * G[j][j] - 2 * q * gkj;
    for (std::size_t i = 0; i < n; ++i) U[k][i] -= q * U[j][i];
  };
  auto compute_row = [&](std::size_t k) {
    for (std::size_t j = 0; j <= k; ++j) {
      long double v = to_ld(G[k][j]);
      for (std::size_t l = 0; l < j; ++l) v -= mu[j][l] * r[k][l];
      r[k][j] = v;
      if (j < k) mu[k][j] = v / r[j][j];
    }
  };

  std::size_t k = 1;
  std::size_t steps = 0;
  const std::size_t max_steps = 200000 * n;
  while (k < n && steps++ < max_steps) {
    for (int pass = 0; pass < 64; ++pass) {
      compute_row(k);
      bool reduced = false;
      for (std::size_t j = k; j-- > 0;) {
        if (std::fabs(mu[k][j]) <= 0.51L) continue;
        long double qr = std::nearbyint(mu[k][j]);
        mpz_class q;
        if (std::fabs(qr) < 9.0e18L) {
          q = static_cast<long>(qr);
        } else {
          int e;
          long double m = std::frexp(qr, &e);
          q = static_cast<long>(std::ldexp(m, 62));
          q <<= (e - 62);
        }
        sub_row(k, j, q);
        for (std::size_t l = 0; l < j; ++l) mu[k][l] -= qr * mu[j][l];
        mu[k][j] -= qr;
        reduced = true;
      }
      if (!reduced) break;
    }
    compute_row(k);
    const long double rk = r[k][k];
    const long double m1 = mu[k][k - 1];
    if (delta * r[k - 1][k - 1] > rk + m1 * m1 * r[k - 1][k - 1]) {
      std::swap(G[k], G[k - 1]);
      for (auto& row : G) std::swap(row[k], row[k - 1]);
      std::swap(U[k], U[k - 1]);
      if (k == 1) {
        r[0][0] = to_ld(G[0][0]);
      } else {
        --k;
      }
    } else {
      ++k;
    }
  }
  return U;
}

QMat lll_reduce(const QMat& basis, const QMat* gram) {
  const std::size_t r = basis.size();
  if (r == 0) return basis;
  const std::size_t n = basis[0].size();
  QMat BG = basis;
  if (gram) {
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        mpq_class s = 0;
        for (std::size_t l = 0; l < n; ++l) s += basis[i][l] * (*gram)[l][k];
        BG[i][k] = s;
      }
  }
  QMat M(r, QVec(r));
  mpz_class l = 1;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      mpq_class t = 0;
      for (std::size_t k = 0; k < n; ++k) t += BG[i][k] * basis[j][k];
      M[i][j] = t;
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.get_den_mpz_t());
    }
  ZMat G(r, ZVec(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      mpq_class t = M[i][j] * l;
      G[i][j] = t.get_num();
    }
  ZMat U = lll_gram(G);
  QMat out(r, QVec(n, 0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      if (U[i][j] == 0) continue;
      for (std::size_t k = 0; k < n; ++k) out[i][k] += U[i][j] * basis[j][k];
    }
  return out;
}

QMat lll_reduce(const RatLattice& lat, const QMat* gram) { return lll_reduce(lat.basis(), gram); }

namespace {

struct EnumContext {
  std::size_t n;
  std::vector<std::vector<long double>> R;  // upper triangular, G ~ R^T R
  long double bound;
  const ZMat* G;
  const ZMat* U;
  mpz_class target;
  const VecFilter* filter;
};

void enum_level(const EnumContext& ctx, long level, std::vector<long>& x, long double partial,
                std::vector<ZVec>& out) {
  const auto& R = ctx.R;
  if (level < 0) {
    // exact acceptance
    mpz_class q = 0;
    for (std::size_t i = 0; i < ctx.n; ++i) {
      if (x[i] == 0) continue;
      mpz_class row = 0;
      for (std::size_t j = 0; j < ctx.n; ++j)
        if (x[j] != 0) row += (*ctx.G)[i][j] * x[j];
      q += row * x[i];
    }
    if (q != ctx.target) return;
    ZVec v(ctx.n, 0);
    for (std::size_t i = 0; i < ctx.n; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < ctx.n; ++j) v[j] += (*ctx.U)[i][j] * x[i];
    }
    if (*ctx.filter && !(*ctx.filter)(v)) return;
    out.push_back(std::move(v));
    return;
  }
  const std::size_t i = static_cast<std::size_t>(level);
  long double s = 0;
  for (std::size_t j = i + 1; j < ctx.n; ++j) s += R[i][j] * x[j];
  const long double center = -s / R[i][i];
  const long double rem = ctx.bound - partial;
  if (rem < 0) return;
  const long double rad = std::sqrt(rem) / R[i][i];
  const long lo = static_cast<long>(std::ceil(center - rad));
  const long hi = static_cast<long>(std::floor(center + rad));
  for (long v = lo; v <= hi; ++v) {
    const long double t = R[i][i] * v + s;
    const long double np = partial + t * t;
    if (np > ctx.bound) continue;
    x[i] = v;
    enum_level(ctx, level - 1, x, np, out);
  }
  x[i] = 0;
}

bool lex_less(const ZVec& a, const ZVec& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    const int c = cmp(a[k], b[k]);
    if (c != 0) return c < 0;
  }
  return false;
}

}  // namespace

std::vector<ZVec> enumerate_exact(const ZMat& gram, const mpz_class& target, const VecFilter& filter,
                                  unsigned threads) {
  const std::size_t n = gram.size();
  if (!is_positive_definite(gram)) throw Error(ErrorKind::NotPositiveDefinite, "Gram matrix not positive definite");
  std::vector<ZVec> out;
  if (target < 0 || n == 0) return out;
  if (target == 0) {
    ZVec z(n, 0);
    if (!filter || filter(z)) out.push_back(z);
    return out;
  }
  const ZMat U = lll_gram(gram);
  ZMat G(n, ZVec(n, 0));
  {
    ZMat UG(n, ZVec(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        if (U[i][k] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) UG[i][j] += U[i][k] * gram[k][j];
      }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (U[j][k] != 0) G[i][j] += UG[i][k] * U[j][k];
  }

  // Cholesky in double; the factor entries are exact binary rationals.
  std::vector<std::vector<double>> Rd(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double s = G[i][j].get_d();
      for (std::size_t k = 0; k < i; ++k) s -= Rd[k][i] * Rd[k][j];
      if (j == i) {
        if (!(s > 0)) throw Error(ErrorKind::PrecisionExhausted, "floating Cholesky broke down");
        Rd[i][i] = std::sqrt(s);
      } else {
        Rd[i][j] = s / Rd[i][i];
      }
    }
  }
  // eta bounds |x^T (G - R^T R) x| / |R x|^2 via Frobenius norms.
  double e2 = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      mpq_class s = G[i][j];
      for (std::size_t k = 0; k <= std::min(i, j); ++k) s -= mpq_class(Rd[k][i]) * mpq_class(Rd[k][j]);
      const double v = s.get_d();
      e2 += v * v;
    }
  std::vector<std::vector<double>> Ri(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    Ri[j][j] = 1.0 / Rd[j][j];
    for (std::size_t i = j; i-- > 0;) {
      double s = 0;
      for (std::size_t k = i + 1; k <= j; ++k) s += Rd[i][k] * Ri[k][j];
      Ri[i][j] = -s / Rd[i][i];
    }
  }
  double ri2 = 0;
  for (const auto& row : Ri)
    for (double v : row) ri2 += v * v;
  const double eta = 1.1 * std::sqrt(e2) * ri2 + 1e-15;
  if (eta >= 0.5) throw Error(ErrorKind::PrecisionExhausted, "Cholesky error bound too large");

  EnumContext ctx;
  ctx.n = n;
  ctx.R.assign(n, std::vector<long double>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) ctx.R[i][j] = Rd[i][j];
  ctx.bound = to_ld(target) / (1.0L - eta) * (1.0L + 1e-9L) + 1e-9L;
  ctx.G = &G;
  ctx.U = &U;
  ctx.target = target;
  ctx.filter = &filter;

  // Split the top level across threads.
  const std::size_t top = n - 1;
  const long double rad = std::sqrt(ctx.bound) / ctx.R[top][top];
  const long lo = static_cast<long>(std::ceil(-rad)), hi = static_cast<long>(std::floor(rad));
  std::vector<long> tops;
  for (long v = lo; v <= hi; ++v) tops.push_back(v);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(tops.size())));
  std::vector<std::vector<ZVec>> parts(threads);
  auto work = [&](unsigned t) {
    std::vector<long> x(n, 0);
    for (std::size_t idx = t; idx < tops.size(); idx += threads) {
      const long v = tops[idx];
      const long double s = ctx.R[top][top] * v;
      if (s * s > ctx.bound) continue;
      x[top] = v;
      enum_level(ctx, static_cast<long>(top) - 1, x, s * s, parts[t]);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (auto& p : parts)
    for (auto& v : p) out.push_back(std::move(v));
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

}  // namespace quatlat::lat
