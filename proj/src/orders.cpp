#include "quatlat/orders.hpp"

#include <algorithm>
#include <map>

#include "quatlat/error.hpp"

namespace quatlat {

namespace {

using FpVec = std::vector<std::uint64_t>;
using FpMat = std::vector<FpVec>;

bool power_of_two(const mpz_class& x) {
  if (x <= 0) return false;
  return mpz_popcount(x.get_mpz_t()) == 1;
}

QVec unit_vec(std::size_t n, std::size_t s) {
  QVec v(n, 0);
  v[s] = 1;
  return v;
}

// Multiply each component by c.
QVec times_c(const RealCycloField& F, const QVec& v) {
  const unsigned d = F.degree();
  QVec out(v.size(), 0);
  const auto& mp = F.minpoly();
  for (std::size_t m = 0; m < 4; ++m) {
    const std::size_t o = m * d;
    const mpq_class top = v[o + d - 1];
    for (unsigned j = d - 1; j > 0; --j) out[o + j] = v[o + j - 1];
    out[o] = 0;
    if (top != 0)
      for (unsigned j = 0; j < d; ++j) out[o + j] -= top * mp[j];
  }
  return out;
}

// Z-lattice with a denominator that grows on demand.
class Accumulator {
 public:
  explicit Accumulator(std::size_t dim) : dim_(dim), b_(dim) {}

  bool insert(const QVec& v) {
    const mpz_class l = nt::lcm_of_denominators(v);
    if (!mpz_divisible_p(scale_.get_mpz_t(), l.get_mpz_t())) {
      mpz_class s2;
      mpz_lcm(s2.get_mpz_t(), scale_.get_mpz_t(), l.get_mpz_t());
      const mpz_class f = s2 / scale_;
      ZMat rows = b_.result();
      b_ = lat::HnfBuilder(dim_);
      for (auto& r : rows) {
        for (auto& x : r) x *= f;
        b_.insert(std::move(r));
      }
      scale_ = s2;
    }
    return b_.insert(scaled(v));
  }

  bool contains(const QVec& v) const {
    const mpz_class l = nt::lcm_of_denominators(v);
    if (!mpz_divisible_p(scale_.get_mpz_t(), l.get_mpz_t())) return false;
    return b_.contains(scaled(v));
  }

  std::size_t rank() const { return b_.rank(); }
  lat::RatLattice lattice() const { return lat::make_lattice(b_.result(), scale_, dim_); }

 private:
  ZVec scaled(const QVec& v) const {
    ZVec z(dim_);
    for (std::size_t k = 0; k < dim_; ++k) {
      mpq_class t = v[k] * scale_;
      z[k] = t.get_num();
    }
    return z;
  }

  std::size_t dim_;
  mpz_class scale_ = 1;
  lat::HnfBuilder b_;
};

void insert_r_multiples(const RealCycloField& F, Accumulator& acc, const QVec& v) {
  QVec cur = v;
  for (unsigned a = 0; a < F.degree(); ++a) {
    acc.insert(cur);
    if (a + 1 < F.degree()) cur = times_c(F, cur);
  }
}

QMat mat_inverse(QMat m) {
  const std::size_t n = m.size();
  QMat inv(n, QVec(n, 0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) throw Error(ErrorKind::RankDeficient, "singular matrix");
    std::swap(m[piv], m[c]);
    std::swap(inv[piv], inv[c]);
    const mpq_class f = 1 / m[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      m[c][k] *= f;
      inv[c][k] *= f;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m[r][c] == 0) continue;
      const mpq_class g = m[r][c];
      for (std::size_t k = 0; k < n; ++k) {
        if (m[c][k] != 0) m[r][k] -= g * m[c][k];
        if (inv[c][k] != 0) inv[r][k] -= g * inv[c][k];
      }
    }
  }
  return inv;
}

QMat bilinear_on_basis(const QMat& B, const QMat& F) {
  const std::size_t r = B.size(), n = F.size();
  QMat BF(r, QVec(n, 0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t l = 0; l < n; ++l) {
      if (B[i][l] == 0) continue;
      for (std::size_t k = 0; k < n; ++k)
        if (F[l][k] != 0) BF[i][k] += B[i][l] * F[l][k];
    }
  QMat out(r, QVec(r, 0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i; j < r; ++j) {
      mpq_class t = 0;
      for (std::size_t k = 0; k < n; ++k)
        if (B[j][k] != 0) t += BF[i][k] * B[j][k];
      out[i][j] = t;
      out[j][i] = t;
    }
  return out;
}

QMat weighted_form(const Algebra& alg, const std::array<FieldElem, 4>& w) {
  const Field& F = alg->field();
  const unsigned d = F->degree();
  QMat out(4 * d, QVec(4 * d, 0));
  for (int m = 0; m < 4; ++m) {
    std::vector<mpq_class> tr(2 * d - 1);
    FieldElem cp(F, 1);
    const FieldElem c = FieldElem::gen(F);
    for (unsigned e = 0; e + 1 < 2 * d; ++e) {
      tr[e] = 2 * (w[m] * cp).trace();
      cp *= c;
    }
    for (unsigned a = 0; a < d; ++a)
      for (unsigned b = 0; b < d; ++b) out[m * d + a][m * d + b] = tr[a + b];
  }
  return out;
}

std::vector<Quaternion> to_quats(const Algebra& alg, const std::vector<QVec>& vs) {
  std::vector<Quaternion> out;
  for (const auto& v : vs) out.push_back(Quaternion::from_coords(alg, v));
  return out;
}

QuatOrder closure_from(const Algebra& alg, const std::vector<QVec>& gens) {
  const Field& F = alg->field();
  const unsigned d = F->degree();
  const std::size_t N = 4 * d;
  Accumulator acc(N);
  insert_r_multiples(*F, acc, unit_vec(N, 0));
  for (const auto& g : gens) insert_r_multiples(*F, acc, g);
  const unsigned max_rounds = 4 * d + 8;
  for (unsigned round = 0;; ++round) {
    if (round > max_rounds)
      throw Error(ErrorKind::NoClosure, "closure did not stabilize within " + std::to_string(max_rounds) + " rounds");
    std::vector<QVec> rg = r_generators(alg, acc.lattice());
    bool grew = false;
    for (const auto& x : rg)
      for (const auto& y : rg) {
        QVec p = ambient_mul(alg, x, y);
        if (acc.contains(p)) continue;
        insert_r_multiples(*F, acc, p);
        grew = true;
      }
    if (!grew) break;
  }
  lat::RatLattice L = acc.lattice();
  if (L.rank() < N)
    throw Error(ErrorKind::NotFullRank,
                "closure has rank " + std::to_string(L.rank()) + " < " + std::to_string(N));
  return make_order(alg, L);
}

// Reduction of an integral field element modulo (p, h).
FpVec reduce_mod_ph(const FieldElem& x, std::uint64_t p, const nt::FpPoly& h) {
  ZVec z(x.coeffs().size());
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (x[k].get_den() != 1) throw Error(ErrorKind::Internal, "expected integral element");
    z[k] = x[k].get_num();
  }
  nt::FpPoly r = nt::fp_mod(nt::fp_reduce(z, p), h, p);
  FpVec out(h.size() - 1, 0);
  for (std::size_t k = 0; k < r.size(); ++k) out[k] = r[k];
  return out;
}

FieldElem trd_of_product(const Quaternion& x, const Quaternion& y) {
  const auto& A = *x.algebra();
  FieldElem z0 = x[0] * y[0] + A.a() * (x[1] * y[1]) + A.b() * (x[2] * y[2]) - A.ab() * (x[3] * y[3]);
  return z0 * mpq_class(2);
}

std::uint64_t to_u64(const mpz_class& p) {
  if (!mpz_fits_ulong_p(p.get_mpz_t())) throw Error(ErrorKind::Internal, "prime too large: " + p.get_str());
  return p.get_ui();
}

lat::RatLattice lattice_from_fp(const QuatOrder& O, std::uint64_t p, const FpMat& extra) {
  QMat B = O.lattice.basis();
  QMat rows;
  for (const auto& b : B) {
    QVec r = b;
    for (auto& x : r) x *= p;
    rows.push_back(std::move(r));
  }
  for (const auto& v : extra) {
    QVec r(B[0].size(), 0);
    for (std::size_t s = 0; s < v.size(); ++s) {
      if (v[s] == 0) continue;
      for (std::size_t k = 0; k < r.size(); ++k) r[k] += B[s][k] * static_cast<unsigned long>(v[s]);
    }
    rows.push_back(std::move(r));
  }
  return lat::make_lattice(rows, B[0].size());
}

// Coordinates modulo p of x in the lattice basis of O.
FpVec coords_mod_p(const QuatOrder& O, const QVec& x, std::uint64_t p) {
  ZVec c = lat::coordinates(O.lattice, x);
  FpVec out(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) out[k] = nt::fp_mod_mpz(c[k], p);
  return out;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

// The semisimple quotient O/J in the basis of O-basis vectors at the free
// (non-pivot) columns of the radical's echelon form.
class SemisimpleQuotient {
 public:
  SemisimpleQuotient(const QuatOrder& O, std::uint64_t p, const FpMat& rad) : p_(p), rad_(rad) {
    const std::size_t N = O.rank();
    std::vector<bool> pivot(N, false);
    for (const auto& r : rad_) {
      std::size_t c = 0;
      while (r[c] == 0) ++c;
      pivot[c] = true;
      pivcol_.push_back(c);
    }
    for (std::size_t s = 0; s < N; ++s)
      if (!pivot[s]) free_.push_back(s);
    n_ = N;
    const QMat B = O.lattice.basis();
    const std::size_t m = free_.size();
    table_.assign(m, std::vector<FpVec>(m));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        table_[i][j] = to_quotient(coords_mod_p(O, ambient_mul(O.alg, B[free_[i]], B[free_[j]]), p));
    one_ = to_quotient(coords_mod_p(O, unit_vec(B[0].size(), 0), p));
  }

  std::size_t dim() const { return free_.size(); }
  const FpVec& one() const { return one_; }
  std::uint64_t p() const { return p_; }

  FpVec to_quotient(FpVec v) const {
    for (std::size_t r = 0; r < rad_.size(); ++r) {
      const std::uint64_t f = v[pivcol_[r]];
      if (f == 0) continue;
      for (std::size_t k = 0; k < n_; ++k) v[k] = (v[k] + p_ - mulmod(f, rad_[r][k], p_)) % p_;
    }
    FpVec out(free_.size());
    for (std::size_t i = 0; i < free_.size(); ++i) out[i] = v[free_[i]];
    return out;
  }

  FpVec lift(const FpVec& a) const {
    FpVec v(n_, 0);
    for (std::size_t i = 0; i < free_.size(); ++i) v[free_[i]] = a[i];
    return v;
  }

  FpVec basis_vec(std::size_t i) const {
    FpVec v(free_.size(), 0);
    v[i] = 1;
    return v;
  }

  FpVec mul(const FpVec& x, const FpVec& y) const {
    const std::size_t m = free_.size();
    FpVec out(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (y[j] == 0) continue;
        const std::uint64_t f = mulmod(x[i], y[j], p_);
        const FpVec& t = table_[i][j];
        for (std::size_t k = 0; k < m; ++k)
          if (t[k]) out[k] = (out[k] + mulmod(f, t[k], p_)) % p_;
      }
    }
    return out;
  }

  FpVec add(FpVec x, const FpVec& y, std::uint64_t scale = 1) const {
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = (x[k] + mulmod(scale % p_, y[k], p_)) % p_;
    return x;
  }

  FpVec power(FpVec x, mpz_class e) const {
    FpVec r = one_;
    while (e > 0) {
      if (mpz_odd_p(e.get_mpz_t())) r = mul(r, x);
      e >>= 1;
      if (e > 0) x = mul(x, x);
    }
    return r;
  }

  FpMat center() const {
    const std::size_t m = free_.size();
    FpMat rows(m, FpVec(m * m, 0));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t t = 0; t < m; ++t)
        for (std::size_t k = 0; k < m; ++k) rows[i][t * m + k] = (table_[i][t][k] + p_ - table_[t][i][k]) % p_;
    FpMat ker = nt::fp_left_kernel(rows, m * m, p_);
    return ker;
  }

 private:
  std::uint64_t p_;
  FpMat rad_;
  std::vector<std::size_t> pivcol_, free_;
  std::size_t n_ = 0;
  std::vector<std::vector<FpVec>> table_;
  FpVec one_;
};

// Minimal polynomial (monic, low to high) of w in the algebra with identity e.
FpVec minimal_polynomial(const SemisimpleQuotient& A, const FpVec& w, const FpVec& e) {
  const std::uint64_t p = A.p();
  const std::size_t m = A.dim();
  std::vector<FpVec> ech;       // reduced vectors
  std::vector<std::size_t> piv;  // pivot columns
  std::vector<FpVec> combo;     // combination of powers producing ech[i]
  FpVec cur = e;
  for (std::size_t k = 0;; ++k) {
    FpVec v = cur;
    FpVec comb(k + 1, 0);
    comb[k] = 1;
    for (std::size_t r = 0; r < ech.size(); ++r) {
      const std::uint64_t f = v[piv[r]];
      if (f == 0) continue;
      for (std::size_t c = 0; c < m; ++c) v[c] = (v[c] + p - mulmod(f, ech[r][c], p)) % p;
      for (std::size_t c = 0; c < combo[r].size(); ++c) comb[c] = (comb[c] + p - mulmod(f, combo[r][c], p)) % p;
    }
    std::size_t c = 0;
    while (c < m && v[c] == 0) ++c;
    if (c == m) return comb;  // monic since comb[k] = 1
    const std::uint64_t inv = nt::fp_inv(v[c], p);
    for (auto& x : v) x = mulmod(x, inv, p);
    for (auto& x : comb) x = mulmod(x, inv, p);
    ech.push_back(v);
    piv.push_back(c);
    combo.push_back(comb);
    cur = A.mul(cur, w);
  }
}

std::vector<FpVec> primitive_central_idempotents(const SemisimpleQuotient& A) {
  const std::uint64_t p = A.p();
  const FpMat Z = A.center();
  // Frobenius-fixed part: F_p-span of the primitive central idempotents.
  FpMat rows;
  const mpz_class pe = static_cast<unsigned long>(p);
  for (const auto& z : Z) rows.push_back(A.add(A.power(z, pe), z, p - 1));
  FpMat fixed_combos = nt::fp_left_kernel(rows, A.dim(), p);
  std::vector<FpVec> fixed;
  for (const auto& lam : fixed_combos) {
    FpVec v(A.dim(), 0);
    for (std::size_t k = 0; k < lam.size(); ++k) v = A.add(v, Z[k], lam[k]);
    fixed.push_back(v);
  }
  if (p > 2000000) throw Error(ErrorKind::Internal, "idempotent splitting needs a small prime");
  std::vector<FpVec> E{A.one()};
  for (const auto& z : fixed) {
    std::vector<FpVec> next;
    for (const auto& e : E) {
      const FpVec w = A.mul(z, e);
      const FpVec mp = minimal_polynomial(A, w, e);
      std::vector<std::uint64_t> roots;
      for (std::uint64_t lam = 0; lam < p; ++lam) {
        std::uint64_t v = 0;
        for (std::size_t k = mp.size(); k-- > 0;) v = (mulmod(v, lam, p) + mp[k]) % p;
        if (v == 0) roots.push_back(lam);
      }
      if (roots.size() <= 1) {
        next.push_back(e);
        continue;
      }
      for (std::uint64_t lam : roots) {
        FpVec f = e;
        for (std::uint64_t mu : roots) {
          if (mu == lam) continue;
          const FpVec t = A.add(w, e, p - mu);
          f = A.mul(f, t);
          const std::uint64_t inv = nt::fp_inv((lam + p - mu) % p, p);
          for (auto& x : f) x = mulmod(x, inv, p);
        }
        next.push_back(f);
      }
    }
    E = std::move(next);
  }
  return E;
}

bool lattice_less(const lat::RatLattice& a, const lat::RatLattice& b) {
  if (a.denom != b.denom) return a.denom < b.denom;
  for (std::size_t r = 0; r < std::min(a.rows.size(), b.rows.size()); ++r)
    for (std::size_t k = 0; k < a.rows[r].size(); ++k) {
      const int c = cmp(a.rows[r][k], b.rows[r][k]);
      if (c != 0) return c < 0;
    }
  return a.rows.size() < b.rows.size();
}

std::vector<lat::RatLattice> maximal_ideals(const QuatOrder& O, std::uint64_t p, const FpMat& rad) {
  SemisimpleQuotient A(O, p, rad);
  std::vector<lat::RatLattice> out;
  for (const auto& e : primitive_central_idempotents(A)) {
    // A matrix-algebra component means O is already maximal at that prime.
    FpMat comp;
    for (std::size_t t = 0; t < A.dim(); ++t) comp.push_back(A.mul(A.basis_vec(t), e));
    comp = nt::fp_row_basis(comp, p);
    bool commutative = true;
    for (std::size_t x = 0; x < comp.size() && commutative; ++x)
      for (std::size_t y = x + 1; y < comp.size() && commutative; ++y)
        commutative = A.mul(comp[x], comp[y]) == A.mul(comp[y], comp[x]);
    if (!commutative) continue;
    const FpVec ce = A.add(A.one(), e, p - 1);
    FpMat span;
    for (std::size_t t = 0; t < A.dim(); ++t) span.push_back(A.mul(A.basis_vec(t), ce));
    span = nt::fp_row_basis(span, p);
    FpMat extra = rad;
    for (const auto& v : span) extra.push_back(A.lift(v));
    out.push_back(lattice_from_fp(O, p, extra));
  }
  std::sort(out.begin(), out.end(), lattice_less);
  return out;
}

// Minimal left ideals of the matrix components of O/J, lifted to left
// O-ideals that agree with O away from that component. Components with more
// than 2^16 elements are skipped.
std::vector<lat::RatLattice> minimal_left_ideals(const QuatOrder& O, std::uint64_t p, const FpMat& rad) {
  SemisimpleQuotient A(O, p, rad);
  std::vector<lat::RatLattice> out;
  for (const auto& e : primitive_central_idempotents(A)) {
    FpMat comp;
    for (std::size_t t = 0; t < A.dim(); ++t) comp.push_back(A.mul(A.basis_vec(t), e));
    comp = nt::fp_row_basis(comp, p);
    const std::size_t cd = comp.size();
    if (cd % 4 != 0) continue;
    double count = 1;
    for (std::size_t k = 0; k < cd; ++k) count *= static_cast<double>(p);
    if (count > 65536.0) continue;
    const FpVec ce = A.add(A.one(), e, p - 1);
    FpMat rest;
    for (std::size_t t = 0; t < A.dim(); ++t) rest.push_back(A.mul(A.basis_vec(t), ce));
    rest = nt::fp_row_basis(rest, p);
    std::vector<FpMat> found;
    FpVec digits(cd, 0);
    for (;;) {
      std::size_t k = 0;
      while (k < cd && ++digits[k] == p) digits[k++] = 0;
      if (k == cd) break;
      FpVec x(A.dim(), 0);
      for (std::size_t r = 0; r < cd; ++r) x = A.add(x, comp[r], digits[r]);
      FpMat L;
      for (std::size_t t = 0; t < A.dim(); ++t) L.push_back(A.mul(A.basis_vec(t), x));
      L = nt::fp_row_basis(L, p);
      if (L.size() != cd / 2 || std::find(found.begin(), found.end(), L) != found.end()) continue;
      found.push_back(L);
      FpMat extra = rad;
      for (const auto& v : L) extra.push_back(A.lift(v));
      for (const auto& v : rest) extra.push_back(A.lift(v));
      out.push_back(lattice_from_fp(O, p, extra));
    }
  }
  std::sort(out.begin(), out.end(), lattice_less);
  return out;
}

QuatOrder one_sided_order(const Algebra& alg, const lat::RatLattice& I, bool left) {
  const std::size_t N = I.dim;
  if (I.rank() != N) throw Error(ErrorKind::NotFullRank, "idealizer needs a full lattice");
  const QMat Binv = mat_inverse(I.basis());
  QMat cols;
  for (const auto& g : r_generators(alg, I)) {
    QMat Mg(N);
    for (std::size_t s = 0; s < N; ++s) {
      const QVec e = unit_vec(N, s);
      Mg[s] = left ? ambient_mul(alg, e, g) : ambient_mul(alg, g, e);
    }
    // Mg * Binv, stored transposed
    for (std::size_t k = 0; k < N; ++k) {
      QVec col(N, 0);
      for (std::size_t s = 0; s < N; ++s) {
        mpq_class t = 0;
        for (std::size_t l = 0; l < N; ++l)
          if (Mg[s][l] != 0 && Binv[l][k] != 0) t += Mg[s][l] * Binv[l][k];
        col[s] = t;
      }
      cols.push_back(std::move(col));
    }
  }
  lat::RatLattice W = lat::make_lattice(cols, N);
  if (W.rank() != N) throw Error(ErrorKind::Internal, "degenerate idealizer system");
  const QMat Winv = mat_inverse(W.basis());
  QMat dual(N, QVec(N));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) dual[i][j] = Winv[j][i];
  return make_order(alg, lat::make_lattice(dual, N));
}

}  // namespace

std::vector<Quaternion> QuatOrder::zbasis() const { return to_quats(alg, lattice.basis()); }

bool QuatOrder::contains(const Quaternion& x) const { return lat::contains(lattice, x.coords()); }

QVec ambient_mul(const Algebra& alg, const QVec& x, const QVec& y) {
  const Field& F = alg->field();
  const unsigned d = F->degree();
  const bool integral = alg->a().is_integral() && alg->b().is_integral();
  if (!integral) {
    Quaternion p = Quaternion::from_coords(alg, x) * Quaternion::from_coords(alg, y);
    return p.coords();
  }
  const mpz_class lx = nt::lcm_of_denominators(x), ly = nt::lcm_of_denominators(y);
  auto comp = [&](const QVec& v, const mpz_class& l, int m) {
    ZVec z(d);
    for (unsigned k = 0; k < d; ++k) {
      mpq_class t = v[m * d + k] * l;
      z[k] = t.get_num();
    }
    return z;
  };
  std::array<ZVec, 4> X, Y;
  for (int m = 0; m < 4; ++m) {
    X[m] = comp(x, lx, m);
    Y[m] = comp(y, ly, m);
  }
  auto to_z = [&](const FieldElem& w) {
    ZVec z(d);
    for (unsigned k = 0; k < d; ++k) z[k] = w[k].get_num();
    return z;
  };
  const ZVec a = to_z(alg->a()), b = to_z(alg->b()), ab = to_z(alg->ab());
  auto fm = [&](const ZVec& u, const ZVec& v) { return F->mul(u, v); };
  auto scale = [&](const ZVec& w, const FieldElem& we, const ZVec& v) {
    if (we.is_rational()) {
      ZVec out = v;
      for (auto& t : out) t *= w[0];
      return out;
    }
    return fm(w, v);
  };
  auto add = [](ZVec u, const ZVec& v) {
    for (std::size_t k = 0; k < u.size(); ++k) u[k] += v[k];
    return u;
  };
  auto sub = [](ZVec u, const ZVec& v) {
    for (std::size_t k = 0; k < u.size(); ++k) u[k] -= v[k];
    return u;
  };
  std::array<ZVec, 4> Z;
  Z[0] = sub(add(add(fm(X[0], Y[0]), scale(a, alg->a(), fm(X[1], Y[1]))), scale(b, alg->b(), fm(X[2], Y[2]))),
             scale(ab, alg->ab(), fm(X[3], Y[3])));
  Z[1] = add(add(fm(X[0], Y[1]), fm(X[1], Y[0])), scale(b, alg->b(), sub(fm(X[3], Y[2]), fm(X[2], Y[3]))));
  Z[2] = add(add(fm(X[0], Y[2]), fm(X[2], Y[0])), scale(a, alg->a(), sub(fm(X[1], Y[3]), fm(X[3], Y[1]))));
  Z[3] = sub(add(add(fm(X[0], Y[3]), fm(X[3], Y[0])), fm(X[1], Y[2])), fm(X[2], Y[1]));
  const mpz_class den = lx * ly;
  QVec out(4 * d);
  for (int m = 0; m < 4; ++m)
    for (unsigned k = 0; k < d; ++k) {
      out[m * d + k] = mpq_class(Z[m][k], den);
      out[m * d + k].canonicalize();
    }
  return out;
}

QMat nrd_form(const Algebra& alg) {
  const Field& F = alg->field();
  return weighted_form(alg, {FieldElem(F, 1), -alg->a(), -alg->b(), alg->ab()});
}

QMat disc_form(const Algebra& alg) {
  const Field& F = alg->field();
  return weighted_form(alg, {FieldElem(F, 1), alg->a(), alg->b(), -alg->ab()});
}

QuatOrder make_order(const Algebra& alg, const lat::RatLattice& lattice) {
  QuatOrder O;
  O.alg = alg;
  O.lattice = lattice;
  const QMat B = lattice.basis();
  const QMat g = bilinear_on_basis(B, nrd_form(alg));
  O.gram_nrd.assign(g.size(), ZVec(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (g[i][j].get_den() != 1) throw Error(ErrorKind::Internal, "lattice is not an order (non-integral trace form)");
      O.gram_nrd[i][j] = g[i][j].get_num();
    }
  const mpq_class dz = nt::det(bilinear_on_basis(B, disc_form(alg)));
  if (dz.get_den() != 1) throw Error(ErrorKind::Internal, "non-integral discriminant");
  O.disc_z = dz.get_num();
  return O;
}

lat::RatLattice r_span(const Algebra& alg, const std::vector<QVec>& gens) {
  const Field& F = alg->field();
  Accumulator acc(4 * F->degree());
  for (const auto& g : gens) insert_r_multiples(*F, acc, g);
  return acc.lattice();
}

std::vector<QVec> r_generators(const Algebra& alg, const lat::RatLattice& lattice) {
  // Work in coordinates of the lattice basis, where all entries stay small.
  const Field& F = alg->field();
  const QMat B = lattice.basis();
  const std::size_t r = B.size();
  lat::HnfBuilder acc(r);
  std::vector<QVec> out;
  for (std::size_t s = 0; s < r; ++s) {
    ZVec e(r, 0);
    e[s] = 1;
    if (acc.contains(e)) continue;
    out.push_back(B[s]);
    QVec cur = B[s];
    for (unsigned a = 0; a < F->degree(); ++a) {
      acc.insert(lat::coordinates(lattice, cur));
      if (a + 1 < F->degree()) cur = times_c(*F, cur);
    }
  }
  return out;
}

QuatOrder order_closure(const Algebra& alg, const std::vector<Quaternion>& gens) {
  std::vector<QVec> vs;
  for (const auto& g : gens) {
    if (!g.is_integral()) throw Error(ErrorKind::NotIntegralGenerator, "generator " + g.to_string() + " is not integral");
    vs.push_back(g.coords());
  }
  return closure_from(alg, vs);
}

bool integrality_certificate(const QuatOrder& O, const Quaternion& x) {
  if (!x.is_integral()) return false;
  for (const auto& s : O.zbasis())
    if (!(x * s.conj()).trd().is_integral()) return false;
  return true;
}

QuatOrder adjoin(const QuatOrder& O, const Quaternion& x) {
  if (!integrality_certificate(O, x))
    throw Error(ErrorKind::NotCompatible, x.to_string() + " fails the integrality conditions");
  std::vector<QVec> gens = r_generators(O.alg, O.lattice);
  gens.push_back(x.coords());
  return closure_from(O.alg, gens);
}

RamificationData ramification(const Algebra& alg) {
  if (!alg->is_standard()) throw Error(ErrorKind::UnsupportedAlgebra, "ramification rule only covers (-1,-1)");
  const Field& F = alg->field();
  RamificationData r;
  r.norm_disc = 1;
  for (const auto& [e, f] : factor_prime(F, 2)) {
    PrimeAbove2 pr{e, f, e * f};
    r.primes.push_back(pr);
    if (pr.local_degree % 2 == 1) {
      r.ramified.push_back(pr);
      r.norm_disc *= mpz_class(1) << f;
    }
  }
  mpz_class dk = abs(F->disc());
  r.disc_target = dk * dk * dk * dk * r.norm_disc * r.norm_disc;
  return r;
}

std::vector<std::vector<std::uint64_t>> radical_mod_p(const QuatOrder& O, unsigned long p) {
  const Field& F = O.alg->field();
  const nt::FpPoly h = nt::fp_squarefree_kernel(F->minpoly(), p);
  const std::size_t dh = h.size() - 1;
  const auto B = O.zbasis();
  const std::size_t N = B.size();
  FpMat M(N, FpVec(N * dh, 0));
  for (std::size_t s = 0; s < N; ++s)
    for (std::size_t t = s; t < N; ++t) {
      const FpVec v = reduce_mod_ph(trd_of_product(B[s], B[t]), p, h);
      for (std::size_t k = 0; k < dh; ++k) {
        M[s][t * dh + k] = v[k];
        M[t][s * dh + k] = v[k];
      }
    }
  FpMat I = nt::fp_left_kernel(M, N * dh, p);
  if (p != 2 || I.empty()) return I;
  // In characteristic 2 the reduced norm is additive on I; the radical is its kernel.
  FpMat nm;
  for (const auto& v : I) {
    Quaternion x(O.alg);
    for (std::size_t s = 0; s < N; ++s)
      if (v[s]) x += B[s];
    nm.push_back(reduce_mod_ph(x.nrd(), p, h));
  }
  FpMat combos = nt::fp_left_kernel(nm, dh, p);
  FpMat rad;
  for (const auto& lam : combos) {
    FpVec v(N, 0);
    for (std::size_t k = 0; k < lam.size(); ++k)
      if (lam[k])
        for (std::size_t s = 0; s < N; ++s) v[s] = (v[s] + mulmod(lam[k], I[k][s], p)) % p;
    rad.push_back(v);
  }
  return nt::fp_row_basis(rad, p);
}

lat::RatLattice radical_preimage(const QuatOrder& O, unsigned long p) {
  return lattice_from_fp(O, p, radical_mod_p(O, p));
}

QuatOrder left_order(const Algebra& alg, const lat::RatLattice& I) { return one_sided_order(alg, I, true); }

QuatOrder right_order(const Algebra& alg, const lat::RatLattice& I) { return one_sided_order(alg, I, false); }

QuatOrder idealizer(const QuatOrder& O, const lat::RatLattice& I) {
  const auto og = r_generators(O.alg, O.lattice);
  const auto ig = r_generators(O.alg, I);
  for (const auto& o : og)
    for (const auto& g : ig)
      if (!lat::contains(I, ambient_mul(O.alg, o, g)) || !lat::contains(I, ambient_mul(O.alg, g, o)))
        throw Error(ErrorKind::NotIdeal, "lattice is not a two-sided ideal of the order");
  return left_order(O.alg, I);
}

QuatOrder p_maximize(const QuatOrder& O, unsigned long p) {
  QuatOrder cur = O;
  for (;;) {
    const FpMat rad = radical_mod_p(cur, p);
    const lat::RatLattice J = lattice_from_fp(cur, p, rad);
    QuatOrder next = left_order(cur.alg, J);
    if (!(next.lattice == cur.lattice)) {
      cur = std::move(next);
      continue;
    }
    bool grown = false;
    for (const auto& M : maximal_ideals(cur, p, rad)) {
      for (bool left : {true, false}) {
        QuatOrder cand = one_sided_order(cur.alg, M, left);
        if (!(cand.lattice == cur.lattice)) {
          cur = std::move(cand);
          grown = true;
          break;
        }
      }
      if (grown) break;
    }
    if (!grown) return cur;
  }
}

std::vector<QuatOrder> p_maximal_overorders(const QuatOrder& O, unsigned long p, std::size_t limit, bool walk) {
  std::vector<QuatOrder> leaves;
  std::vector<lat::RatLattice> seen;
  auto visited = [&](const lat::RatLattice& L) {
    if (std::find(seen.begin(), seen.end(), L) != seen.end()) return true;
    seen.push_back(L);
    return false;
  };
  std::vector<QuatOrder> stack{O};
  while (!stack.empty() && leaves.size() < limit) {
    QuatOrder cur = std::move(stack.back());
    stack.pop_back();
    if (visited(cur.lattice)) continue;
    for (;;) {
      const FpMat rad = radical_mod_p(cur, p);
      QuatOrder next = left_order(cur.alg, lattice_from_fp(cur, p, rad));
      if (next.lattice == cur.lattice) break;
      cur = std::move(next);
    }
    std::vector<QuatOrder> kids;
    for (const auto& M : maximal_ideals(cur, p, radical_mod_p(cur, p)))
      for (bool left : {true, false}) {
        QuatOrder cand = one_sided_order(cur.alg, M, left);
        if (cand.lattice == cur.lattice) continue;
        if (std::none_of(kids.begin(), kids.end(), [&](const QuatOrder& k) { return k.lattice == cand.lattice; }))
          kids.push_back(std::move(cand));
      }
    if (kids.empty()) {
      if (std::none_of(leaves.begin(), leaves.end(), [&](const QuatOrder& k) { return k.lattice == cur.lattice; }))
        leaves.push_back(std::move(cur));
      continue;
    }
    std::sort(kids.begin(), kids.end(),
              [](const QuatOrder& a, const QuatOrder& b) { return lattice_less(a.lattice, b.lattice); });
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(std::move(*it));
  }
  std::sort(leaves.begin(), leaves.end(),
            [](const QuatOrder& a, const QuatOrder& b) { return lattice_less(a.lattice, b.lattice); });
  if (!walk) return leaves;
  // The p-maximal orders containing O form a connected subtree; walk it
  // through neighbors (right orders of minimal left ideals).
  for (std::size_t q = 0; q < leaves.size() && leaves.size() < limit; ++q) {
    const QuatOrder M = leaves[q];
    for (const auto& I : minimal_left_ideals(M, p, radical_mod_p(M, p))) {
      QuatOrder nb = one_sided_order(M.alg, I, false);
      if (!lat::contains(nb.lattice, O.lattice)) continue;
      if (std::any_of(leaves.begin(), leaves.end(), [&](const QuatOrder& k) { return k.lattice == nb.lattice; }))
        continue;
      leaves.push_back(std::move(nb));
      if (leaves.size() >= limit) break;
    }
  }
  return leaves;
}

QuatOrder sum_of_orders(const std::vector<QuatOrder>& orders) {
  if (orders.empty()) throw Error(ErrorKind::Internal, "empty order sum");
  QMat rows;
  for (const auto& O : orders) {
    if (!O.alg->same_as(*orders[0].alg)) throw Error(ErrorKind::AlgebraMismatch, "orders from different algebras");
    for (auto& r : O.lattice.basis()) rows.push_back(std::move(r));
  }
  return make_order(orders[0].alg, lat::make_lattice(rows, orders[0].lattice.dim));
}

std::vector<mpz_class> maximality_candidates(const QuatOrder& O) {
  const mpz_class dk = O.alg->field()->disc();
  mpq_class q(abs(O.disc_z), dk * dk * dk * dk);
  q.canonicalize();
  std::vector<mpz_class> out;
  for (const auto& [p, e] : nt::factor(q.get_num()))
    if (e >= 2) out.push_back(p);
  if (q.get_den() != 1)
    for (const auto& [p, e] : nt::factor(q.get_den()))
      if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  std::sort(out.begin(), out.end());
  return out;
}

QuatOrder maximize(const QuatOrder& O) {
  QuatOrder cur = O;
  for (const auto& p : maximality_candidates(O)) cur = p_maximize(cur, to_u64(p));
  return cur;
}

bool is_maximal(const QuatOrder& O) {
  bool maximal = true;
  for (const auto& p : maximality_candidates(O)) {
    if (!(p_maximize(O, to_u64(p)).lattice == O.lattice)) {
      maximal = false;
      break;
    }
  }
  if (maximal && O.alg->is_standard()) {
    const RamificationData r = ramification(O.alg);
    if (abs(O.disc_z) != r.disc_target)
      throw Error(ErrorKind::Internal, "maximal order with |disc| " + mpz_class(abs(O.disc_z)).get_str() +
                                           " != expected " + r.disc_target.get_str());
  }
  return maximal;
}

bool is_azumaya(const QuatOrder& O) {
  const RamificationData r = ramification(O.alg);
  return is_maximal(O) && r.ramified.empty();
}

QuatOrder extend_scalars(const QuatOrder& O, unsigned n_big) {
  Algebra big;
  if (O.alg->is_standard()) {
    big = SymbolAlgebra::standard(n_big);
  } else {
    Field F = RealCycloField::get(n_big);
    big = SymbolAlgebra::build(F, subfield_lift(O.alg->a(), n_big), subfield_lift(O.alg->b(), n_big));
  }
  std::vector<QVec> gens;
  for (const auto& g : to_quats(O.alg, r_generators(O.alg, O.lattice))) {
    Quaternion l(big, subfield_lift(g[0], n_big), subfield_lift(g[1], n_big), subfield_lift(g[2], n_big),
                 subfield_lift(g[3], n_big));
    gens.push_back(l.coords());
  }
  return closure_from(big, gens);
}

bool equal_up_to_2_power(const QuatOrder& O1, const QuatOrder& O2) {
  if (!O1.alg->same_as(*O2.alg)) throw Error(ErrorKind::AlgebraMismatch, "orders live in different algebras");
  QMat rows = O1.lattice.basis();
  for (const auto& r : O2.lattice.basis()) rows.push_back(r);
  const lat::RatLattice S = lat::make_lattice(rows, O1.lattice.dim);
  return power_of_two(lat::index(S, O1.lattice)) && power_of_two(lat::index(S, O2.lattice));
}

}  // namespace quatlat
