#include "quatlat/realfield.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include <mpfr.h>

#include "quatlat/error.hpp"

namespace quatlat {

namespace {

// Integer polynomials, low to high.
void ztrim(ZVec& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

ZVec zdiv_exact_monic(ZVec a, const ZVec& m) {
  ZVec q(a.size() - m.size() + 1, 0);
  for (std::size_t s = a.size() - m.size() + 1; s-- > 0;) {
    mpz_class coef = a[s + m.size() - 1];
    q[s] = coef;
    if (coef == 0) continue;
    for (std::size_t i = 0; i < m.size(); ++i) a[s + i] -= coef * m[i];
  }
  ztrim(a);
  if (!a.empty()) throw Error(ErrorKind::Internal, "inexact cyclotomic division");
  return q;
}

ZVec cyclotomic(unsigned n) {
  static std::map<unsigned, ZVec> memo;
  if (auto it = memo.find(n); it != memo.end()) return it->second;
  ZVec p(n + 1, 0);
  p[0] = -1;
  p[n] = 1;
  for (unsigned e = 1; e < n; ++e) {
    if (n % e == 0) p = zdiv_exact_monic(p, cyclotomic(e));
  }
  memo[n] = p;
  return p;
}

ZVec zmulmod(const ZVec& a, const ZVec& b, const ZVec& m) {
  ZVec prod(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] += a[i] * b[j];
  ztrim(prod);
  const std::size_t dm = m.size() - 1;
  for (std::size_t s = prod.size(); s-- > dm;) {
    mpz_class coef = prod[s];
    if (coef == 0) continue;
    for (std::size_t i = 0; i <= dm; ++i) prod[s - dm + i] -= coef * m[i];
  }
  prod.resize(dm, 0);
  return prod;
}

// Solve A y = rhs for y over Q where A has full column rank; A given by columns.
QVec solve_columns(const std::vector<ZVec>& cols, const ZVec& rhs) {
  const std::size_t rows = rhs.size(), k = cols.size();
  QMat m(rows, QVec(k + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < k; ++c) m[r][c] = cols[c][r];
    m[r][k] = rhs[r];
  }
  std::size_t rank = 0;
  std::vector<std::size_t> pivcol;
  for (std::size_t c = 0; c < k && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[rank], m[piv]);
    mpq_class inv = 1 / m[rank][c];
    for (auto& x : m[rank]) x *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || m[r][c] == 0) continue;
      mpq_class f = m[r][c];
      for (std::size_t j = c; j <= k; ++j) m[r][j] -= f * m[rank][j];
    }
    pivcol.push_back(c);
    ++rank;
  }
  for (std::size_t r = rank; r < rows; ++r) {
    if (m[r][k] != 0) throw Error(ErrorKind::Internal, "inconsistent minimal polynomial system");
  }
  QVec y(k, 0);
  for (std::size_t r = 0; r < rank; ++r) y[pivcol[r]] = m[r][k];
  return y;
}

unsigned euler_phi(unsigned n) {
  unsigned r = 0;
  for (unsigned k = 1; k <= n; ++k)
    if (std::gcd(k, n) == 1) ++r;
  return r;
}

unsigned real_degree(unsigned n) { return n <= 2 ? 1 : euler_phi(n) / 2; }

// Rational polynomials for the inverse computation.
using QPoly = QVec;

void qtrim(QPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

void qdivmod(QPoly a, const QPoly& b, QPoly& q, QPoly& r) {
  qtrim(a);
  q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
  while (a.size() >= b.size() && !a.empty()) {
    std::size_t s = a.size() - b.size();
    mpq_class coef = a.back() / b.back();
    q[s] = coef;
    for (std::size_t i = 0; i < b.size(); ++i) a[s + i] -= coef * b[i];
    a.pop_back();
    qtrim(a);
  }
  r = std::move(a);
}

QPoly qsub_mul(const QPoly& a, const QPoly& q, const QPoly& b) {
  QPoly out = a;
  if (!q.empty() && !b.empty()) {
    out.resize(std::max(out.size(), q.size() + b.size() - 1), 0);
    for (std::size_t i = 0; i < q.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] -= q[i] * b[j];
  }
  qtrim(out);
  return out;
}

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

// Value of x at c = 2cos(2 pi k / n) in working precision w; err receives an
// upper bound on the absolute error.
void eval_embedding(const FieldElem& x, unsigned k, mpfr_prec_t w, mpfr_ptr out, mpfr_ptr err) {
  const auto& f = *x.field();
  const unsigned d = f.degree();
  Mpfr cval(w), t(w), bound(64);
  if (f.n() <= 2) {
    mpfr_set_ui(cval.get(), 2, MPFR_RNDN);
  } else {
    mpfr_const_pi(cval.get(), MPFR_RNDN);
    mpfr_mul_ui(cval.get(), cval.get(), 2 * k, MPFR_RNDN);
    mpfr_div_ui(cval.get(), cval.get(), f.n(), MPFR_RNDN);
    mpfr_cos(cval.get(), cval.get(), MPFR_RNDN);
    mpfr_mul_ui(cval.get(), cval.get(), 2, MPFR_RNDN);
  }
  mpfr_set_ui(out, 0, MPFR_RNDN);
  mpfr_set_ui(bound.get(), 0, MPFR_RNDU);
  for (unsigned j = d; j-- > 0;) {
    mpfr_mul(out, out, cval.get(), MPFR_RNDN);
    mpfr_set_q(t.get(), x[j].get_mpq_t(), MPFR_RNDN);
    mpfr_add(out, out, t.get(), MPFR_RNDN);
    // bound accumulates sum |x_j| 2^j via Horner with |c| <= 2
    mpfr_mul_ui(bound.get(), bound.get(), 2, MPFR_RNDU);
    mpfr_set_q(t.get(), x[j].get_mpq_t(), MPFR_RNDU);
    mpfr_abs(t.get(), t.get(), MPFR_RNDU);
    mpfr_add(bound.get(), bound.get(), t.get(), MPFR_RNDU);
  }
  // Each of the O(d) roundings, and the error in c, contributes a relative
  // error of 2^-w against the magnitude bound; 16(d+4) covers all of them.
  mpfr_mul_ui(err, bound.get(), 16 * (d + 4), MPFR_RNDU);
  mpfr_mul_2si(err, err, -static_cast<long>(w) + 1, MPFR_RNDU);
}

}  // namespace

RealCycloField::RealCycloField(unsigned n) : n_(n) {
  if (n == 0) throw Error(ErrorKind::Internal, "conductor must be positive");
  d_ = real_degree(n);
  if (n <= 2) {
    minpoly_ = {-2, 1};
    emb_k_ = {0};
  } else {
    const ZVec phi = cyclotomic(n);
    const std::size_t deg = phi.size() - 1;
    ZVec s(deg, 0);
    s[1 % deg] += 1;
    ZVec xn1(n, 0);
    xn1[n - 1] = 1;
    ZVec red = zmulmod(xn1, ZVec{1}, phi);
    for (std::size_t i = 0; i < deg; ++i) s[i] += red[i];
    std::vector<ZVec> pows;
    ZVec cur(deg, 0);
    cur[0] = 1;
    for (unsigned k = 0; k <= d_; ++k) {
      pows.push_back(cur);
      cur = zmulmod(cur, s, phi);
    }
    ZVec target = pows.back();
    pows.pop_back();
    QVec a = solve_columns(pows, target);
    minpoly_.assign(d_ + 1, 0);
    minpoly_[d_] = 1;
    for (unsigned k = 0; k < d_; ++k) {
      if (a[k].get_den() != 1) throw Error(ErrorKind::Internal, "non-integral minimal polynomial");
      minpoly_[k] = -a[k].get_num();
    }
    for (unsigned k = 1; 2 * k < n; ++k)
      if (std::gcd(k, n) == 1) emb_k_.push_back(k);
  }

  const unsigned top = 2 * d_ - 1;
  powers_.assign(top, ZVec(d_, 0));
  for (unsigned e = 0; e < top; ++e) {
    if (e < d_) {
      powers_[e][e] = 1;
      continue;
    }
    const ZVec& prev = powers_[e - 1];
    ZVec next(d_, 0);
    for (unsigned j = 0; j + 1 < d_; ++j) next[j + 1] = prev[j];
    const mpz_class lead = prev[d_ - 1];
    for (unsigned j = 0; j < d_; ++j) next[j] -= lead * minpoly_[j];
    powers_[e] = next;
  }

  // Newton identities for power sums of the roots.
  ZVec p(d_, 0);
  p[0] = d_;
  for (unsigned k = 1; k < d_; ++k) {
    mpz_class v = -mpz_class(k) * minpoly_[d_ - k];
    for (unsigned i = 1; i < k; ++i) v -= minpoly_[d_ - i] * p[k - i];
    p[k] = v;
  }
  power_traces_.assign(top, 0);
  for (unsigned e = 0; e < top; ++e)
    for (unsigned j = 0; j < d_; ++j) power_traces_[e] += powers_[e][j] * p[j];

  ZMat tm(d_, ZVec(d_));
  for (unsigned i = 0; i < d_; ++i)
    for (unsigned j = 0; j < d_; ++j) tm[i][j] = power_traces_[i + j];
  disc_ = nt::det(tm);
}

Field RealCycloField::get(unsigned n) {
  static std::mutex mu;
  static std::map<unsigned, Field> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Field f(new RealCycloField(n));
  cache.emplace(n, f);
  return f;
}

QVec RealCycloField::mul(const QVec& x, const QVec& y) const {
  QVec prod(2 * d_ - 1, 0);
  for (unsigned i = 0; i < d_; ++i) {
    if (x[i] == 0) continue;
    for (unsigned j = 0; j < d_; ++j) prod[i + j] += x[i] * y[j];
  }
  QVec out(prod.begin(), prod.begin() + d_);
  for (unsigned e = d_; e < 2 * d_ - 1; ++e) {
    if (prod[e] == 0) continue;
    for (unsigned j = 0; j < d_; ++j) out[j] += prod[e] * powers_[e][j];
  }
  return out;
}

ZVec RealCycloField::mul(const ZVec& x, const ZVec& y) const {
  ZVec prod(2 * d_ - 1, 0);
  for (unsigned i = 0; i < d_; ++i) {
    if (x[i] == 0) continue;
    for (unsigned j = 0; j < d_; ++j) prod[i + j] += x[i] * y[j];
  }
  ZVec out(prod.begin(), prod.begin() + d_);
  for (unsigned e = d_; e < 2 * d_ - 1; ++e) {
    if (prod[e] == 0) continue;
    for (unsigned j = 0; j < d_; ++j) out[j] += prod[e] * powers_[e][j];
  }
  return out;
}

int RealBall::sign() const {
  if (mid > rad) return 1;
  if (mid < -rad) return -1;
  return 0;
}

FieldElem::FieldElem(Field f) : field_(std::move(f)) { coeffs_.assign(field_->degree(), 0); }

FieldElem::FieldElem(Field f, const mpq_class& q) : FieldElem(std::move(f)) { coeffs_[0] = q; }

FieldElem::FieldElem(Field f, QVec coeffs) : field_(std::move(f)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != field_->degree())
    throw Error(ErrorKind::Internal, "coefficient vector has wrong length");
}

FieldElem FieldElem::gen(Field f) {
  FieldElem x(f);
  if (f->degree() == 1) {
    x.coeffs_[0] = -mpq_class(f->minpoly()[0]);
  } else {
    x.coeffs_[1] = 1;
  }
  return x;
}

void FieldElem::check_same(const FieldElem& o) const {
  if (field_ != o.field_ && field_->n() != o.field_->n())
    throw Error(ErrorKind::FieldMismatch, "elements of different fields");
}

bool FieldElem::is_zero() const {
  for (const auto& x : coeffs_)
    if (x != 0) return false;
  return true;
}

bool FieldElem::is_rational() const {
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) return false;
  return true;
}

bool FieldElem::is_integral() const {
  for (const auto& x : coeffs_)
    if (x.get_den() != 1) return false;
  return true;
}

FieldElem FieldElem::operator-() const {
  FieldElem r = *this;
  for (auto& x : r.coeffs_) x = -x;
  return r;
}

FieldElem& FieldElem::operator+=(const FieldElem& o) {
  check_same(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

FieldElem& FieldElem::operator-=(const FieldElem& o) {
  check_same(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

FieldElem& FieldElem::operator*=(const FieldElem& o) {
  check_same(o);
  coeffs_ = field_->mul(coeffs_, o.coeffs_);
  return *this;
}

FieldElem& FieldElem::operator*=(const mpq_class& q) {
  for (auto& x : coeffs_) x *= q;
  return *this;
}

FieldElem& FieldElem::operator/=(const FieldElem& o) {
  check_same(o);
  return *this *= o.inverse();
}

bool FieldElem::operator==(const FieldElem& o) const {
  check_same(o);
  return coeffs_ == o.coeffs_;
}

FieldElem FieldElem::inverse() const {
  if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero field element");
  const auto& mp = field_->minpoly();
  QPoly r0(mp.begin(), mp.end()), r1 = coeffs_;
  qtrim(r1);
  QPoly t0, t1{1};
  while (!r1.empty()) {
    QPoly q, r;
    qdivmod(r0, r1, q, r);
    QPoly t2 = qsub_mul(t0, q, t1);
    r0 = std::move(r1);
    r1 = std::move(r);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.size() != 1) throw Error(ErrorKind::Internal, "minimal polynomial not irreducible");
  QPoly unused, red;
  qdivmod(t0, QPoly(mp.begin(), mp.end()), unused, red);
  QVec out(field_->degree(), 0);
  for (std::size_t i = 0; i < red.size(); ++i) out[i] = red[i] / r0[0];
  return FieldElem(field_, std::move(out));
}

FieldElem FieldElem::pow(long e) const {
  FieldElem base = e < 0 ? inverse() : *this;
  unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  FieldElem result(field_, 1);
  while (k) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return result;
}

mpq_class FieldElem::trace() const {
  mpq_class t = 0;
  for (unsigned j = 0; j < coeffs_.size(); ++j) t += coeffs_[j] * field_->power_trace(j);
  return t;
}

mpq_class FieldElem::norm() const {
  const unsigned d = field_->degree();
  QMat m(d, QVec(d));
  QVec basis(d, 0);
  for (unsigned j = 0; j < d; ++j) {
    std::fill(basis.begin(), basis.end(), 0);
    basis[j] = 1;
    m[j] = field_->mul(coeffs_, basis);
  }
  return nt::det(m);
}

std::string FieldElem::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = coeffs_.size(); j-- > 0;) {
    mpq_class v = coeffs_[j];
    if (v == 0) continue;
    const bool neg = v < 0;
    if (neg) v = -v;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    if (j == 0) {
      os << v.get_str();
      continue;
    }
    if (v != 1) os << v.get_str() << "*";
    os << "c";
    if (j > 1) os << "^" << j;
  }
  if (first) return "0";
  return os.str();
}

FieldElem cheby(const Field& f, long k) {
  const long n = f->n();
  k = ((k % n) + n) % n;
  if (k > n / 2) k = n - k;
  FieldElem prev(f, 2);
  if (k == 0) return prev;
  FieldElem c = FieldElem::gen(f);
  FieldElem cur = c;
  for (long i = 1; i < k; ++i) {
    FieldElem next = c * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

FieldElem sqrt_small(const Field& f, unsigned m) {
  const unsigned n = f->n();
  if (m == 2) {
    if (n % 8 != 0) throw Error(ErrorKind::NotPresent, "sqrt2 needs 8 | n, n=" + std::to_string(n));
    return cheby(f, n / 8);
  }
  if (m == 5) {
    if (n % 5 != 0) throw Error(ErrorKind::NotPresent, "sqrt5 needs 5 | n, n=" + std::to_string(n));
    return cheby(f, n / 5) * mpq_class(2) + FieldElem(f, 1);
  }
  throw Error(ErrorKind::NotPresent, "only sqrt of 2 and 5 are supported");
}

std::pair<mpq_class, mpq_class> trace_norm(const FieldElem& x) { return {x.trace(), x.norm()}; }

std::vector<std::pair<unsigned, unsigned>> factor_prime(const Field& f, unsigned long p) {
  std::vector<std::pair<unsigned, unsigned>> out;
  for (const auto& fd : nt::fp_factor_degrees(f->minpoly(), p)) out.emplace_back(fd.multiplicity, fd.degree);
  return out;
}

FieldElem cyclo_trace(const Field& f, unsigned m) {
  if (m == 0) throw Error(ErrorKind::NoEmbedding, "m must be positive");
  if (real_degree(m) == 1) {
    static const std::map<unsigned, int> values{{1, 2}, {2, -2}, {3, -1}, {4, 0}, {6, 1}};
    return FieldElem(f, values.at(m));
  }
  const unsigned n = f->n();
  if (n % m == 0) return cheby(f, n / m);
  if (m % 4 == 2 && n % (m / 2) == 0) {
    const unsigned h = m / 2;
    return -cheby(f, static_cast<long>(n / h) * ((h + 1) / 2));
  }
  throw Error(ErrorKind::NoEmbedding,
              "real subfield of conductor " + std::to_string(m) + " not in n=" + std::to_string(n));
}

FieldElem subfield_lift(const FieldElem& x, unsigned n_big) {
  Field big = RealCycloField::get(n_big);
  const auto& small = *x.field();
  if (small.degree() == 1) return FieldElem(big, x[0]);
  FieldElem img = cyclo_trace(big, small.n());
  FieldElem check(big, 0);
  for (std::size_t j = small.minpoly().size(); j-- > 0;) check = check * img + FieldElem(big, mpq_class(small.minpoly()[j]));
  if (!check.is_zero()) throw Error(ErrorKind::NoEmbedding, "lifted generator fails minimal polynomial");
  FieldElem out(big, 0);
  for (std::size_t j = small.degree(); j-- > 0;) out = out * img + FieldElem(big, x[j]);
  return out;
}

std::vector<RealBall> real_embeddings(const FieldElem& x, unsigned precision) {
  if (precision < 53) precision = 53;
  const mpfr_prec_t w = precision + 40;
  std::vector<RealBall> out;
  Mpfr val(w), err(64), diff(w);
  for (unsigned k : x.field()->embedding_indices()) {
    eval_embedding(x, k, w, val.get(), err.get());
    RealBall b;
    b.mid = mpfr_get_ld(val.get(), MPFR_RNDN);
    mpfr_set_ld(diff.get(), b.mid, MPFR_RNDN);
    mpfr_sub(diff.get(), diff.get(), val.get(), MPFR_RNDU);
    mpfr_abs(diff.get(), diff.get(), MPFR_RNDU);
    mpfr_add(diff.get(), diff.get(), err.get(), MPFR_RNDU);
    b.rad = mpfr_get_ld(diff.get(), MPFR_RNDU);
    out.push_back(b);
  }
  return out;
}

std::vector<int> embedding_signs(const FieldElem& x) {
  const auto& ks = x.field()->embedding_indices();
  if (x.is_zero()) return std::vector<int>(ks.size(), 0);
  std::vector<int> out;
  for (unsigned k : ks) {
    int s = 0;
    for (mpfr_prec_t w = 96; w <= 8192 && s == 0; w *= 2) {
      Mpfr val(w), err(64), mag(w);
      eval_embedding(x, k, w, val.get(), err.get());
      mpfr_abs(mag.get(), val.get(), MPFR_RNDD);
      if (mpfr_cmp(mag.get(), err.get()) > 0) s = mpfr_sgn(val.get()) > 0 ? 1 : -1;
    }
    if (s == 0) throw Error(ErrorKind::PrecisionExhausted, "cannot certify sign of " + x.to_string());
    out.push_back(s);
  }
  return out;
}

bool is_totally_positive(const FieldElem& x) {
  for (int s : embedding_signs(x))
    if (s <= 0) return false;
  return true;
}

bool is_totally_negative(const FieldElem& x) {
  for (int s : embedding_signs(x))
    if (s >= 0) return false;
  return true;
}

}  // namespace quatlat
