#include "quatlat/quatalg.hpp"

#include <map>
#include <mutex>

#include "quatlat/error.hpp"

namespace quatlat {

Algebra SymbolAlgebra::build(const Field& f, const FieldElem& a, const FieldElem& b) {
  if (a.is_zero() || b.is_zero()) throw Error(ErrorKind::ZeroParameter, "symbol algebra needs a, b nonzero");
  std::shared_ptr<SymbolAlgebra> alg(new SymbolAlgebra());
  alg->field_ = f;
  alg->a_ = a;
  alg->b_ = b;
  alg->ab_ = a * b;
  alg->definite_ = is_totally_negative(a) && is_totally_negative(b);
  return alg;
}

Algebra SymbolAlgebra::standard(unsigned n) {
  static std::mutex mu;
  static std::map<unsigned, Algebra> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  Field f = RealCycloField::get(n);
  Algebra alg = build(f, FieldElem(f, -1), FieldElem(f, -1));
  cache.emplace(n, alg);
  return alg;
}

bool SymbolAlgebra::is_standard() const {
  FieldElem m1(field_, -1);
  return a_ == m1 && b_ == m1;
}

bool SymbolAlgebra::same_as(const SymbolAlgebra& o) const {
  return this == &o || (field_->n() == o.field_->n() && a_ == o.a_ && b_ == o.b_);
}

std::string SymbolAlgebra::describe() const {
  return "(" + a_.to_string() + ", " + b_.to_string() + ") over n=" + std::to_string(field_->n());
}

Quaternion::Quaternion(Algebra alg) : alg_(std::move(alg)) {
  for (auto& x : u_) x = FieldElem(alg_->field());
}

Quaternion::Quaternion(Algebra alg, FieldElem u0, FieldElem u1, FieldElem u2, FieldElem u3)
    : alg_(std::move(alg)), u_{std::move(u0), std::move(u1), std::move(u2), std::move(u3)} {}

Quaternion::Quaternion(Algebra alg, const FieldElem& scalar) : Quaternion(std::move(alg)) { u_[0] = scalar; }

Quaternion Quaternion::unit(Algebra alg, int which) {
  Quaternion q(alg);
  q.u_[which] = FieldElem(alg->field(), 1);
  return q;
}

Quaternion Quaternion::from_coords(Algebra alg, const QVec& v) {
  const unsigned d = alg->field()->degree();
  if (v.size() != 4 * d) throw Error(ErrorKind::Internal, "coordinate vector has wrong length");
  Quaternion q(alg);
  for (int m = 0; m < 4; ++m) q.u_[m] = FieldElem(alg->field(), QVec(v.begin() + m * d, v.begin() + (m + 1) * d));
  return q;
}

QVec Quaternion::coords() const {
  QVec out;
  out.reserve(4 * alg_->field()->degree());
  for (const auto& x : u_) out.insert(out.end(), x.coeffs().begin(), x.coeffs().end());
  return out;
}

void Quaternion::check_same(const Quaternion& o) const {
  if (alg_ != o.alg_ && !alg_->same_as(*o.alg_))
    throw Error(ErrorKind::AlgebraMismatch, "quaternions from different algebras");
}

bool Quaternion::is_zero() const {
  for (const auto& x : u_)
    if (!x.is_zero()) return false;
  return true;
}

bool Quaternion::operator==(const Quaternion& o) const {
  check_same(o);
  for (int m = 0; m < 4; ++m)
    if (!(u_[m] == o.u_[m])) return false;
  return true;
}

Quaternion Quaternion::operator-() const {
  Quaternion r = *this;
  for (auto& x : r.u_) x = -x;
  return r;
}

Quaternion& Quaternion::operator+=(const Quaternion& o) {
  check_same(o);
  for (int m = 0; m < 4; ++m) u_[m] += o.u_[m];
  return *this;
}

Quaternion& Quaternion::operator-=(const Quaternion& o) {
  check_same(o);
  for (int m = 0; m < 4; ++m) u_[m] -= o.u_[m];
  return *this;
}

Quaternion& Quaternion::operator*=(const FieldElem& s) {
  for (auto& x : u_) x *= s;
  return *this;
}

Quaternion& Quaternion::operator*=(const mpq_class& q) {
  for (auto& x : u_) x *= q;
  return *this;
}

Quaternion operator*(const Quaternion& x, const Quaternion& y) {
  x.check_same(y);
  const auto& A = *x.alg_;
  const auto& a = A.a();
  const auto& b = A.b();
  const auto& ab = A.ab();
  const auto& p = x.u_;
  const auto& q = y.u_;
  Quaternion z(x.alg_);
  z.u_[0] = p[0] * q[0] + a * (p[1] * q[1]) + b * (p[2] * q[2]) - ab * (p[3] * q[3]);
  z.u_[1] = p[0] * q[1] + p[1] * q[0] - b * (p[2] * q[3]) + b * (p[3] * q[2]);
  z.u_[2] = p[0] * q[2] + p[2] * q[0] + a * (p[1] * q[3]) - a * (p[3] * q[1]);
  z.u_[3] = p[0] * q[3] + p[3] * q[0] + p[1] * q[2] - p[2] * q[1];
  return z;
}

Quaternion Quaternion::conj() const {
  return Quaternion(alg_, u_[0], -u_[1], -u_[2], -u_[3]);
}

FieldElem Quaternion::trd() const { return u_[0] * mpq_class(2); }

FieldElem Quaternion::nrd() const {
  const auto& A = *alg_;
  return u_[0] * u_[0] - A.a() * (u_[1] * u_[1]) - A.b() * (u_[2] * u_[2]) + A.ab() * (u_[3] * u_[3]);
}

Quaternion Quaternion::inverse() const {
  FieldElem nr = nrd();
  if (nr.is_zero()) throw Error(ErrorKind::ZeroDivisor, "quaternion with zero reduced norm");
  return conj() * nr.inverse();
}

Quaternion Quaternion::pow(long e) const {
  Quaternion base = e < 0 ? inverse() : *this;
  unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  Quaternion result(alg_, FieldElem(alg_->field(), 1));
  while (k) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

bool Quaternion::is_integral() const { return trd().is_integral() && nrd().is_integral(); }

std::string Quaternion::to_string() const {
  static const char* names[] = {"", "i", "j", "k"};
  std::string out;
  for (int m = 0; m < 4; ++m) {
    if (u_[m].is_zero()) continue;
    std::string s = u_[m].to_string();
    std::string term;
    if (m == 0) {
      term = u_[m].is_rational() ? s : "(" + s + ")";
    } else if (s == "1") {
      term = names[m];
    } else if (s == "-1") {
      term = std::string("-") + names[m];
    } else if (u_[m].is_rational()) {
      term = s + "*" + names[m];
    } else {
      term = "(" + s + ")*" + names[m];
    }
    if (!out.empty()) {
      if (term[0] == '-') {
        out += " - " + term.substr(1);
      } else {
        out += " + " + term;
      }
    } else {
      out = term;
    }
  }
  return out.empty() ? "0" : out;
}

unsigned long multiplicative_order(const Quaternion& x, unsigned long bound) {
  Quaternion one(x.algebra(), FieldElem(x.algebra()->field(), 1));
  Quaternion p = x;
  for (unsigned long k = 1; k <= bound; ++k) {
    if (p == one) return k;
    p = p * x;
  }
  return 0;
}

}  // namespace quatlat
