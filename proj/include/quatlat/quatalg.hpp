#pragma once

// Symbol algebras (a,b) over K: i^2 = a, j^2 = b, ij = -ji = k.

#include <array>
#include <memory>
#include <string>

#include "quatlat/realfield.hpp"

namespace quatlat {

class SymbolAlgebra;
using Algebra = std::shared_ptr<const SymbolAlgebra>;

class SymbolAlgebra {
 public:
  // ZeroParameter if a or b vanishes.
  static Algebra build(const Field& f, const FieldElem& a, const FieldElem& b);
  static Algebra standard(unsigned n);  // (-1,-1) over K_n

  const Field& field() const { return field_; }
  const FieldElem& a() const { return a_; }
  const FieldElem& b() const { return b_; }
  const FieldElem& ab() const { return ab_; }
  bool definite() const { return definite_; }
  bool is_standard() const;  // a = b = -1

  bool same_as(const SymbolAlgebra& o) const;
  std::string describe() const;

 private:
  SymbolAlgebra() = default;

  Field field_;
  FieldElem a_, b_, ab_;
  bool definite_ = false;
};

class Quaternion {
 public:
  Quaternion() = default;
  explicit Quaternion(Algebra alg);  // zero
  Quaternion(Algebra alg, FieldElem u0, FieldElem u1, FieldElem u2, FieldElem u3);
  Quaternion(Algebra alg, const FieldElem& scalar);

  static Quaternion unit(Algebra alg, int which);  // 0:1, 1:i, 2:j, 3:k
  // Coordinates s = m*d + alpha for the coefficient of c^alpha in component m.
  static Quaternion from_coords(Algebra alg, const QVec& v);
  QVec coords() const;

  const Algebra& algebra() const { return alg_; }
  const FieldElem& operator[](int m) const { return u_[m]; }

  bool is_zero() const;
  bool operator==(const Quaternion& o) const;

  Quaternion operator-() const;
  Quaternion& operator+=(const Quaternion& o);
  Quaternion& operator-=(const Quaternion& o);
  Quaternion& operator*=(const FieldElem& s);
  Quaternion& operator*=(const mpq_class& q);
  friend Quaternion operator+(Quaternion x, const Quaternion& y) { return x += y; }
  friend Quaternion operator-(Quaternion x, const Quaternion& y) { return x -= y; }
  friend Quaternion operator*(Quaternion x, const FieldElem& s) { return x *= s; }
  friend Quaternion operator*(const FieldElem& s, Quaternion x) { return x *= s; }
  friend Quaternion operator*(Quaternion x, const mpq_class& q) { return x *= q; }
  friend Quaternion operator*(const mpq_class& q, Quaternion x) { return x *= q; }
  friend Quaternion operator*(const Quaternion& x, const Quaternion& y);

  Quaternion conj() const;
  FieldElem trd() const;
  FieldElem nrd() const;
  Quaternion inverse() const;  // ZeroDivisor when nrd = 0
  Quaternion pow(long e) const;

  bool is_integral() const;  // trd and nrd in Z[c]
  std::string to_string() const;

 private:
  void check_same(const Quaternion& o) const;

  Algebra alg_;
  std::array<FieldElem, 4> u_;
};

// Order of x in the unit group, or 0 if x^k != 1 for all k <= bound.
unsigned long multiplicative_order(const Quaternion& x, unsigned long bound = 1000);

}  // namespace quatlat
