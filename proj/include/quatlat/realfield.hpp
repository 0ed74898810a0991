#pragma once

// The real cyclotomic field K = Q(z + 1/z), z a primitive n-th root of unity,
// with elements stored as rational coordinates in the power basis of c = z + 1/z.

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "quatlat/nt.hpp"

namespace quatlat {

class RealCycloField;
using Field = std::shared_ptr<const RealCycloField>;

class RealCycloField {
 public:
  // Memoized; repeated calls with the same n return the same object.
  static Field get(unsigned n);

  unsigned n() const { return n_; }
  unsigned degree() const { return d_; }
  // Monic, coefficients low to high, size degree()+1.
  const ZVec& minpoly() const { return minpoly_; }
  const mpz_class& disc() const { return disc_; }
  // Representatives k (ascending) of the real embeddings c -> 2cos(2 pi k / n).
  const std::vector<unsigned>& embedding_indices() const { return emb_k_; }

  // Coordinates of c^e for 0 <= e <= 2d-2, reduced modulo minpoly.
  const ZVec& power(unsigned e) const { return powers_[e]; }
  // Tr_{K/Q}(c^e) for 0 <= e <= 2d-2.
  const mpz_class& power_trace(unsigned e) const { return power_traces_[e]; }

  // Multiply coefficient vectors (length d) modulo minpoly.
  QVec mul(const QVec& x, const QVec& y) const;
  ZVec mul(const ZVec& x, const ZVec& y) const;

 private:
  explicit RealCycloField(unsigned n);

  unsigned n_;
  unsigned d_;
  ZVec minpoly_;
  mpz_class disc_;
  std::vector<unsigned> emb_k_;
  std::vector<ZVec> powers_;
  ZVec power_traces_;
};

// Certified real approximation: |true value - mid| <= rad.
struct RealBall {
  long double mid = 0;
  long double rad = 0;
  int sign() const;  // 0 when the ball straddles zero
};

class FieldElem {
 public:
  FieldElem() = default;
  explicit FieldElem(Field f);  // zero
  FieldElem(Field f, const mpq_class& q);
  FieldElem(Field f, QVec coeffs);

  static FieldElem gen(Field f);  // c

  const Field& field() const { return field_; }
  const QVec& coeffs() const { return coeffs_; }
  const mpq_class& operator[](std::size_t i) const { return coeffs_[i]; }

  bool is_zero() const;
  bool is_rational() const;
  bool is_integral() const;

  FieldElem operator-() const;
  FieldElem& operator+=(const FieldElem& o);
  FieldElem& operator-=(const FieldElem& o);
  FieldElem& operator*=(const FieldElem& o);
  FieldElem& operator*=(const mpq_class& q);
  FieldElem& operator/=(const FieldElem& o);
  friend FieldElem operator+(FieldElem x, const FieldElem& y) { return x += y; }
  friend FieldElem operator-(FieldElem x, const FieldElem& y) { return x -= y; }
  friend FieldElem operator*(FieldElem x, const FieldElem& y) { return x *= y; }
  friend FieldElem operator*(FieldElem x, const mpq_class& q) { return x *= q; }
  friend FieldElem operator*(const mpq_class& q, FieldElem x) { return x *= q; }
  friend FieldElem operator/(FieldElem x, const FieldElem& y) { return x /= y; }
  bool operator==(const FieldElem& o) const;

  FieldElem inverse() const;
  FieldElem pow(long e) const;

  mpq_class trace() const;
  mpq_class norm() const;

  // Parseable rendering as a polynomial in c, e.g. "c^2 - 1/2*c + 3".
  std::string to_string() const;

 private:
  void check_same(const FieldElem& o) const;

  Field field_;
  QVec coeffs_;
};

// z^k + z^-k as an element of K.
FieldElem cheby(const Field& f, long k);

// Square root of 2 (needs 8 | n) or 5 (needs 5 | n), positive under the first embedding.
FieldElem sqrt_small(const Field& f, unsigned m);

std::pair<mpq_class, mpq_class> trace_norm(const FieldElem& x);

// (e, f) for each prime of Z[c] above p.
std::vector<std::pair<unsigned, unsigned>> factor_prime(const Field& f, unsigned long p);

// zeta_m + zeta_m^-1 inside K (oriented by the first embedding), or NoEmbedding.
FieldElem cyclo_trace(const Field& f, unsigned m);

// Image of x under K_n -> K_{n_big}, c_n -> cyclo_trace(K_{n_big}, n).
FieldElem subfield_lift(const FieldElem& x, unsigned n_big);

// Value of x under each real embedding, error below 2^-precision.
std::vector<RealBall> real_embeddings(const FieldElem& x, unsigned precision = 64);

// Certified signs under every embedding; PrecisionExhausted if undecidable.
std::vector<int> embedding_signs(const FieldElem& x);
bool is_totally_positive(const FieldElem& x);
bool is_totally_negative(const FieldElem& x);

}  // namespace quatlat
