#pragma once

// Integer lattices: Hermite normal form, LLL on Gram matrices, and exact
// short-vector enumeration.

#include <functional>
#include <vector>

#include "quatlat/nt.hpp"

namespace quatlat::lat {

// Row-style HNF of the lattice spanned by the rows: upper triangular, zero
// rows dropped, rows ordered by pivot column, positive pivots, entries above
// each pivot reduced into [0, pivot).
ZMat hnf(const ZMat& rows);

// Incremental HNF builder; switches to arithmetic modulo a multiple of the
// index once the lattice has full rank.
class HnfBuilder {
 public:
  explicit HnfBuilder(std::size_t dim);
  // Returns true if v was not already in the lattice.
  bool insert(ZVec v);
  bool contains(const ZVec& v) const;
  // Declare that m * Z^dim lies in the final lattice.
  void set_modulus(const mpz_class& m);
  std::size_t rank() const { return rank_; }
  std::size_t dim() const { return dim_; }
  ZMat result() const;

 private:
  void reduce_mod(ZVec& v, std::size_t from) const;
  void update_modulus();

  std::size_t dim_;
  std::size_t rank_ = 0;
  std::vector<ZVec> piv_;  // piv_[j] empty if no pivot at column j
  mpz_class modulus_;      // 0 until full rank
};

// A lattice (1/denom) * span(rows) with rows in canonical HNF and
// gcd(denom, entries) = 1.
struct RatLattice {
  std::size_t dim = 0;
  mpz_class denom = 1;
  ZMat rows;

  std::size_t rank() const { return rows.size(); }
  QMat basis() const;
  bool operator==(const RatLattice& o) const { return dim == o.dim && denom == o.denom && rows == o.rows; }
};

RatLattice make_lattice(const QMat& rows, std::size_t dim);
RatLattice make_lattice(const ZMat& rows, const mpz_class& denom, std::size_t dim);
bool contains(const RatLattice& lat, const QVec& v);
bool contains(const RatLattice& big, const RatLattice& small);
// Coordinates of v in the HNF basis (throws NotPresent if v is not in lat).
ZVec coordinates(const RatLattice& lat, const QVec& v);
// [big : small] for full-rank small inside big.
mpz_class index(const RatLattice& big, const RatLattice& small);

// det(B B^T), or det(B G B^T) when a Gram matrix for the ambient space is
// supplied; RankDeficient unless the lattice has full rank.
mpq_class lattice_det(const RatLattice& lat, const QMat* gram = nullptr);

// Exact test via LDL^T pivots.
bool is_positive_definite(const ZMat& gram);

// LLL (delta = 0.99) on a positive definite integer Gram matrix. Returns the
// unimodular U with U G U^T reduced; NotPositiveDefinite otherwise.
ZMat lll_gram(const ZMat& gram);

// LLL-reduce a basis (linearly independent rows) under an ambient rational
// Gram matrix (identity when null); the result spans the same lattice.
QMat lll_reduce(const QMat& basis, const QMat* gram = nullptr);
QMat lll_reduce(const RatLattice& lat, const QMat* gram = nullptr);

using VecFilter = std::function<bool(const ZVec&)>;

// All integer x with x^T G x == target (both signs), in lexicographic order,
// keeping those accepted by filter. Pruning uses a floating Cholesky factor
// whose error against G is bounded exactly, so no solution is lost.
std::vector<ZVec> enumerate_exact(const ZMat& gram, const mpz_class& target,
                                  const VecFilter& filter = nullptr, unsigned threads = 1);

}  // namespace quatlat::lat
