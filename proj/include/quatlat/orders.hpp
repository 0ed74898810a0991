#pragma once

// Orders of a quaternion algebra, stored as Z-lattices of rank 4d in the
// ambient coordinates s = m*d + alpha (component m, power c^alpha).

#include <vector>

#include "quatlat/quatalg.hpp"
#include "quatlat/zlattice.hpp"

namespace quatlat {

struct QuatOrder {
  Algebra alg;
  lat::RatLattice lattice;
  ZMat gram_nrd;     // Tr_{K/Q}(trd(x conj(y))) on the lattice basis
  mpz_class disc_z;  // det of Tr_{K/Q}(trd(x y)) on the lattice basis

  unsigned degree() const { return alg->field()->degree(); }
  std::size_t rank() const { return lattice.rank(); }
  std::vector<Quaternion> zbasis() const;
  bool contains(const Quaternion& x) const;
  bool operator==(const QuatOrder& o) const { return alg->same_as(*o.alg) && lattice == o.lattice; }
};

// Wraps a lattice that is already known to be an order (caches the forms).
QuatOrder make_order(const Algebra& alg, const lat::RatLattice& lattice);

// Product of two ambient coordinate vectors.
QVec ambient_mul(const Algebra& alg, const QVec& x, const QVec& y);
// Symmetric ambient matrices of Tr(trd(x conj y)) and Tr(trd(x y)).
QMat nrd_form(const Algebra& alg);
QMat disc_form(const Algebra& alg);

// Z-lattice spanned by R * gens.
lat::RatLattice r_span(const Algebra& alg, const std::vector<QVec>& gens);
// A small set of R-module generators of an R-stable lattice.
std::vector<QVec> r_generators(const Algebra& alg, const lat::RatLattice& lattice);

QuatOrder order_closure(const Algebra& alg, const std::vector<Quaternion>& gens);
bool integrality_certificate(const QuatOrder& O, const Quaternion& x);
QuatOrder adjoin(const QuatOrder& O, const Quaternion& x);

struct PrimeAbove2 {
  unsigned e;
  unsigned f;
  unsigned local_degree;
};

struct RamificationData {
  std::vector<PrimeAbove2> primes;
  std::vector<PrimeAbove2> ramified;
  mpz_class norm_disc;
  mpz_class disc_target;
};

RamificationData ramification(const Algebra& alg);

// Jacobson radical of O/pO, as F_p row vectors in the coordinates of the
// lattice basis of O (reduced echelon form).
std::vector<std::vector<std::uint64_t>> radical_mod_p(const QuatOrder& O, unsigned long p);
// pO + lift of the radical.
lat::RatLattice radical_preimage(const QuatOrder& O, unsigned long p);

QuatOrder left_order(const Algebra& alg, const lat::RatLattice& I);
QuatOrder right_order(const Algebra& alg, const lat::RatLattice& I);
// Left idealizer {x : xI in I}; NotIdeal unless I is a two-sided O-ideal.
QuatOrder idealizer(const QuatOrder& O, const lat::RatLattice& I);

QuatOrder p_maximize(const QuatOrder& O, unsigned long p);
// The p-maximal orders reachable from O through radical idealizers and
// one-sided orders of maximal ideals, sorted by HNF. With walk, these are
// followed by the remaining p-maximal orders containing O, found by walking
// to neighboring maximal orders. At most limit are returned.
std::vector<QuatOrder> p_maximal_overorders(const QuatOrder& O, unsigned long p, std::size_t limit = 64,
                                           bool walk = false);
// Sum of orders that agree away from disjoint sets of primes.
QuatOrder sum_of_orders(const std::vector<QuatOrder>& orders);
// Primes that can divide the index of O in a maximal order.
std::vector<mpz_class> maximality_candidates(const QuatOrder& O);
QuatOrder maximize(const QuatOrder& O);
bool is_maximal(const QuatOrder& O);
bool is_azumaya(const QuatOrder& O);

QuatOrder extend_scalars(const QuatOrder& O, unsigned n_big);
bool equal_up_to_2_power(const QuatOrder& O1, const QuatOrder& O2);

}  // namespace quatlat
