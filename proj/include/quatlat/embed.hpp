#pragma once

// Roots of unity inside a quaternion algebra, the orders R[d^p, j] they
// generate, and the search over the algebras (-1, -(c^2n' + c^2m')).

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quatlat/normone.hpp"

namespace quatlat {

struct RootEmbedding {
  Algebra alg;
  unsigned m = 0;
  Quaternion d;  // trd(d) = z_m + 1/z_m, nrd(d) = 1, order exactly m
};

// NotEmbeddable if the real subfield of conductor m is not inside K;
// SearchExhausted if no pure quaternion of the needed norm is found in
// (1/2) * (R i + R j + R k).
RootEmbedding embed_root(const Algebra& alg, unsigned m);

// order_closure of {d^power, j}.
QuatOrder crossed_order(const RootEmbedding& emb, long power);

struct MaximalSearchHit {
  QuatOrder order;
  UnitGroup group;
  std::size_t tried = 0;  // maximal orders examined up to this one
};

// Runs through the maximal orders containing O, one local choice per prime
// with the last prime varying fastest, and returns the first whose norm-one
// group satisfies pred (at most max_orders are examined). Without walk the
// local choices are only those of p_maximal_overorders' branching.
std::optional<MaximalSearchHit> search_maximal_orders(const QuatOrder& O,
                                                      const std::function<bool(const UnitGroup&)>& pred,
                                                      std::size_t max_orders = 256, unsigned threads = 1,
                                                      bool walk = false);

struct VariantResult {
  unsigned n1 = 0;
  unsigned m1 = 0;
  Algebra alg;
  QuatOrder order;  // maximal
  UnitGroup group;
  std::size_t tried = 0;  // maximal orders examined up to this one
};

struct VariantFailure {
  unsigned n1 = 0;
  unsigned m1 = 0;
  std::string error;
};

struct VariantReport {
  std::vector<VariantResult> matches;  // in the order of the input pairs
  std::vector<VariantFailure> failures;
};

// -(c^2n' + c^2m') as an element of K.
FieldElem variant_parameter(const Field& f, unsigned n1, unsigned m1);

// For each (n', m'), searches the maximal orders of (-1, -(c^2n' + c^2m'))
// that contain R[i, j] for one whose norm-one group satisfies pred.
VariantReport variant_search(const Field& f, const std::vector<std::pair<unsigned, unsigned>>& pairs,
                             const std::function<bool(const UnitGroup&)>& pred, unsigned threads = 1,
                             std::size_t max_orders = 256);

}  // namespace quatlat
