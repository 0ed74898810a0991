#pragma once

// The finite group of reduced-norm-one elements of an order in a definite
// algebra, with its multiplication table and recognition among the groups
// that can occur (cyclic, generalized quaternion, SL(2,3), binary
// octahedral, SL(2,5)).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quatlat/orders.hpp"

namespace quatlat {

enum class GroupKind { Cyclic, GeneralizedQuaternion, SL23, BinaryOctahedral, SL25, Unknown };

struct GroupTag {
  GroupKind kind = GroupKind::Unknown;
  std::size_t param = 0;  // m for Cyclic(m), 2n for GeneralizedQuaternion(2n)

  std::string to_string() const;
  bool operator==(const GroupTag& o) const { return kind == o.kind && param == o.param; }
};

// Accepts the output of GroupTag::to_string.
std::optional<GroupTag> parse_group_tag(const std::string& s);

struct GroupInvariants {
  std::map<std::size_t, std::size_t> order_spectrum;  // element order -> count
  std::size_t center_size = 0;
  std::size_t derived_size = 0;
  bool abelian = false;
  bool cyclic = false;
  bool perfect = false;
  bool derived_abelian = false;
  bool derived_cyclic = false;
  std::size_t max_element_order = 0;
};

class UnitGroup {
 public:
  const QuatOrder& order() const { return order_; }
  std::size_t size() const { return elements_.size(); }
  // Canonical order: identity first, then lexicographic in ambient coordinates.
  const std::vector<Quaternion>& elements() const { return elements_; }
  const Quaternion& element(std::size_t i) const { return elements_[i]; }
  std::uint32_t mul(std::size_t i, std::size_t j) const { return table_[i * size() + j]; }
  std::uint32_t inverse(std::size_t i) const { return inverse_[i]; }
  std::size_t element_order(std::size_t i) const { return orders_[i]; }
  std::optional<std::size_t> index_of(const Quaternion& x) const;

  const GroupInvariants& invariants() const { return inv_; }
  const GroupTag& tag() const { return tag_; }

  // Indices of the subgroup generated by gens (sorted).
  std::vector<std::uint32_t> generated(const std::vector<std::uint32_t>& gens) const;

 private:
  friend UnitGroup norm_one_group(const QuatOrder& O, unsigned threads);

  QuatOrder order_;
  std::vector<Quaternion> elements_;
  std::vector<QVec> coords_;
  std::vector<std::uint32_t> table_;
  std::vector<std::uint32_t> inverse_;
  std::vector<std::size_t> orders_;
  GroupInvariants inv_;
  GroupTag tag_;
};

// NotDefinite unless the algebra is totally definite.
UnitGroup norm_one_group(const QuatOrder& O, unsigned threads = 1);
const GroupInvariants& group_invariants(const UnitGroup& G);
GroupTag identify(const UnitGroup& G);
// Whether R[G] is a maximal order; abelian groups are never full.
bool is_full(const UnitGroup& G);

}  // namespace quatlat
