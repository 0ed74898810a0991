#include <gtest/gtest.h>

#include "property_checks.hpp"
#include "quatlat/expr.hpp"
#include "quatlat/normone.hpp"

using namespace quatlat;

namespace {

Quaternion q(const Algebra& A, const std::string& s) { return parse_element(s, ExprContext{A, std::nullopt, {}}); }

QuatOrder lipschitz(unsigned n) {
  Algebra A = SymbolAlgebra::standard(n);
  return order_closure(A, {q(A, "i"), q(A, "j")});
}

}  // namespace

TEST(NormOne, Quaternion8) {
  const UnitGroup G = norm_one_group(lipschitz(1));
  EXPECT_EQ(G.size(), 8u);
  EXPECT_EQ(G.tag().to_string(), "GeneralizedQuaternion(8)");
  EXPECT_FALSE(G.invariants().abelian);
  EXPECT_EQ(G.invariants().center_size, 2u);
  EXPECT_EQ(G.invariants().order_spectrum.at(4), 6u);
  EXPECT_TRUE(G.index_of(q(G.order().alg, "-k")).has_value());
  EXPECT_FALSE(G.index_of(q(G.order().alg, "(1+i+j+k)/2")).has_value());
  EXPECT_EQ(qtest::norm_one_exact(G.order()), "");
}

TEST(NormOne, Hurwitz) {
  const UnitGroup G = norm_one_group(maximize(lipschitz(1)));
  EXPECT_EQ(G.size(), 24u);
  EXPECT_EQ(G.tag().to_string(), "SL23");
  EXPECT_EQ(G.invariants().derived_size, 8u);
  EXPECT_EQ(G.invariants().max_element_order, 6u);
  EXPECT_TRUE(is_full(G));
}

TEST(NormOne, Icosians) {
  const UnitGroup G = norm_one_group(maximize(lipschitz(5)));
  EXPECT_EQ(G.size(), 120u);
  EXPECT_EQ(G.tag().to_string(), "SL25");
  EXPECT_TRUE(G.invariants().perfect);
  EXPECT_EQ(G.invariants().max_element_order, 10u);
  // Threaded enumeration gives the same element list.
  const UnitGroup T = norm_one_group(G.order(), 3);
  EXPECT_EQ(T.elements(), G.elements());
  EXPECT_EQ(qtest::norm_one_exact(G.order()), "");
}

TEST(NormOne, Cyclic) {
  Algebra A = SymbolAlgebra::standard(1);
  const UnitGroup G = norm_one_group(order_closure(A, {q(A, "i"), q(A, "3*j")}));
  EXPECT_EQ(G.size(), 4u);
  EXPECT_EQ(G.tag().to_string(), "Cyclic(4)");
  EXPECT_TRUE(G.invariants().cyclic);
  EXPECT_EQ(G.generated({}).size(), 1u);
}

TEST(NormOne, TagStrings) {
  for (const std::string s : {"Cyclic(8)", "GeneralizedQuaternion(32)", "SL23", "BinaryOctahedral", "SL25"}) {
    const auto t = parse_group_tag(s);
    ASSERT_TRUE(t.has_value()) << s;
    EXPECT_EQ(t->to_string(), s);
  }
  EXPECT_FALSE(parse_group_tag("Cyclic(x)").has_value());
  EXPECT_FALSE(parse_group_tag("Dihedral(8)").has_value());
}
