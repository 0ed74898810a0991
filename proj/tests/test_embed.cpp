#include <gtest/gtest.h>

#include "quatlat/embed.hpp"
#include "quatlat/error.hpp"
#include "quatlat/expr.hpp"

using namespace quatlat;

namespace {

Quaternion q(const Algebra& A, const std::string& s) { return parse_element(s, ExprContext{A, std::nullopt, {}}); }

}  // namespace

TEST(Embed, FourthRoot) {
  Algebra A = SymbolAlgebra::standard(1);
  const RootEmbedding e = embed_root(A, 4);
  EXPECT_TRUE(e.d.trd().is_zero());
  EXPECT_EQ(e.d.nrd(), FieldElem(A->field(), 1));
  EXPECT_EQ(multiplicative_order(e.d), 4u);
  EXPECT_EQ(e.d, q(A, "i"));
}

TEST(Embed, RootInvariants) {
  for (auto [n, m] : std::vector<std::pair<unsigned, unsigned>>{{5, 10}, {8, 8}, {16, 16}, {12, 12}, {24, 24}, {20, 20}, {64, 64}}) {
    Algebra A = SymbolAlgebra::standard(n);
    const RootEmbedding e = embed_root(A, m);
    EXPECT_EQ(e.d.trd(), cyclo_trace(A->field(), m)) << n << " " << m;
    EXPECT_EQ(e.d.nrd(), FieldElem(A->field(), 1));
    EXPECT_EQ(multiplicative_order(e.d), m) << n << " " << m;
  }
  // At n = m the root has the form (c + sqrt(c^2 - 4)) / 2 with the square root in R i.
  Algebra A = SymbolAlgebra::standard(64);
  const Quaternion d = embed_root(A, 64).d;
  EXPECT_EQ(d[0], FieldElem::gen(A->field()) * mpq_class(1, 2));
  EXPECT_TRUE(d[2].is_zero());
  EXPECT_TRUE(d[3].is_zero());
}

TEST(Embed, NotEmbeddable) {
  try {
    embed_root(SymbolAlgebra::standard(8), 5);
    FAIL() << "expected NotEmbeddable";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotEmbeddable);
  }
}

TEST(Embed, CrossedAtFive) {
  Algebra A = SymbolAlgebra::standard(5);
  const RootEmbedding e = embed_root(A, 10);
  const QuatOrder O = crossed_order(e, 1);
  EXPECT_TRUE(O.contains(e.d));
  EXPECT_TRUE(O.contains(q(A, "j")));
  const UnitGroup G = norm_one_group(O);
  EXPECT_EQ(G.size(), 120u);
  const auto xd = G.index_of(e.d), xj = G.index_of(q(A, "j"));
  ASSERT_TRUE(xd && xj);
  EXPECT_EQ(G.generated({static_cast<std::uint32_t>(*xd)}).size(), 10u);
  // In SL(2,5) the only proper subgroup over a cyclic group of order 10 is its
  // normalizer G_20, so <d, j> is G_20 exactly when j normalizes <d>.
  const Quaternion t = q(A, "j") * e.d * q(A, "j").inverse();
  bool normalizes = false;
  for (long p = 0; p < 10; ++p) normalizes = normalizes || t == e.d.pow(p);
  const auto sub = G.generated({static_cast<std::uint32_t>(*xd), static_cast<std::uint32_t>(*xj)});
  EXPECT_EQ(sub.size(), normalizes ? 20u : 120u);
}

TEST(Embed, Search) {
  Algebra A = SymbolAlgebra::standard(1);
  const QuatOrder L = order_closure(A, {q(A, "i"), q(A, "j")});
  const auto hit = search_maximal_orders(L, [](const UnitGroup& G) { return G.size() == 24; });
  ASSERT_TRUE(hit.has_value());
  EXPECT_TRUE(is_maximal(hit->order));
  EXPECT_EQ(hit->tried, 1u);
  EXPECT_FALSE(search_maximal_orders(L, [](const UnitGroup& G) { return G.size() == 1; }).has_value());
  EXPECT_FALSE(search_maximal_orders(L, [](const UnitGroup& G) { return G.size() == 1; }, 256, 1, true).has_value());
}

TEST(Embed, VariantParameter) {
  Field f = RealCycloField::get(56);
  FieldElem c = FieldElem::gen(f);
  EXPECT_EQ(variant_parameter(f, 8, 1), -(c.pow(16) + c.pow(2)));
  EXPECT_TRUE(is_totally_negative(variant_parameter(f, 8, 1)));
}
