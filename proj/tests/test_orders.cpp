#include <gtest/gtest.h>

#include "property_checks.hpp"
#include "quatlat/error.hpp"
#include "quatlat/expr.hpp"
#include "quatlat/normone.hpp"
#include "quatlat/orderio.hpp"
#include "quatlat/orders.hpp"

using namespace quatlat;

namespace {

Quaternion q(const Algebra& A, const std::string& s) { return parse_element(s, ExprContext{A, std::nullopt, {}}); }

QuatOrder lipschitz(unsigned n) {
  Algebra A = SymbolAlgebra::standard(n);
  return order_closure(A, {q(A, "i"), q(A, "j")});
}

}  // namespace

TEST(Orders, Lipschitz) {
  QuatOrder L = lipschitz(1);
  EXPECT_EQ(L.rank(), 4u);
  EXPECT_EQ(L.disc_z, -16);
  EXPECT_TRUE(L.contains(q(L.alg, "i*j")));
  EXPECT_FALSE(L.contains(q(L.alg, "(1+i+j+k)/2")));
  EXPECT_FALSE(is_maximal(L));
  EXPECT_EQ(maximality_candidates(L), std::vector<mpz_class>{2});
}

TEST(Orders, HurwitzFromMaximize) {
  QuatOrder L = lipschitz(1);
  QuatOrder H = maximize(L);
  EXPECT_EQ(abs(H.disc_z), 4);
  EXPECT_TRUE(H.contains(q(H.alg, "(1+i+j+k)/2")));
  EXPECT_TRUE(is_maximal(H));
  EXPECT_FALSE(is_azumaya(H));
  EXPECT_EQ(lat::index(H.lattice, L.lattice), 2);
  EXPECT_TRUE(p_maximize(L, 2) == H);
  EXPECT_TRUE(adjoin(L, q(L.alg, "(1-i-j-k)/2")) == H);
}

TEST(Orders, Radical) {
  QuatOrder L = lipschitz(1);
  QuatOrder H = maximize(L);
  EXPECT_EQ(radical_mod_p(L, 2).size(), 3u);
  EXPECT_EQ(radical_mod_p(H, 2).size(), 2u);
  EXPECT_EQ(radical_mod_p(H, 3).size(), 0u);
  // The radical at 2 of the Hurwitz order is its two-sided ideal of norm 2.
  EXPECT_EQ(lat::index(H.lattice, radical_preimage(H, 2)), 4);
  EXPECT_TRUE(right_order(H.alg, radical_preimage(H, 2)) == H);
  EXPECT_TRUE(left_order(H.alg, radical_preimage(H, 2)) == H);
}

TEST(Orders, ClosureAndAdjoin) {
  Algebra A = SymbolAlgebra::standard(8);
  try {
    order_closure(A, {q(A, "c*i")});
    FAIL() << "expected NotFullRank";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotFullRank);
  }
  try {
    order_closure(A, {q(A, "i/2"), q(A, "j")});
    FAIL() << "expected NotIntegralGenerator";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotIntegralGenerator);
  }
  QuatOrder L = lipschitz(8);
  EXPECT_EQ(L.rank(), 8u);
  QuatOrder bigger = adjoin(L, q(A, "(1+i)/c"));
  EXPECT_TRUE(lat::contains(bigger.lattice, L.lattice));
  const mpz_class idx = lat::index(bigger.lattice, L.lattice);
  EXPECT_GT(idx, 1);
  EXPECT_EQ(L.disc_z, bigger.disc_z * idx * idx);
}

TEST(Orders, Ramification) {
  for (unsigned n : {1u, 5u, 8u, 12u}) {
    const auto R = ramification(SymbolAlgebra::standard(n));
    unsigned total = 0;
    for (const auto& p : R.primes) total += p.e * p.f;
    EXPECT_EQ(total, RealCycloField::get(n)->degree()) << n;
  }
  EXPECT_EQ(ramification(SymbolAlgebra::standard(1)).ramified.size(), 1u);
  EXPECT_TRUE(ramification(SymbolAlgebra::standard(5)).ramified.empty());
  EXPECT_TRUE(ramification(SymbolAlgebra::standard(8)).ramified.empty());
  EXPECT_EQ(ramification(SymbolAlgebra::standard(1)).disc_target, 4);
}

TEST(Orders, MaximalDiscriminants) {
  std::vector<QuatOrder> maxes;
  for (unsigned n : {1u, 5u, 8u, 12u}) maxes.push_back(maximize(lipschitz(n)));
  EXPECT_EQ(abs(maxes[1].disc_z), 625);  // 5^4: the field discriminant to the fourth
  EXPECT_EQ(abs(maxes[2].disc_z), 4096);  // 8^4
  EXPECT_EQ(qtest::disc_matches_target(maxes), "");
  EXPECT_EQ(qtest::up_to_2_power(maxes), "");
  for (const auto& M : maxes) EXPECT_TRUE(is_maximal(M));
  EXPECT_TRUE(is_azumaya(maxes[1]));
}

TEST(Orders, ExtendScalars) {
  QuatOrder H = maximize(lipschitz(1));
  QuatOrder E = extend_scalars(H, 8);
  EXPECT_EQ(E.rank(), 8u);
  EXPECT_EQ(E.alg->field()->n(), 8u);
  EXPECT_TRUE(E.contains(q(E.alg, "(1+i+j+k)/2")));
  EXPECT_TRUE(equal_up_to_2_power(E, lipschitz(8)));
  EXPECT_THROW(extend_scalars(H, 0), Error);
}

TEST(Orders, OverordersAtTwo) {
  QuatOrder L = lipschitz(1);
  const auto leaves = p_maximal_overorders(L, 2);
  ASSERT_EQ(leaves.size(), 1u);
  EXPECT_TRUE(leaves[0] == maximize(L));
}

TEST(Orders, FileRoundTrip) {
  for (unsigned n : {1u, 12u}) {
    QuatOrder M = maximize(lipschitz(n));
    const std::string text = order_to_string(M);
    QuatOrder back = order_from_string(text);
    EXPECT_TRUE(back == M);
    EXPECT_EQ(order_to_string(back), text);
  }
  Field f = RealCycloField::get(56);
  FieldElem c = FieldElem::gen(f);
  Algebra B = SymbolAlgebra::build(f, FieldElem(f, -1), -(c.pow(16) + c.pow(2)));
  QuatOrder O = order_closure(B, {q(B, "i"), q(B, "j")});
  EXPECT_TRUE(order_from_string(order_to_string(O)) == O);
  EXPECT_THROW(order_from_string("quatlat-order v1\nn 5\n"), Error);
}
