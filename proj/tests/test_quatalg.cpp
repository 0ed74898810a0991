#include <gtest/gtest.h>

#include "property_checks.hpp"
#include "quatlat/error.hpp"
#include "quatlat/expr.hpp"
#include "quatlat/quatalg.hpp"

using namespace quatlat;

namespace {

Quaternion q(const Algebra& A, const std::string& s) { return parse_element(s, ExprContext{A, std::nullopt, {}}); }

}  // namespace

TEST(QuatAlg, UnitRelations) {
  Algebra A = SymbolAlgebra::standard(1);
  EXPECT_EQ(q(A, "i*j"), q(A, "k"));
  EXPECT_EQ(q(A, "j*i"), q(A, "-k"));
  EXPECT_EQ(q(A, "1*(2 + 3*i)"), q(A, "2 + 3*i"));
}

TEST(QuatAlg, OrderSixElement) {
  // (1 - i - j - k)/2 has trace 1, so it is a primitive 6th root of unity; its
  // negative is the order-3 element.
  Algebra A = SymbolAlgebra::standard(1);
  Quaternion w = q(A, "(1-i-j-k)/2");
  EXPECT_EQ(w.trd(), FieldElem(A->field(), 1));
  EXPECT_EQ(w.nrd(), FieldElem(A->field(), 1));
  EXPECT_EQ(w.pow(3), q(A, "-1"));
  EXPECT_EQ((-w).pow(3), q(A, "1"));
  EXPECT_EQ(multiplicative_order(w), 6u);
  EXPECT_EQ(multiplicative_order(-w), 3u);
  EXPECT_TRUE(w.is_integral());
}

TEST(QuatAlg, ConjTrdNrd) {
  Algebra A = SymbolAlgebra::standard(1);
  Quaternion i = q(A, "i");
  EXPECT_EQ(i.conj(), q(A, "-i"));
  EXPECT_TRUE(i.trd().is_zero());
  EXPECT_EQ(i.nrd(), FieldElem(A->field(), 1));
  Algebra B = SymbolAlgebra::standard(8);
  Quaternion x = q(B, "(i-j)/sqrt2");
  EXPECT_TRUE(x.trd().is_zero());
  EXPECT_EQ(x.nrd(), FieldElem(B->field(), 1));
  EXPECT_EQ(x * x, q(B, "-1"));
  EXPECT_EQ(multiplicative_order(x), 4u);
}

TEST(QuatAlg, Inverse) {
  Algebra A = SymbolAlgebra::standard(5);
  EXPECT_EQ(q(A, "i").inverse(), q(A, "-i"));
  EXPECT_EQ(q(A, "2").inverse(), q(A, "1/2"));
  Quaternion g = q(A, "(1-i-j-k)/2");
  EXPECT_EQ(g.inverse(), g.conj());
  Field f = A->field();
  Algebra S = SymbolAlgebra::build(f, FieldElem(f, 1), FieldElem(f, 1));
  EXPECT_FALSE(S->definite());
  try {
    q(S, "1 + i").inverse();
    FAIL() << "expected ZeroDivisor";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroDivisor);
  }
}

TEST(QuatAlg, Integrality) {
  Algebra A = SymbolAlgebra::standard(1);
  EXPECT_TRUE(q(A, "(1-i-j-k)/2").is_integral());
  EXPECT_FALSE(q(A, "i/2").is_integral());
  Algebra B = SymbolAlgebra::standard(56);
  EXPECT_TRUE(q(B, "(1/2)*(c^14 + c^2 + 1) + (1/2)*sqrt2*(c^5 + c^4)*i + (1/2)*c^2*j + (1/2)*sqrt2*k").is_integral());
}

TEST(QuatAlg, BuildAndDefiniteness) {
  EXPECT_TRUE(SymbolAlgebra::standard(12)->definite());
  Field f = RealCycloField::get(56);
  FieldElem c = FieldElem::gen(f);
  EXPECT_TRUE(SymbolAlgebra::build(f, FieldElem(f, -1), -(c.pow(16) + c.pow(2)))->definite());
  EXPECT_FALSE(SymbolAlgebra::build(f, FieldElem(f, -1), FieldElem(f, 1))->definite());
  try {
    SymbolAlgebra::build(f, FieldElem(f), FieldElem(f, -1));
    FAIL() << "expected ZeroParameter";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroParameter);
  }
  Algebra A = SymbolAlgebra::standard(1), B = SymbolAlgebra::standard(5);
  EXPECT_THROW(q(A, "i") * q(B, "i"), Error);
}

TEST(QuatAlg, RingIdentitiesRandomized) { EXPECT_EQ(qtest::ring_identities(20260101, 40), ""); }

TEST(QuatAlg, CharpolyRandomized) { EXPECT_EQ(qtest::charpoly_annihilation(20260102, 60), ""); }
