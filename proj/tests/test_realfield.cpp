#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "quatlat/error.hpp"
#include "quatlat/realfield.hpp"

using namespace quatlat;

namespace {

long double evaluate(const ZVec& poly, long double x) {
  long double v = 0;
  for (std::size_t k = poly.size(); k-- > 0;) v = v * x + poly[k].get_d();
  return v;
}

unsigned euler_phi(unsigned n) {
  unsigned r = 0;
  for (unsigned k = 1; k <= n; ++k)
    if (std::gcd(k, n) == 1) ++r;
  return r;
}

FieldElem fe(const Field& f, std::initializer_list<long> coeffs) {
  QVec v(f->degree(), 0);
  std::size_t k = 0;
  for (long c : coeffs) v[k++] = c;
  return FieldElem(f, v);
}

}  // namespace

TEST(RealField, SmallMinpolys) {
  EXPECT_EQ(RealCycloField::get(5)->minpoly(), (ZVec{-1, 1, 1}));
  EXPECT_EQ(RealCycloField::get(8)->minpoly(), (ZVec{-2, 0, 1}));
  EXPECT_EQ(RealCycloField::get(1)->degree(), 1u);
  EXPECT_EQ(RealCycloField::get(2)->degree(), 1u);
  EXPECT_EQ(RealCycloField::get(64)->degree(), 16u);
  EXPECT_EQ(RealCycloField::get(5).get(), RealCycloField::get(5).get());
}

TEST(RealField, MinpolyRootsAreCosines) {
  const long double pi = std::acos(-1.0L);
  for (unsigned n : {5u, 7u, 8u, 9u, 12u, 15u, 16u, 20u, 24u, 40u, 56u, 64u}) {
    Field f = RealCycloField::get(n);
    ASSERT_EQ(f->degree(), euler_phi(n) / 2) << n;
    for (unsigned k = 1; k < n; ++k) {
      if (std::gcd(k, n) != 1) continue;
      const long double r = 2 * std::cos(2 * pi * k / n);
      EXPECT_NEAR(static_cast<double>(evaluate(f->minpoly(), r)), 0.0, 1e-6) << "n=" << n << " k=" << k;
    }
  }
}

TEST(RealField, DiscriminantMatchesRootProduct) {
  const long double pi = std::acos(-1.0L);
  for (unsigned n : {5u, 7u, 8u, 9u, 12u, 16u, 20u}) {
    Field f = RealCycloField::get(n);
    std::vector<long double> roots;
    for (unsigned k = 1; k < n / 2.0; ++k)
      if (std::gcd(k, n) == 1) roots.push_back(2 * std::cos(2 * pi * k / n));
    long double d = 1;
    for (std::size_t a = 0; a < roots.size(); ++a)
      for (std::size_t b = a + 1; b < roots.size(); ++b) d *= (roots[a] - roots[b]) * (roots[a] - roots[b]);
    EXPECT_EQ(f->disc(), mpz_class(static_cast<long>(std::llround(d)))) << n;
  }
}

TEST(RealField, Arithmetic) {
  Field f8 = RealCycloField::get(8);
  FieldElem c = FieldElem::gen(f8);
  EXPECT_EQ(c * c, FieldElem(f8, 2));
  EXPECT_EQ(c * FieldElem(f8, 1), c);
  Field f5 = RealCycloField::get(5);
  FieldElem c5 = FieldElem::gen(f5);
  EXPECT_EQ(c5.inverse(), fe(f5, {1, 1}));
  EXPECT_EQ(c5 * c5.inverse(), FieldElem(f5, 1));
  EXPECT_THROW(FieldElem(f5).inverse(), Error);
  EXPECT_THROW(c5 + c, Error);
  // minpoly(c) = 0
  for (unsigned n : {7u, 24u, 56u}) {
    Field f = RealCycloField::get(n);
    FieldElem x = FieldElem::gen(f), acc(f), p(f, 1);
    for (const auto& a : f->minpoly()) {
      acc += p * mpq_class(a);
      p *= x;
    }
    EXPECT_TRUE(acc.is_zero()) << n;
  }
}

TEST(RealField, Cheby) {
  Field f = RealCycloField::get(64);
  EXPECT_EQ(cheby(f, 8), fe(f, {2, 0, -16, 0, 20, 0, -8, 0, 1}));
  EXPECT_EQ(cheby(f, 1), FieldElem::gen(f));
  EXPECT_EQ(cheby(f, 0), FieldElem(f, 2));
  for (unsigned n : {5u, 12u, 56u})
    for (long k = 0; k <= 2 * static_cast<long>(n); ++k) {
      Field g = RealCycloField::get(n);
      FieldElem e = cheby(g, k);
      EXPECT_TRUE(e.is_integral());
      EXPECT_EQ(e * e, cheby(g, 2 * k) + FieldElem(g, 2)) << n << " " << k;
    }
  Field f56 = RealCycloField::get(56);
  EXPECT_EQ(cheby(f56, 7) * cheby(f56, 7), FieldElem(f56, 2));
}

TEST(RealField, SqrtSmall) {
  Field f8 = RealCycloField::get(8);
  EXPECT_EQ(sqrt_small(f8, 2), FieldElem::gen(f8));
  Field f40 = RealCycloField::get(40);
  FieldElem s5 = sqrt_small(f40, 5);
  EXPECT_EQ(s5, cheby(f40, 8) * mpq_class(2) + FieldElem(f40, 1));
  EXPECT_EQ(s5 * s5, FieldElem(f40, 5));
  try {
    sqrt_small(RealCycloField::get(12), 2);
    FAIL() << "expected NotPresent";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPresent);
  }
  Field f56 = RealCycloField::get(56);
  const auto v = real_embeddings(sqrt_small(f56, 2));
  ASSERT_EQ(v.size(), 12u);
  EXPECT_GT(v[0].mid, 0);
  for (const auto& b : v) EXPECT_NEAR(static_cast<double>(std::fabs(b.mid)), std::sqrt(2.0), 1e-12);
}

TEST(RealField, TraceNorm) {
  Field f5 = RealCycloField::get(5);
  EXPECT_EQ(trace_norm(FieldElem(f5, 1)), std::make_pair(mpq_class(2), mpq_class(1)));
  EXPECT_EQ(trace_norm(FieldElem::gen(f5)), std::make_pair(mpq_class(-1), mpq_class(-1)));
  Field f16 = RealCycloField::get(16);
  EXPECT_EQ(trace_norm(FieldElem(f16, mpq_class(3, 2))), std::make_pair(mpq_class(6), mpq_class(81, 16)));
  // Against the embeddings.
  Field f24 = RealCycloField::get(24);
  FieldElem x = FieldElem::gen(f24) * FieldElem::gen(f24) + FieldElem(f24, mpq_class(1, 3));
  long double s = 0, p = 1;
  for (const auto& b : real_embeddings(x)) {
    s += b.mid;
    p *= b.mid;
  }
  auto [tr, nm] = trace_norm(x);
  EXPECT_NEAR(static_cast<double>(s), tr.get_d(), 1e-9);
  EXPECT_NEAR(static_cast<double>(p), nm.get_d(), 1e-6);
}

TEST(RealField, Integrality) {
  Field f8 = RealCycloField::get(8);
  EXPECT_FALSE((FieldElem::gen(f8) * mpq_class(1, 2)).is_integral());
  EXPECT_TRUE(FieldElem(f8).is_integral());
}

TEST(RealField, FactorPrime) {
  using V = std::vector<std::pair<unsigned, unsigned>>;
  EXPECT_EQ(factor_prime(RealCycloField::get(5), 2), (V{{1, 2}}));
  EXPECT_EQ(factor_prime(RealCycloField::get(8), 2), (V{{2, 1}}));
  EXPECT_EQ(factor_prime(RealCycloField::get(1), 2), (V{{1, 1}}));
  for (unsigned n : {12u, 20u, 24u, 56u, 64u})
    for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 13ul}) {
      Field f = RealCycloField::get(n);
      unsigned s = 0;
      for (auto [e, fd] : factor_prime(f, p)) s += e * fd;
      EXPECT_EQ(s, f->degree()) << n << " " << p;
    }
}

TEST(RealField, SubfieldLift) {
  Field f12 = RealCycloField::get(12), f24 = RealCycloField::get(24);
  FieldElem c = subfield_lift(FieldElem::gen(f12), 24);
  EXPECT_EQ(c, cheby(f24, 2));
  EXPECT_EQ(c * c, FieldElem(f24, 3));
  EXPECT_EQ(subfield_lift(FieldElem(f12, mpq_class(5, 7)), 24), FieldElem(f24, mpq_class(5, 7)));
  EXPECT_EQ(subfield_lift(sqrt_small(RealCycloField::get(8), 2), 64), sqrt_small(RealCycloField::get(64), 2));
  FieldElem a = FieldElem::gen(f12) + FieldElem(f12, 2), b = FieldElem::gen(f12) * mpq_class(3, 5);
  EXPECT_EQ(subfield_lift(a * b, 24), subfield_lift(a, 24) * subfield_lift(b, 24));
  EXPECT_THROW(subfield_lift(FieldElem::gen(f12), 20), Error);
}

TEST(RealField, Embeddings) {
  Field f8 = RealCycloField::get(8);
  const auto v = real_embeddings(FieldElem::gen(f8));
  ASSERT_EQ(v.size(), 2u);
  EXPECT_NEAR(static_cast<double>(v[0].mid), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(static_cast<double>(v[1].mid), -std::sqrt(2.0), 1e-15);
  for (const auto& b : real_embeddings(FieldElem(RealCycloField::get(20), mpq_class(-3, 4))))
    EXPECT_EQ(b.mid, -0.75L);
  EXPECT_TRUE(is_totally_negative(FieldElem(f8, -1)));
  EXPECT_FALSE(is_totally_positive(FieldElem::gen(f8)));
}
