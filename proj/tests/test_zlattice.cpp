#include <gtest/gtest.h>

#include <random>

#include "property_checks.hpp"
#include "quatlat/error.hpp"
#include "quatlat/zlattice.hpp"

using namespace quatlat;

namespace {

ZMat zm(std::initializer_list<std::initializer_list<long>> rows) {
  ZMat m;
  for (auto r : rows) {
    ZVec v;
    for (long x : r) v.push_back(x);
    m.push_back(v);
  }
  return m;
}

QMat to_q(const ZMat& m) {
  QMat q;
  for (const auto& r : m) q.emplace_back(r.begin(), r.end());
  return q;
}

bool is_hnf(const ZMat& h) {
  std::size_t prev = 0;
  for (std::size_t r = 0; r < h.size(); ++r) {
    std::size_t p = 0;
    while (p < h[r].size() && h[r][p] == 0) ++p;
    if (p == h[r].size() || h[r][p] <= 0) return false;
    if (r > 0 && p <= prev) return false;
    for (std::size_t a = 0; a < r; ++a)
      if (h[a][p] < 0 || h[a][p] >= h[r][p]) return false;
    prev = p;
  }
  return true;
}

}  // namespace

TEST(ZLattice, HnfSmall) {
  EXPECT_EQ(lat::hnf(zm({{2, 0}, {3, 1}})), zm({{1, 1}, {0, 2}}));
  EXPECT_EQ(lat::hnf(zm({{4, 6}, {6, 9}})), zm({{2, 3}}));
  EXPECT_EQ(lat::hnf(zm({{0, 0, 0}})), ZMat{});
}

TEST(ZLattice, HnfRandomized) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> ent(-9, 9);
  for (int t = 0; t < 200; ++t) {
    const std::size_t dim = 1 + rng() % 6, rows = 1 + rng() % 9;
    ZMat m(rows, ZVec(dim));
    for (auto& r : m)
      for (auto& x : r) x = ent(rng);
    const ZMat h = lat::hnf(m);
    ASSERT_TRUE(is_hnf(h));
    EXPECT_EQ(lat::hnf(h), h);
    // Same lattice: each side contains the other.
    const auto L1 = lat::make_lattice(m, 1, dim), L2 = lat::make_lattice(h, 1, dim);
    EXPECT_TRUE(L1 == L2);
    for (const auto& r : m) EXPECT_TRUE(lat::contains(L2, QVec(r.begin(), r.end())));
    // Row order does not matter.
    ZMat rev(m.rbegin(), m.rend());
    EXPECT_EQ(lat::hnf(rev), h);
  }
}

TEST(ZLattice, RationalLattices) {
  const auto L = lat::make_lattice(QMat{{mpq_class(1, 2), 0}, {0, mpq_class(1, 3)}}, 2);
  EXPECT_EQ(L.denom, 6);
  EXPECT_TRUE(lat::contains(L, QVec{mpq_class(3, 2), mpq_class(-2, 3)}));
  EXPECT_FALSE(lat::contains(L, QVec{mpq_class(1, 4), 0}));
  EXPECT_EQ(lat::coordinates(L, QVec{1, 1}).size(), 2u);
  EXPECT_THROW(lat::coordinates(L, QVec{mpq_class(1, 5), 0}), Error);

  const auto Z2 = lat::make_lattice(zm({{1, 0}, {0, 1}}), 1, 2);
  const auto S = lat::make_lattice(zm({{1, 1}, {1, -1}}), 1, 2);
  EXPECT_EQ(lat::index(Z2, S), 2);
  EXPECT_EQ(lat::lattice_det(S), 4);
  EXPECT_EQ(lat::lattice_det(L), mpq_class(1, 36));
  EXPECT_TRUE(lat::contains(Z2, S));
  EXPECT_FALSE(lat::contains(S, Z2));
}

TEST(ZLattice, PositiveDefinite) {
  EXPECT_TRUE(lat::is_positive_definite(zm({{2, 1}, {1, 2}})));
  EXPECT_FALSE(lat::is_positive_definite(zm({{1, 2}, {2, 1}})));
  EXPECT_FALSE(lat::is_positive_definite(zm({{1, 1}, {1, 1}})));
  EXPECT_THROW(lat::enumerate_exact(zm({{1, 2}, {2, 1}}), 1), Error);
}

TEST(ZLattice, Lll) {
  const QMat b = lat::lll_reduce(QMat{{1, 0}, {1000, 1}});
  ASSERT_EQ(b.size(), 2u);
  for (const auto& r : b) EXPECT_EQ(r[0] * r[0] + r[1] * r[1], 1);
  EXPECT_TRUE(lat::make_lattice(b, 2) == lat::make_lattice(QMat{{1, 0}, {1000, 1}}, 2));

  // The transformation returned by lll_gram is unimodular and reduces the
  // first vector to a shortest one.
  const ZMat G = zm({{1000001, 1000}, {1000, 1}});
  const ZMat U = lat::lll_gram(G);
  ASSERT_EQ(U.size(), 2u);
  EXPECT_EQ(abs(nt::det(U)), 1);
  mpz_class q = 0;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b2 = 0; b2 < 2; ++b2) q += U[0][a] * G[a][b2] * U[0][b2];
  EXPECT_EQ(q, 1);
}

TEST(ZLattice, EnumerateSmall) {
  const ZMat I4 = zm({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  EXPECT_EQ(lat::enumerate_exact(I4, 1).size(), 8u);
  EXPECT_EQ(lat::enumerate_exact(I4, 2).size(), 24u);
  // Hurwitz order in the basis (1+i+j+k)/2, i, j, k: twice the norm form.
  const ZMat H = zm({{2, 1, 1, 1}, {1, 2, 0, 0}, {1, 0, 2, 0}, {1, 0, 0, 2}});
  EXPECT_EQ(lat::enumerate_exact(H, 2).size(), 24u);
  const auto threaded = lat::enumerate_exact(H, 4, nullptr, 3);
  EXPECT_EQ(threaded, lat::enumerate_exact(H, 4));
  EXPECT_EQ(threaded.size(), 24u);
  const auto odd = lat::enumerate_exact(H, 2, [](const ZVec& v) { return v[0] % 2 != 0; });
  EXPECT_EQ(odd.size(), 16u);
}

TEST(ZLattice, EnumerateVsBruteForce) { EXPECT_EQ(qtest::enumerate_vs_brute_force(20260103, 60), ""); }
