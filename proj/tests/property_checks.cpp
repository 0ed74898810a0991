#include "property_checks.hpp"

#include <cmath>
#include <random>

#include "quatlat/normone.hpp"
#include "quatlat/zlattice.hpp"

using namespace quatlat;

namespace qtest {

namespace {

FieldElem random_elem(const Field& f, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 3);
  QVec v(f->degree());
  for (auto& x : v) {
    x = mpq_class(num(rng), den(rng));
    x.canonicalize();
  }
  return FieldElem(f, v);
}

Quaternion random_quat(const Algebra& A, std::mt19937_64& rng) {
  const Field& f = A->field();
  return Quaternion(A, random_elem(f, rng), random_elem(f, rng), random_elem(f, rng), random_elem(f, rng));
}

std::vector<Algebra> test_algebras() {
  std::vector<Algebra> out;
  for (unsigned n : {1u, 5u, 8u, 12u, 16u}) out.push_back(SymbolAlgebra::standard(n));
  Field f = RealCycloField::get(12);
  FieldElem c = FieldElem::gen(f);
  out.push_back(SymbolAlgebra::build(f, FieldElem(f, -1), -(c * c + FieldElem(f, 1))));
  out.push_back(SymbolAlgebra::build(f, FieldElem(f, 3), c - FieldElem(f, 5)));
  return out;
}

bool is_scalar(const Quaternion& x) { return x[1].is_zero() && x[2].is_zero() && x[3].is_zero(); }

}  // namespace

std::string ring_identities(std::uint64_t seed, int trials) {
  std::mt19937_64 rng(seed);
  for (const Algebra& A : test_algebras()) {
    const Quaternion one = Quaternion::unit(A, 0), i = Quaternion::unit(A, 1), j = Quaternion::unit(A, 2),
                     k = Quaternion::unit(A, 3);
    const std::string tag = " in " + A->describe();
    if (!(i * i == Quaternion(A, A->a()))) return "i^2 != a" + tag;
    if (!(j * j == Quaternion(A, A->b()))) return "j^2 != b" + tag;
    if (!(i * j == k) || !(j * i == -k)) return "ij = k = -ji fails" + tag;
    if (!(k * k == Quaternion(A, -A->ab()))) return "k^2 != -ab" + tag;
    if (!(j * k == Quaternion(A, -A->b()) * i) || !(k * i == Quaternion(A, -A->a()) * j)) return "jk, ki" + tag;
    for (int t = 0; t < trials; ++t) {
      const Quaternion x = random_quat(A, rng), y = random_quat(A, rng), z = random_quat(A, rng);
      if (!((x * y) * z == x * (y * z))) return "associativity" + tag;
      if (!(x * (y + z) == x * y + x * z) || !((x + y) * z == x * z + y * z)) return "distributivity" + tag;
      if (!(one * x == x) || !(x * one == x)) return "identity" + tag;
      if (!(x.conj().conj() == x)) return "conj is not an involution" + tag;
      if (!((x * y).conj() == y.conj() * x.conj())) return "conj is not an anti-automorphism" + tag;
      if (!(x + x.conj() == Quaternion(A, x.trd()))) return "x + conj(x) != trd(x)" + tag;
      if (!(x * x.conj() == Quaternion(A, x.nrd())) || !(x.conj() * x == Quaternion(A, x.nrd())))
        return "x conj(x) != nrd(x)" + tag;
      if (!is_scalar(x * x.conj())) return "nrd not central" + tag;
      if (!((x * y).nrd() == x.nrd() * y.nrd())) return "nrd not multiplicative" + tag;
      if (!((x + y).trd() == x.trd() + y.trd())) return "trd not additive" + tag;
      const FieldElem s = random_elem(A->field(), rng);
      if (!((s * x).trd() == s * x.trd())) return "trd not K-linear" + tag;
      if (A->definite() && !x.is_zero() && x.nrd().is_zero()) return "zero divisor in a definite algebra" + tag;
      if (!x.nrd().is_zero() && !(x * x.inverse() == one)) return "x x^-1 != 1" + tag;
    }
  }
  return "";
}

std::string charpoly_annihilation(std::uint64_t seed, int trials) {
  std::mt19937_64 rng(seed);
  for (const Algebra& A : test_algebras())
    for (int t = 0; t < trials; ++t) {
      const Quaternion x = random_quat(A, rng);
      const Quaternion r = x * x - x.trd() * x + Quaternion(A, x.nrd());
      if (!r.is_zero()) return "x^2 - trd(x) x + nrd(x) != 0 for " + x.to_string();
    }
  return "";
}

std::string enumerate_vs_brute_force(std::uint64_t seed, int trials) {
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    const std::size_t r = 1 + rng() % 8;
    // G = B^T B + D with small entries, so it is positive definite.
    std::uniform_int_distribution<int> ent(-2, 2), diag(1, 2);
    ZMat B(r, ZVec(r));
    for (auto& row : B)
      for (auto& x : row) x = ent(rng);
    ZMat G(r, ZVec(r, 0));
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b) {
        for (std::size_t k = 0; k < r; ++k) G[a][b] += B[k][a] * B[k][b];
        if (a == b) G[a][b] += diag(rng);
      }
    const long target = 1 + static_cast<long>(rng() % 8);

    // |x_a| <= sqrt(target * (G^-1)_aa); the inverse diagonal is exact.
    QMat Gq(r, QVec(r));
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b) Gq[a][b] = G[a][b];
    const mpq_class detG = nt::det(Gq);
    std::vector<long> bound(r);
    for (std::size_t a = 0; a < r; ++a) {
      QMat minor;
      for (std::size_t x = 0; x < r; ++x) {
        if (x == a) continue;
        QVec row;
        for (std::size_t y = 0; y < r; ++y)
          if (y != a) row.push_back(Gq[x][y]);
        minor.push_back(row);
      }
      const mpq_class inv_aa = (r == 1 ? mpq_class(1) : nt::det(minor)) / detG;
      bound[a] = static_cast<long>(std::floor(std::sqrt(target * inv_aa.get_d()) + 1e-9));
    }
    double box = 1;
    for (long b : bound) box *= 2 * b + 1;
    if (box > 3e6) continue;

    std::vector<ZVec> brute;
    std::vector<long> x(r);
    for (std::size_t a = 0; a < r; ++a) x[a] = -bound[a];
    for (;;) {
      mpz_class q = 0;
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) q += G[a][b] * x[a] * x[b];
      if (q == target) {
        ZVec v(r);
        for (std::size_t a = 0; a < r; ++a) v[a] = x[a];
        brute.push_back(v);
      }
      std::size_t a = r;
      while (a-- > 0) {
        if (x[a] < bound[a]) {
          ++x[a];
          break;
        }
        x[a] = -bound[a];
      }
      if (a == static_cast<std::size_t>(-1)) break;
    }
    const std::vector<ZVec> got = lat::enumerate_exact(G, target);
    if (got != brute)
      return "rank " + std::to_string(r) + " target " + std::to_string(target) + ": enumerate found " +
             std::to_string(got.size()) + ", box search " + std::to_string(brute.size());
  }
  return "";
}

std::string norm_one_exact(const QuatOrder& O) {
  const UnitGroup G = norm_one_group(O);
  const FieldElem one(O.alg->field(), 1);
  for (std::size_t a = 0; a < G.size(); ++a) {
    const Quaternion& x = G.element(a);
    if (!(x.nrd() == one)) return "element with nrd " + x.nrd().to_string();
    if (!O.contains(x)) return "element outside the order";
    if (!(G.element(G.inverse(a)) == x.conj())) return "inverse is not the conjugate";
  }
  for (std::size_t a = 0; a < G.size(); a += 1 + G.size() / 7)
    for (std::size_t b = 0; b < G.size(); ++b)
      if (!(G.element(G.mul(a, b)) == G.element(a) * G.element(b))) return "table entry disagrees with product";
  return "";
}

std::string up_to_2_power(const std::vector<QuatOrder>& maximal) {
  for (const auto& M : maximal) {
    const Algebra& A = M.alg;
    const QuatOrder L = order_closure(A, {Quaternion::unit(A, 1), Quaternion::unit(A, 2)});
    if (!lat::contains(M.lattice, L.lattice)) continue;
    if (!equal_up_to_2_power(M, L) || !equal_up_to_2_power(L, M))
      return "maximal order at n=" + std::to_string(A->field()->n()) + " differs from R[1,i,j,k] at an odd prime";
  }
  return "";
}

std::string disc_matches_target(const std::vector<QuatOrder>& maximal) {
  for (const auto& M : maximal) {
    if (!M.alg->is_standard()) continue;
    const mpz_class target = ramification(M.alg).disc_target;
    if (abs(M.disc_z) != target)
      return "n=" + std::to_string(M.alg->field()->n()) + ": |disc| " + mpz_class(abs(M.disc_z)).get_str() + " != " +
             target.get_str();
  }
  return "";
}

}  // namespace qtest
