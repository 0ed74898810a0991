#include "quatlat/nt.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "quatlat/error.hpp"

namespace quatlat::nt {

namespace {

std::vector<unsigned long> small_primes(unsigned long bound) {
  static std::mutex mu;
  static std::vector<unsigned long> primes;
  static unsigned long sieved = 0;
  std::lock_guard<std::mutex> lock(mu);
  if (sieved < bound) {
    std::vector<bool> composite(bound + 1, false);
    primes.clear();
    for (unsigned long i = 2; i <= bound; ++i) {
      if (composite[i]) continue;
      primes.push_back(i);
      for (unsigned long j = i * i; j <= bound; j += i) composite[j] = true;
    }
    sieved = bound;
  }
  return primes;
}

// Brent's variant of Pollard rho; returns a nontrivial factor or 0.
mpz_class rho(const mpz_class& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1; c < 24; ++c) {
    mpz_class y = 2, x, g = 1, q = 1, ys, t;
    unsigned long r = 1;
    const unsigned long m = 128;
    const unsigned long limit = 1UL << 24;
    auto f = [&](mpz_class& v) {
      v = v * v + c;
      v %= n;
    };
    while (g == 1 && r < limit) {
      x = y;
      for (unsigned long i = 0; i < r; ++i) f(y);
      unsigned long k = 0;
      while (k < r && g == 1) {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          f(y);
          t = x - y;
          q = (q * abs(t)) % n;
        }
        g = gcd(q, n);
        k += m;
      }
      r *= 2;
    }
    if (g == n) {
      do {
        f(ys);
        t = x - ys;
        g = gcd(abs(t), n);
      } while (g == 1);
    }
    if (g != n && g != 1) return g;
  }
  return 0;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

void trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

FpPoly make_monic(FpPoly a, std::uint64_t p) {
  trim(a);
  if (a.empty()) return a;
  std::uint64_t inv = fp_inv(a.back(), p);
  for (auto& x : a) x = mulmod(x, inv, p);
  return a;
}

FpPoly derivative(const FpPoly& a, std::uint64_t p) {
  FpPoly out;
  for (std::size_t i = 1; i < a.size(); ++i) out.push_back(mulmod(a[i], i % p, p));
  trim(out);
  return out;
}

FpPoly sub(FpPoly a, const FpPoly& b, std::uint64_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

FpPoly powmod(FpPoly base, mpz_class e, const FpPoly& m, std::uint64_t p) {
  FpPoly result{1};
  base = fp_mod(base, m, p);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) result = fp_mod(fp_mul(result, base, p), m, p);
    base = fp_mod(fp_mul(base, base, p), m, p);
    e >>= 1;
  }
  return result;
}

bool is_one(const FpPoly& a) { return a.size() == 1 && a[0] == 1; }

// p-th root of a polynomial whose derivative vanishes (coefficients fixed by Frobenius).
FpPoly pth_root(const FpPoly& a, std::uint64_t p) {
  FpPoly out;
  for (std::size_t i = 0; i < a.size(); i += p) out.push_back(a[i]);
  trim(out);
  return out;
}

void squarefree_factor(const FpPoly& f, std::uint64_t p, unsigned scale,
                       std::vector<std::pair<FpPoly, unsigned>>& out) {
  FpPoly fm = make_monic(f, p);
  if (fm.size() <= 1) return;
  FpPoly d = derivative(fm, p);
  if (d.empty()) {
    squarefree_factor(pth_root(fm, p), p, scale * static_cast<unsigned>(p), out);
    return;
  }
  FpPoly c = fp_gcd(fm, d, p);
  FpPoly w = fp_div(fm, c, p);
  unsigned i = 1;
  while (!is_one(w)) {
    FpPoly y = fp_gcd(w, c, p);
    FpPoly fac = fp_div(w, y, p);
    if (!is_one(fac)) out.emplace_back(make_monic(fac, p), i * scale);
    ++i;
    w = y;
    c = fp_div(c, y, p);
  }
  if (!is_one(c)) squarefree_factor(pth_root(c, p), p, scale * static_cast<unsigned>(p), out);
}

}  // namespace

bool is_probable_prime(const mpz_class& n) {
  return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

std::vector<std::pair<mpz_class, unsigned>> factor(const mpz_class& n, unsigned long trial_bound) {
  if (n == 0) throw Error(ErrorKind::Internal, "factor(0)");
  std::map<mpz_class, unsigned> found;
  mpz_class m = abs(n);
  for (unsigned long p : small_primes(trial_bound)) {
    if (m == 1) break;
    if (mpz_cmp_ui(m.get_mpz_t(), p * p) < 0) break;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      found[mpz_class(p)]++;
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
    }
  }
  std::vector<mpz_class> stack;
  if (m > 1) stack.push_back(m);
  while (!stack.empty()) {
    mpz_class x = stack.back();
    stack.pop_back();
    if (x == 1) continue;
    if (is_probable_prime(x)) {
      found[x]++;
      continue;
    }
    if (mpz_perfect_square_p(x.get_mpz_t())) {
      mpz_class r = sqrt(x);
      stack.push_back(r);
      stack.push_back(r);
      continue;
    }
    mpz_class f = rho(x);
    if (f == 0) {
      throw Error(ErrorKind::FactoringIncomplete, "unfactored cofactor " + x.get_str());
    }
    stack.push_back(f);
    stack.push_back(x / f);
  }
  return {found.begin(), found.end()};
}

mpz_class lcm_of_denominators(const QVec& v) {
  mpz_class l = 1;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

mpz_class det(ZMat m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  int sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && m[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

mpq_class det(const QMat& m) {
  mpz_class scale = 1;
  ZMat z(m.size());
  mpq_class factor = 1;
  for (std::size_t i = 0; i < m.size(); ++i) {
    mpz_class l = lcm_of_denominators(m[i]);
    factor /= l;
    z[i].resize(m[i].size());
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      mpq_class v = m[i][j] * l;
      z[i][j] = v.get_num();
    }
  }
  mpq_class r = factor * mpq_class(det(std::move(z)));
  r.canonicalize();
  return r;
}

std::uint64_t fp_inv(std::uint64_t a, std::uint64_t p) {
  mpz_class r, av = static_cast<unsigned long>(a % p), pv = static_cast<unsigned long>(p);
  if (mpz_invert(r.get_mpz_t(), av.get_mpz_t(), pv.get_mpz_t()) == 0) {
    throw Error(ErrorKind::DivisionByZero, "no inverse mod p");
  }
  return r.get_ui();
}

std::uint64_t fp_mod_mpz(const mpz_class& a, std::uint64_t p) {
  return mpz_fdiv_ui(a.get_mpz_t(), static_cast<unsigned long>(p));
}

FpPoly fp_reduce(const ZVec& poly, std::uint64_t p) {
  FpPoly out(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) out[i] = fp_mod_mpz(poly[i], p);
  trim(out);
  return out;
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  FpPoly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + mulmod(a[i], b[j], p)) % p;
  }
  trim(out);
  return out;
}

namespace {
void divmod(FpPoly a, const FpPoly& m, std::uint64_t p, FpPoly* q, FpPoly* r) {
  trim(a);
  if (m.empty()) throw Error(ErrorKind::DivisionByZero, "polynomial division by zero");
  std::uint64_t inv = fp_inv(m.back(), p);
  FpPoly quo(a.size() >= m.size() ? a.size() - m.size() + 1 : 0, 0);
  while (a.size() >= m.size() && !a.empty()) {
    std::size_t shift = a.size() - m.size();
    std::uint64_t coef = mulmod(a.back(), inv, p);
    quo[shift] = coef;
    for (std::size_t i = 0; i < m.size(); ++i) {
      a[shift + i] = (a[shift + i] + p - mulmod(coef, m[i], p)) % p;
    }
    trim(a);
  }
  trim(quo);
  if (q) *q = std::move(quo);
  if (r) *r = std::move(a);
}
}  // namespace

FpPoly fp_mod(const FpPoly& a, const FpPoly& m, std::uint64_t p) {
  FpPoly r;
  divmod(a, m, p, nullptr, &r);
  return r;
}

FpPoly fp_div(const FpPoly& a, const FpPoly& m, std::uint64_t p) {
  FpPoly q;
  divmod(a, m, p, &q, nullptr);
  return q;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    FpPoly r = fp_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a, p);
}

std::vector<FpFactorDegree> fp_factor_degrees(const ZVec& f, std::uint64_t p) {
  std::vector<std::pair<FpPoly, unsigned>> sff;
  squarefree_factor(fp_reduce(f, p), p, 1, sff);
  std::vector<FpFactorDegree> out;
  for (auto& [g0, e] : sff) {
    FpPoly g = g0;
    FpPoly h{0, 1};
    unsigned i = 1;
    while (g.size() >= 2 * i + 1) {
      h = powmod(h, mpz_class(static_cast<unsigned long>(p)), g, p);
      FpPoly x{0, 1};
      FpPoly gi = fp_gcd(sub(h, x, p), g, p);
      if (!is_one(gi)) {
        unsigned count = static_cast<unsigned>((gi.size() - 1) / i);
        for (unsigned c = 0; c < count; ++c) out.push_back({e, i});
        g = fp_div(g, gi, p);
        h = fp_mod(h, g, p);
      }
      ++i;
    }
    if (g.size() > 1) out.push_back({e, static_cast<unsigned>(g.size() - 1)});
  }
  std::sort(out.begin(), out.end(), [](const FpFactorDegree& a, const FpFactorDegree& b) {
    return a.multiplicity != b.multiplicity ? a.multiplicity < b.multiplicity : a.degree < b.degree;
  });
  return out;
}

FpPoly fp_squarefree_kernel(const ZVec& f, std::uint64_t p) {
  std::vector<std::pair<FpPoly, unsigned>> sff;
  squarefree_factor(fp_reduce(f, p), p, 1, sff);
  FpPoly out{1};
  for (auto& [g, e] : sff) out = fp_mul(out, g, p);
  return out;
}

std::vector<std::vector<std::uint64_t>> fp_row_basis(std::vector<std::vector<std::uint64_t>> rows,
                                                     std::uint64_t p) {
  if (rows.empty()) return rows;
  const std::size_t cols = rows[0].size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] % p == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    std::uint64_t inv = fp_inv(rows[rank][c], p);
    for (auto& x : rows[rank]) x = mulmod(x % p, inv, p);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] % p == 0) continue;
      std::uint64_t f = rows[r][c] % p;
      for (std::size_t k = 0; k < cols; ++k) {
        rows[r][k] = (rows[r][k] % p + p - mulmod(f, rows[rank][k], p)) % p;
      }
    }
    ++rank;
  }
  rows.resize(rank);
  return rows;
}

std::vector<std::vector<std::uint64_t>> fp_left_kernel(
    const std::vector<std::vector<std::uint64_t>>& m, std::size_t cols, std::uint64_t p) {
  const std::size_t r = m.size();
  std::vector<std::vector<std::uint64_t>> aug(r, std::vector<std::uint64_t>(cols + r, 0));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < cols; ++j) aug[i][j] = m[i][j] % p;
    aug[i][cols + i] = 1;
  }
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < r; ++c) {
    std::size_t piv = rank;
    while (piv < r && aug[piv][c] == 0) ++piv;
    if (piv == r) continue;
    std::swap(aug[rank], aug[piv]);
    std::uint64_t inv = fp_inv(aug[rank][c], p);
    for (auto& x : aug[rank]) x = mulmod(x, inv, p);
    for (std::size_t i = 0; i < r; ++i) {
      if (i == rank || aug[i][c] == 0) continue;
      std::uint64_t f = aug[i][c];
      for (std::size_t k = c; k < cols + r; ++k) {
        aug[i][k] = (aug[i][k] + p - mulmod(f, aug[rank][k], p)) % p;
      }
    }
    ++rank;
  }
  std::vector<std::vector<std::uint64_t>> ker;
  for (std::size_t i = rank; i < r; ++i) ker.emplace_back(aug[i].begin() + cols, aug[i].end());
  return fp_row_basis(std::move(ker), p);
}

}  // namespace quatlat::nt
