#include "quatlat/normone.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "quatlat/error.hpp"

namespace quatlat {

namespace {

using I128 = __int128;

// Ambient multiplication on integer vectors in machine arithmetic. Only
// enabled when a worst-case bound shows that nothing can overflow.
class FastMul {
 public:
  FastMul(const Algebra& alg, long double max_entry) : d_(alg->field()->degree()) {
    const auto& F = *alg->field();
    long double pmax = 1;
    for (unsigned e = 0; e + 1 < 2 * d_; ++e) {
      std::vector<std::int64_t> row;
      for (const auto& x : F.power(e)) {
        if (!x.fits_slong_p()) return;
        row.push_back(x.get_si());
        pmax = std::max(pmax, std::fabs(static_cast<long double>(x.get_si())));
      }
      pow_.push_back(std::move(row));
    }
    long double cmax = 1;
    for (const FieldElem* c : {&alg->a(), &alg->b(), &alg->ab()}) {
      std::vector<std::int64_t> v;
      for (const auto& q : c->coeffs()) {
        if (q.get_den() != 1 || !q.get_num().fits_slong_p()) return;
        v.push_back(q.get_num().get_si());
        cmax = std::max(cmax, std::fabs(static_cast<long double>(v.back())));
      }
      consts_.push_back(std::move(v));
    }
    const long double red = 1 + d_ * pmax;
    const long double once = d_ * max_entry * max_entry * red;
    const long double twice = once * d_ * cmax * red;
    ok_ = 4 * twice < std::ldexp(1.0L, 120);
  }

  bool ok() const { return ok_; }

  void mul(const std::int64_t* x, const std::int64_t* y, std::vector<I128>& out) const {
    out.assign(4 * d_, 0);
    std::vector<I128> t(d_), u(d_);
    auto fmul = [&](const std::int64_t* p, const std::int64_t* q, std::vector<I128>& r) {
      std::vector<I128> prod(2 * d_ - 1, 0);
      for (unsigned s = 0; s < d_; ++s) {
        if (!p[s]) continue;
        for (unsigned v = 0; v < d_; ++v) prod[s + v] += static_cast<I128>(p[s]) * q[v];
      }
      reduce(prod, r);
    };
    auto add = [&](int m, const std::vector<I128>& r, int sign) {
      for (unsigned k = 0; k < d_; ++k) out[m * d_ + k] += sign * r[k];
    };
    auto comp = [&](const std::int64_t* v, int m) { return v + m * d_; };
    // z0 = x0y0 + a x1y1 + b x2y2 - ab x3y3
    fmul(comp(x, 0), comp(y, 0), t);
    add(0, t, 1);
    for (int m = 1; m <= 3; ++m) {
      fmul(comp(x, m), comp(y, m), t);
      scale(t, consts_[m - 1], u);
      add(0, u, m == 3 ? -1 : 1);
    }
    // z1 = x0y1 + x1y0 + b(x3y2 - x2y3)
    fmul(comp(x, 0), comp(y, 1), t);
    add(1, t, 1);
    fmul(comp(x, 1), comp(y, 0), t);
    add(1, t, 1);
    cross(comp(x, 3), comp(y, 2), comp(x, 2), comp(y, 3), consts_[1], t, u, fmul);
    add(1, u, 1);
    // z2 = x0y2 + x2y0 + a(x1y3 - x3y1)
    fmul(comp(x, 0), comp(y, 2), t);
    add(2, t, 1);
    fmul(comp(x, 2), comp(y, 0), t);
    add(2, t, 1);
    cross(comp(x, 1), comp(y, 3), comp(x, 3), comp(y, 1), consts_[0], t, u, fmul);
    add(2, u, 1);
    // z3 = x0y3 + x3y0 + x1y2 - x2y1
    fmul(comp(x, 0), comp(y, 3), t);
    add(3, t, 1);
    fmul(comp(x, 3), comp(y, 0), t);
    add(3, t, 1);
    fmul(comp(x, 1), comp(y, 2), t);
    add(3, t, 1);
    fmul(comp(x, 2), comp(y, 1), t);
    add(3, t, -1);
  }

 private:
  void reduce(const std::vector<I128>& prod, std::vector<I128>& r) const {
    r.assign(d_, 0);
    for (unsigned e = 0; e < prod.size(); ++e) {
      if (!prod[e]) continue;
      if (e < d_) {
        r[e] += prod[e];
        continue;
      }
      for (unsigned k = 0; k < d_; ++k)
        if (pow_[e][k]) r[k] += prod[e] * pow_[e][k];
    }
  }

  void scale(const std::vector<I128>& t, const std::vector<std::int64_t>& c, std::vector<I128>& r) const {
    std::vector<I128> prod(2 * d_ - 1, 0);
    for (unsigned s = 0; s < d_; ++s) {
      if (!t[s]) continue;
      for (unsigned v = 0; v < d_; ++v)
        if (c[v]) prod[s + v] += t[s] * c[v];
    }
    reduce(prod, r);
  }

  template <class F>
  void cross(const std::int64_t* p1, const std::int64_t* q1, const std::int64_t* p2, const std::int64_t* q2,
             const std::vector<std::int64_t>& c, std::vector<I128>& t, std::vector<I128>& r, F& fmul) const {
    std::vector<I128> t2(d_);
    fmul(p1, q1, t);
    fmul(p2, q2, t2);
    for (unsigned k = 0; k < d_; ++k) t[k] -= t2[k];
    scale(t, c, r);
  }

  unsigned d_;
  std::vector<std::vector<std::int64_t>> pow_;
  std::vector<std::vector<std::int64_t>> consts_;
  bool ok_ = false;
};

bool qvec_less(const QVec& a, const QVec& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    int c = cmp(a[k], b[k]);
    if (c) return c < 0;
  }
  return false;
}

bool is_cyclic_subset(const UnitGroup& G, const std::vector<std::uint32_t>& sub) {
  for (auto x : sub)
    if (G.element_order(x) == sub.size()) return true;
  return false;
}

bool is_abelian_subset(const UnitGroup& G, const std::vector<std::uint32_t>& sub) {
  for (auto x : sub)
    for (auto y : sub)
      if (G.mul(x, y) != G.mul(y, x)) return false;
  return true;
}

GroupInvariants compute_invariants(const UnitGroup& G) {
  GroupInvariants inv;
  const std::size_t n = G.size();
  for (std::size_t x = 0; x < n; ++x) {
    ++inv.order_spectrum[G.element_order(x)];
    inv.max_element_order = std::max(inv.max_element_order, G.element_order(x));
  }
  std::vector<std::uint32_t> comms;
  std::vector<char> seen(n, 0);
  for (std::size_t x = 0; x < n; ++x) {
    bool central = true;
    for (std::size_t y = 0; y < n; ++y) {
      std::uint32_t xy = G.mul(x, y);
      std::uint32_t yx = G.mul(y, x);
      if (xy == yx) continue;
      central = false;
      std::uint32_t c = G.mul(xy, G.inverse(yx));
      if (!seen[c]) {
        seen[c] = 1;
        comms.push_back(c);
      }
    }
    if (central) ++inv.center_size;
  }
  std::vector<std::uint32_t> derived = G.generated(comms);
  inv.derived_size = derived.size();
  inv.abelian = inv.center_size == n;
  inv.cyclic = inv.max_element_order == n;
  inv.perfect = inv.derived_size == n;
  inv.derived_abelian = is_abelian_subset(G, derived);
  inv.derived_cyclic = is_cyclic_subset(G, derived);
  return inv;
}

std::uint32_t power_of(const UnitGroup& G, std::uint32_t x, std::size_t e) {
  std::uint32_t r = 0;
  for (std::size_t k = 0; k < e; ++k) r = G.mul(r, x);
  return r;
}

bool is_generalized_quaternion(const UnitGroup& G) {
  const std::size_t n2 = G.size();
  if (n2 < 8 || n2 % 4 != 0) return false;
  const std::size_t n = n2 / 2;
  std::optional<std::uint32_t> x;
  for (std::size_t g = 0; g < n2 && !x; ++g)
    if (G.element_order(g) == n) x = static_cast<std::uint32_t>(g);
  if (!x) return false;
  const std::uint32_t xinv = G.inverse(*x);
  const std::uint32_t half = power_of(G, *x, n / 2);
  for (std::size_t y = 0; y < n2; ++y) {
    if (G.element_order(y) != 4) continue;
    if (G.mul(y, y) != half) continue;
    if (G.mul(G.mul(static_cast<std::uint32_t>(y), *x), G.inverse(y)) == xinv) return true;
  }
  return false;
}

GroupTag compute_tag(const UnitGroup& G, const GroupInvariants& inv) {
  const std::size_t n = G.size();
  if (inv.cyclic) return {GroupKind::Cyclic, n};
  if (is_generalized_quaternion(G)) return {GroupKind::GeneralizedQuaternion, n};
  if (n == 24 && inv.derived_size == 8) return {GroupKind::SL23, 0};
  if (n == 48 && inv.derived_size == 24 && !inv.derived_abelian) return {GroupKind::BinaryOctahedral, 0};
  if (n == 120 && inv.perfect) return {GroupKind::SL25, 0};
  return {GroupKind::Unknown, 0};
}

}  // namespace

std::string GroupTag::to_string() const {
  switch (kind) {
    case GroupKind::Cyclic:
      return "Cyclic(" + std::to_string(param) + ")";
    case GroupKind::GeneralizedQuaternion:
      return "GeneralizedQuaternion(" + std::to_string(param) + ")";
    case GroupKind::SL23:
      return "SL23";
    case GroupKind::BinaryOctahedral:
      return "BinaryOctahedral";
    case GroupKind::SL25:
      return "SL25";
    case GroupKind::Unknown:
      break;
  }
  return "Unknown";
}

std::optional<GroupTag> parse_group_tag(const std::string& s) {
  if (s == "SL23") return GroupTag{GroupKind::SL23, 0};
  if (s == "BinaryOctahedral") return GroupTag{GroupKind::BinaryOctahedral, 0};
  if (s == "SL25") return GroupTag{GroupKind::SL25, 0};
  if (s == "Unknown") return GroupTag{GroupKind::Unknown, 0};
  for (auto [name, kind] : {std::pair{"Cyclic(", GroupKind::Cyclic},
                            std::pair{"GeneralizedQuaternion(", GroupKind::GeneralizedQuaternion}}) {
    std::string pre = name;
    if (s.size() <= pre.size() + 1 || s.compare(0, pre.size(), pre) != 0 || s.back() != ')') continue;
    std::string num = s.substr(pre.size(), s.size() - pre.size() - 1);
    if (num.empty() || !std::all_of(num.begin(), num.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
      return std::nullopt;
    return GroupTag{kind, static_cast<std::size_t>(std::stoul(num))};
  }
  return std::nullopt;
}

std::optional<std::size_t> UnitGroup::index_of(const Quaternion& x) const {
  QVec v = x.coords();
  auto it = std::lower_bound(coords_.begin() + 1, coords_.end(), v, qvec_less);
  if (it != coords_.end() && *it == v) return static_cast<std::size_t>(it - coords_.begin());
  if (!coords_.empty() && coords_[0] == v) return 0;
  return std::nullopt;
}

std::vector<std::uint32_t> UnitGroup::generated(const std::vector<std::uint32_t>& gens) const {
  std::vector<char> in(size(), 0);
  std::vector<std::uint32_t> out{0};
  in[0] = 1;
  for (std::size_t head = 0; head < out.size(); ++head)
    for (auto g : gens) {
      std::uint32_t p = mul(out[head], g);
      if (!in[p]) {
        in[p] = 1;
        out.push_back(p);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

UnitGroup norm_one_group(const QuatOrder& O, unsigned threads) {
  if (!O.alg->definite()) throw Error(ErrorKind::NotDefinite, "norm-one group needs a definite algebra");
  const unsigned d = O.degree();
  const std::size_t N = O.rank();
  QMat B = O.lattice.basis();
  std::vector<ZVec> vecs = lat::enumerate_exact(O.gram_nrd, mpz_class(2 * d), nullptr, threads);

  const FieldElem one(O.alg->field(), 1);
  std::vector<QVec> coords;
  coords.reserve(vecs.size());
  for (const auto& v : vecs) {
    QVec x(N, 0);
    for (std::size_t s = 0; s < N; ++s) {
      if (v[s] == 0) continue;
      for (std::size_t k = 0; k < N; ++k) x[k] += B[s][k] * v[s];
    }
    if (!(Quaternion::from_coords(O.alg, x).nrd() == one))
      throw Error(ErrorKind::Internal, "enumerated vector with reduced norm != 1");
    coords.push_back(std::move(x));
  }
  QVec idv(N, 0);
  idv[0] = 1;
  auto id_it = std::find(coords.begin(), coords.end(), idv);
  if (id_it == coords.end()) throw Error(ErrorKind::Internal, "identity missing from norm-one enumeration");
  coords.erase(id_it);
  std::sort(coords.begin(), coords.end(), qvec_less);
  coords.insert(coords.begin(), idv);

  UnitGroup G;
  G.order_ = O;
  G.coords_ = coords;
  const std::size_t n = coords.size();
  for (const auto& x : coords) G.elements_.push_back(Quaternion::from_coords(O.alg, x));

  // Integer images D*x of the elements.
  mpz_class D = 1;
  for (const auto& x : coords)
    for (const auto& q : x) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), q.get_den().get_mpz_t());
  std::vector<ZVec> ints;
  long double max_entry = 0;
  bool small = D.fits_slong_p();
  for (const auto& x : coords) {
    ZVec z(N);
    for (std::size_t k = 0; k < N; ++k) {
      z[k] = x[k].get_num() * (D / x[k].get_den());
      if (!z[k].fits_slong_p()) small = false;
      else max_entry = std::max(max_entry, std::fabs(static_cast<long double>(z[k].get_si())));
    }
    ints.push_back(std::move(z));
  }
  std::map<ZVec, std::uint32_t> where;
  for (std::size_t i = 0; i < n; ++i) where.emplace(ints[i], static_cast<std::uint32_t>(i));

  G.table_.assign(n * n, 0);
  auto fail = [] { throw Error(ErrorKind::Internal, "norm-one set is not closed under multiplication"); };
  std::optional<FastMul> fast;
  if (small) {
    fast.emplace(O.alg, max_entry);
    if (!fast->ok()) fast.reset();
  }
  if (fast) {
    const long dd = D.get_si();
    std::vector<std::vector<std::int64_t>> m(n, std::vector<std::int64_t>(N));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < N; ++k) m[i][k] = ints[i][k].get_si();
    std::vector<I128> out;
    ZVec key(N);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        fast->mul(m[i].data(), m[j].data(), out);
        for (std::size_t k = 0; k < N; ++k) {
          if (out[k] % dd != 0) fail();
          I128 q = out[k] / dd;
          if (q > INT64_MAX || q < INT64_MIN) fail();
          key[k] = static_cast<long>(q);
        }
        auto it = where.find(key);
        if (it == where.end()) fail();
        G.table_[i * n + j] = it->second;
      }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        QVec p = ambient_mul(O.alg, coords[i], coords[j]);
        ZVec key(N);
        for (std::size_t k = 0; k < N; ++k) {
          mpq_class t = p[k] * D;
          if (t.get_den() != 1) fail();
          key[k] = t.get_num();
        }
        auto it = where.find(key);
        if (it == where.end()) fail();
        G.table_[i * n + j] = it->second;
      }
  }

  G.inverse_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto ci = G.index_of(G.elements_[i].conj());
    if (!ci || G.table_[i * n + *ci] != 0 || G.table_[*ci * n + i] != 0)
      throw Error(ErrorKind::Internal, "conjugate is not the inverse in the norm-one group");
    G.inverse_[i] = static_cast<std::uint32_t>(*ci);
  }
  G.orders_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t k = 1;
    for (std::uint32_t p = static_cast<std::uint32_t>(i); p != 0; p = G.table_[p * n + i]) ++k;
    G.orders_[i] = i == 0 ? 1 : k;
  }
  G.inv_ = compute_invariants(G);
  G.tag_ = compute_tag(G, G.inv_);
  return G;
}

const GroupInvariants& group_invariants(const UnitGroup& G) { return G.invariants(); }

GroupTag identify(const UnitGroup& G) { return G.tag(); }

bool is_full(const UnitGroup& G) {
  if (G.invariants().abelian) return false;
  const QuatOrder& O = G.order();
  QuatOrder RG = order_closure(O.alg, G.elements());
  return is_maximal(RG);
}

}  // namespace quatlat
