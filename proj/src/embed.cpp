#include "quatlat/embed.hpp"

#include <algorithm>
#include <atomic>
#include <optional>
#include <thread>

#include "quatlat/error.hpp"

namespace quatlat {

namespace {

std::optional<mpz_class> exact_sqrt(const mpq_class& q) {
  if (q < 0) return std::nullopt;
  if (q.get_den() != 1) return std::nullopt;
  if (!mpz_perfect_square_p(q.get_num().get_mpz_t())) return std::nullopt;
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), q.get_num().get_mpz_t());
  return r;
}

bool has_order_exactly(const Quaternion& d, unsigned m) {
  const Quaternion one(d.algebra(), FieldElem(d.algebra()->field(), 1));
  if (!(d.pow(m) == one)) return false;
  for (const auto& [p, e] : nt::factor(mpz_class(m))) {
    (void)e;
    if (d.pow(static_cast<long>(m / p.get_ui())) == one) return false;
  }
  return true;
}

// Pure u in (1/2)(R i + R j + R k) with nrd(u) = target, preferring a
// positive i-coordinate under the first embedding.
std::optional<Quaternion> pure_of_norm(const Algebra& alg, const FieldElem& target) {
  const unsigned d = alg->field()->degree();
  const QMat full = nrd_form(alg);
  mpz_class den = 1;
  for (std::size_t r = d; r < 4 * d; ++r)
    for (std::size_t s = d; s < 4 * d; ++s) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), full[r][s].get_den().get_mpz_t());
  ZMat gram(3 * d, ZVec(3 * d));
  for (std::size_t r = 0; r < 3 * d; ++r)
    for (std::size_t s = 0; s < 3 * d; ++s) gram[r][s] = mpq_class(full[r + d][s + d] * den).get_num();
  // 2u has norm 4*target; the form computes 2 Tr(nrd).
  const FieldElem goal = target * mpq_class(4);
  const mpq_class t = 2 * goal.trace() * den;
  if (t.get_den() != 1 || t <= 0) return std::nullopt;
  auto to_quat = [&](const ZVec& v) {
    QVec x(4 * d, 0);
    for (std::size_t s = 0; s < 3 * d; ++s) {
      x[s + d] = mpq_class(v[s], 2);
      x[s + d].canonicalize();
    }
    return Quaternion::from_coords(alg, x);
  };
  auto sols = lat::enumerate_exact(gram, t.get_num(), [&](const ZVec& v) {
    return (to_quat(v).nrd() * mpq_class(4)) == goal;
  });
  if (sols.empty()) return std::nullopt;
  for (const auto& v : sols) {
    Quaternion u = to_quat(v);
    if (!u[1].is_zero() && embedding_signs(u[1])[0] > 0) return u;
  }
  return to_quat(sols.front());
}

}  // namespace

RootEmbedding embed_root(const Algebra& alg, unsigned m) {
  const Field& f = alg->field();
  FieldElem t;
  try {
    t = cyclo_trace(f, m);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoEmbedding) throw;
    throw Error(ErrorKind::NotEmbeddable, "no root of unity of order " + std::to_string(m) + " over n=" +
                                              std::to_string(f->n()));
  }
  const mpq_class half(1, 2);
  const FieldElem rest = (FieldElem(f, 4) - t * t) * mpq_class(1, 4);  // nrd of the pure part
  Quaternion d(alg, t * half);
  const unsigned n = f->n();
  if (rest.is_zero()) {
    // m = 1 or 2
  } else if (alg->is_standard() && n % 4 == 0 && n % m == 0) {
    // z - 1/z = i * 2 sin(2 pi / m) and 2 sin(2 pi/m) = z^(n/4 - n/m) + inverse.
    d += Quaternion(alg, FieldElem(f), cheby(f, static_cast<long>(n / 4) - static_cast<long>(n / m)) * half,
                    FieldElem(f), FieldElem(f));
  } else if (auto r = rest.is_rational() ? exact_sqrt(rest[0] * 4) : std::nullopt;
             r && alg->a() == FieldElem(f, -1)) {
    mpq_class beta(*r, 2);
    beta.canonicalize();
    d += Quaternion(alg, FieldElem(f), FieldElem(f, beta), FieldElem(f), FieldElem(f));
  } else {
    auto u = pure_of_norm(alg, rest);
    if (!u)
      throw Error(ErrorKind::SearchExhausted,
                  "no pure quaternion of norm " + rest.to_string() + " in the half-integral lattice");
    d += *u;
  }
  if (!(d.trd() == t) || !(d.nrd() == FieldElem(f, 1)) || !has_order_exactly(d, m))
    throw Error(ErrorKind::Internal, "root of unity construction failed for m=" + std::to_string(m));
  return {alg, m, d};
}

QuatOrder crossed_order(const RootEmbedding& emb, long power) {
  return order_closure(emb.alg, {emb.d.pow(power), Quaternion::unit(emb.alg, 2)});
}

std::optional<MaximalSearchHit> search_maximal_orders(const QuatOrder& O,
                                                      const std::function<bool(const UnitGroup&)>& pred,
                                                      std::size_t max_orders, unsigned threads, bool walk) {
  std::vector<std::vector<QuatOrder>> local;
  for (const auto& p : maximality_candidates(O))
    local.push_back(p_maximal_overorders(O, p.get_ui(), walk ? max_orders : 64, walk));
  std::vector<std::size_t> pick(local.size(), 0);
  for (std::size_t tried = 1; tried <= max_orders; ++tried) {
    std::vector<QuatOrder> parts{O};
    for (std::size_t k = 0; k < local.size(); ++k) parts.push_back(local[k][pick[k]]);
    QuatOrder M = sum_of_orders(parts);
    UnitGroup G = norm_one_group(M, threads);
    if (pred(G)) return MaximalSearchHit{std::move(M), std::move(G), tried};
    std::size_t k = local.size();
    while (k > 0 && ++pick[k - 1] == local[k - 1].size()) pick[--k] = 0;
    if (k == 0) break;
  }
  return std::nullopt;
}

FieldElem variant_parameter(const Field& f, unsigned n1, unsigned m1) {
  FieldElem c = FieldElem::gen(f);
  return -(c.pow(2 * static_cast<long>(n1)) + c.pow(2 * static_cast<long>(m1)));
}

VariantReport variant_search(const Field& f, const std::vector<std::pair<unsigned, unsigned>>& pairs,
                             const std::function<bool(const UnitGroup&)>& pred, unsigned threads,
                             std::size_t max_orders) {
  struct Slot {
    std::optional<VariantResult> hit;
    std::optional<std::string> error;
  };
  std::vector<Slot> slots(pairs.size());
  auto run = [&](std::size_t idx) {
    auto [n1, m1] = pairs[idx];
    try {
      if (n1 == 0 || m1 == 0) throw Error(ErrorKind::ZeroParameter, "exponents must be positive");
      Algebra alg = SymbolAlgebra::build(f, FieldElem(f, -1), variant_parameter(f, n1, m1));
      if (!alg->definite()) throw Error(ErrorKind::NotDefinite, "variant algebra is not definite");
      const QuatOrder O = order_closure(alg, {Quaternion::unit(alg, 1), Quaternion::unit(alg, 2)});
      if (auto hit = search_maximal_orders(O, pred, max_orders))
        slots[idx].hit = VariantResult{n1, m1, alg, std::move(hit->order), std::move(hit->group), hit->tried};
    } catch (const std::exception& e) {
      slots[idx].error = e.what();
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(pairs.size())));
  if (threads <= 1) {
    for (std::size_t i = 0; i < pairs.size(); ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next++) < pairs.size();) run(i);
      });
    for (auto& th : pool) th.join();
  }
  VariantReport rep;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (slots[i].hit) rep.matches.push_back(std::move(*slots[i].hit));
    if (slots[i].error) rep.failures.push_back({pairs[i].first, pairs[i].second, *slots[i].error});
  }
  return rep;
}

}  // namespace quatlat
