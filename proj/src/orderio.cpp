#include "quatlat/orderio.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "quatlat/error.hpp"
#include "quatlat/expr.hpp"

namespace quatlat {

namespace {

constexpr const char* kMagic = "quatlat-order v1";

[[noreturn]] void schema(std::size_t line, const std::string& msg) {
  throw Error(ErrorKind::SchemaError, "order file line " + std::to_string(line) + ": " + msg);
}

}  // namespace

void write_order(std::ostream& out, const QuatOrder& O) {
  out << kMagic << "\n";
  out << "n " << O.alg->field()->n() << "\n";
  out << "a " << O.alg->a().to_string() << "\n";
  out << "b " << O.alg->b().to_string() << "\n";
  out << "denom " << O.lattice.denom.get_str() << "\n";
  for (const auto& r : O.lattice.rows) {
    out << "row";
    for (const auto& x : r) out << ' ' << x.get_str();
    out << "\n";
  }
  out << "end\n";
}

std::string order_to_string(const QuatOrder& O) {
  std::ostringstream os;
  write_order(os, O);
  return os.str();
}

QuatOrder read_order(std::istream& in) {
  std::string line;
  std::size_t no = 0;
  auto next = [&]() -> bool {
    while (std::getline(in, line)) {
      ++no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      return true;
    }
    return false;
  };
  if (!next() || line != kMagic) schema(no, std::string("expected '") + kMagic + "'");
  unsigned n = 0;
  std::string a_src, b_src;
  mpz_class denom = 0;
  ZMat rows;
  bool ended = false;
  while (next()) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    std::string rest;
    std::getline(ls, rest);
    const auto first = rest.find_first_not_of(' ');
    rest = first == std::string::npos ? "" : rest.substr(first);
    if (key == "n") {
      try {
        n = static_cast<unsigned>(std::stoul(rest));
      } catch (const std::exception&) {
        schema(no, "bad n");
      }
      if (n == 0) schema(no, "n must be positive");
    } else if (key == "a") {
      a_src = rest;
    } else if (key == "b") {
      b_src = rest;
    } else if (key == "denom") {
      if (denom.set_str(rest, 10) != 0 || denom <= 0) schema(no, "bad denominator");
    } else if (key == "row") {
      std::istringstream rs(rest);
      std::string tok;
      ZVec r;
      while (rs >> tok) {
        mpz_class z;
        if (z.set_str(tok, 10) != 0) schema(no, "bad integer '" + tok + "'");
        r.push_back(z);
      }
      rows.push_back(std::move(r));
    } else if (key == "end") {
      ended = true;
      break;
    } else {
      schema(no, "unknown key '" + key + "'");
    }
  }
  if (!ended) schema(no, "missing 'end'");
  if (n == 0 || a_src.empty() || b_src.empty() || denom == 0) schema(no, "missing n, a, b or denom");
  Field f = RealCycloField::get(n);
  ExprContext ctx{SymbolAlgebra::standard(n), std::nullopt, {}};
  FieldElem a, b;
  try {
    a = parse_scalar(a_src, ctx);
    b = parse_scalar(b_src, ctx);
  } catch (const ParseError& e) {
    schema(no, std::string("algebra parameter: ") + e.what());
  }
  Algebra alg = (a == FieldElem(f, -1) && b == FieldElem(f, -1)) ? SymbolAlgebra::standard(n)
                                                                 : SymbolAlgebra::build(f, a, b);
  const std::size_t N = 4 * f->degree();
  if (rows.size() != N) schema(no, "expected " + std::to_string(N) + " rows, got " + std::to_string(rows.size()));
  for (const auto& r : rows)
    if (r.size() != N) schema(no, "row length must be " + std::to_string(N));
  lat::RatLattice L = lat::make_lattice(rows, denom, N);
  if (L.rank() != N) schema(no, "rows are not independent");
  QMat B = L.basis();
  QVec one(N, 0);
  one[0] = 1;
  if (!lat::contains(L, one)) schema(no, "lattice does not contain 1");
  for (std::size_t s = 0; s < N; ++s)
    for (std::size_t t = 0; t < N; ++t)
      if (!lat::contains(L, ambient_mul(alg, B[s], B[t]))) schema(no, "lattice is not closed under multiplication");
  return make_order(alg, L);
}

QuatOrder order_from_string(const std::string& text) {
  std::istringstream is(text);
  return read_order(is);
}

}  // namespace quatlat
