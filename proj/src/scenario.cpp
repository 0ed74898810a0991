#include "quatlat/scenario.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <variant>

#include "json.hpp"
#include "quatlat/embed.hpp"
#include "quatlat/error.hpp"
#include "quatlat/expr.hpp"
#include "quatlat/normone.hpp"

namespace quatlat {

namespace {

[[noreturn]] void schema(std::size_t line, const std::string& msg) {
  throw Error(ErrorKind::SchemaError, "scenario line " + std::to_string(line) + ": " + msg);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Splits "head rest" at the first run of blanks.
std::pair<std::string, std::string> split_word(const std::string& s) {
  const auto p = s.find_first_of(" \t");
  if (p == std::string::npos) return {s, ""};
  return {s.substr(0, p), trim(s.substr(p))};
}

unsigned parse_unsigned(const std::string& s, std::size_t line, const char* what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 9)
    schema(line, std::string("bad ") + what + " '" + s + "'");
  return static_cast<unsigned>(std::stoul(s));
}

using GroupPtr = std::shared_ptr<const UnitGroup>;
using Value = std::variant<Quaternion, QuatOrder, GroupPtr>;

std::string kind_name(EntryKind k) {
  switch (k) {
    case EntryKind::Step: return "step";
    case EntryKind::Expect: return "expect";
    case EntryKind::Observe: return "observe";
    case EntryKind::Note: return "note";
  }
  return "note";
}

struct Predicate {
  std::optional<std::size_t> size;
  std::optional<bool> abelian;
  std::optional<std::string> tag;
  std::optional<std::size_t> has_order;

  bool operator()(const UnitGroup& G) const {
    if (size && G.size() != *size) return false;
    if (abelian && G.invariants().abelian != *abelian) return false;
    if (tag && G.tag().to_string() != *tag) return false;
    if (has_order && !G.invariants().order_spectrum.count(*has_order)) return false;
    return true;
  }
};

Predicate parse_predicate(const std::string& s) {
  Predicate p;
  std::istringstream is(s);
  std::string tok;
  auto number = [](const std::string& v) {
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
      throw Error(ErrorKind::SchemaError, "bad number '" + v + "' in predicate");
    return static_cast<std::size_t>(std::stoul(v));
  };
  while (is >> tok) {
    if (tok == "abelian") p.abelian = true;
    else if (tok == "nonabelian") p.abelian = false;
    else if (tok.rfind("size=", 0) == 0) p.size = number(tok.substr(5));
    else if (tok.rfind("has_order=", 0) == 0) p.has_order = number(tok.substr(10));
    else if (tok.rfind("tag=", 0) == 0) p.tag = tok.substr(4);
    else throw Error(ErrorKind::SchemaError, "unknown predicate term '" + tok + "'");
  }
  return p;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

std::string spectrum_str(const GroupInvariants& inv) {
  std::string s;
  for (const auto& [ord, cnt] : inv.order_spectrum) {
    if (!s.empty()) s += ' ';
    s += std::to_string(ord) + ":" + std::to_string(cnt);
  }
  return s;
}

class Runner {
 public:
  Runner(const Scenario& sc, const RunOptions& opt) : sc_(sc), opt_(opt) {
    base_ = sc.algebra_a == "-1" && sc.algebra_b == "-1" ? SymbolAlgebra::standard(sc.n) : build_algebra();
    if (sc.embed) {
      d_ = embed_root(base_, sc.embed).d;
      values_.emplace("d", *d_);
    }
  }

  std::string step(const std::string& text) {
    auto eq = text.find('=');
    if (text.rfind("let ", 0) != 0 || eq == std::string::npos)
      throw Error(ErrorKind::SchemaError, "expected 'let NAME = OP ARGS'");
    const std::string name = trim(text.substr(4, eq - 4));
    if (name.empty() || name.find_first_of(" \t") != std::string::npos)
      throw Error(ErrorKind::SchemaError, "bad binding name '" + name + "'");
    auto [op, args] = split_word(trim(text.substr(eq + 1)));
    Value v = evaluate(op, args);
    std::string summary = describe(v);
    values_.insert_or_assign(name, std::move(v));
    return summary;
  }

  // Returns the actual value rendered canonically, and whether it matches.
  std::pair<std::string, bool> expect(const std::string& text) {
    const auto eq = text.rfind(" = ");
    if (eq == std::string::npos) throw Error(ErrorKind::SchemaError, "expected 'TARGET PROPERTY = VALUE'");
    const std::string lhs = trim(text.substr(0, eq));
    const std::string want = trim(text.substr(eq + 3));
    auto [target, prop] = split_word(lhs);
    std::string actual = property(target, prop);
    return {actual, same_value(target, prop, actual, want)};
  }

  std::string observe(const std::string& text) {
    auto [target, prop] = split_word(trim(text));
    return property(target, prop);
  }

 private:
  Algebra build_algebra() const {
    ExprContext ctx{SymbolAlgebra::standard(sc_.n), std::nullopt, {}};
    FieldElem a = parse_scalar(sc_.algebra_a, ctx);
    FieldElem b = parse_scalar(sc_.algebra_b, ctx);
    return SymbolAlgebra::build(a.field(), a, b);
  }

  ExprContext context(const Algebra& alg) const {
    ExprContext ctx{alg, std::nullopt, {}};
    if (d_ && alg->same_as(*base_)) ctx.d = d_;
    for (const auto& [name, v] : values_)
      if (auto q = std::get_if<Quaternion>(&v); q && q->algebra()->same_as(*alg)) ctx.names.emplace(name, *q);
    return ctx;
  }

  const Value& lookup(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) throw Error(ErrorKind::SchemaError, "unknown name '" + name + "'");
    return it->second;
  }

  const QuatOrder& order(const std::string& name) const {
    if (auto o = std::get_if<QuatOrder>(&lookup(name))) return *o;
    throw Error(ErrorKind::SchemaError, "'" + name + "' is not an order");
  }

  const UnitGroup& group(const std::string& name) const {
    if (auto g = std::get_if<GroupPtr>(&lookup(name))) return **g;
    throw Error(ErrorKind::SchemaError, "'" + name + "' is not a group");
  }

  Value evaluate(const std::string& op, const std::string& args) {
    if (op == "elem") return parse_element(args, context(base_));
    if (op == "closure") return order_closure(base_, parse_element_list(args, context(base_)));
    if (op == "adjoin") {
      auto [src, expr] = split_word(args);
      const QuatOrder& O = order(src);
      return adjoin(O, parse_element(expr, context(O.alg)));
    }
    if (op == "maximize") return maximize(order(args));
    if (op == "extend") {
      auto [src, nb] = split_word(args);
      return extend_scalars(order(src), parse_unsigned(nb, 0, "n"));
    }
    if (op == "crossed") {
      if (!d_) throw Error(ErrorKind::SchemaError, "crossed needs an 'embed' line");
      const long p = std::stol(args);
      return order_closure(base_, {d_->pow(p), Quaternion::unit(base_, 2)});
    }
    if (op == "normone") return std::make_shared<const UnitGroup>(norm_one_group(order(args), opt_.threads));
    if (op == "span") {
      const UnitGroup& G = group(args);
      return order_closure(G.order().alg, G.elements());
    }
    if (op == "search") {
      auto [src, pred] = split_word(args);
      auto hit = search_maximal_orders(order(src), parse_predicate(pred), 256, opt_.threads, true);
      if (!hit) throw Error(ErrorKind::SearchExhausted, "no maximal order matches '" + pred + "'");
      return std::move(hit->order);
    }
    if (op == "variant") {
      std::istringstream is(args);
      std::string a, b, pred;
      is >> a >> b;
      std::getline(is, pred);
      const unsigned n1 = parse_unsigned(a, 0, "exponent"), m1 = parse_unsigned(b, 0, "exponent");
      VariantReport rep = variant_search(base_->field(), {{n1, m1}}, parse_predicate(trim(pred)), 1);
      if (!rep.failures.empty()) throw Error(ErrorKind::SearchExhausted, rep.failures[0].error);
      if (rep.matches.empty()) throw Error(ErrorKind::SearchExhausted, "no maximal order matches '" + trim(pred) + "'");
      return std::move(rep.matches[0].order);
    }
    throw Error(ErrorKind::SchemaError, "unknown operation '" + op + "'");
  }

  static std::string describe(const Value& v) {
    if (auto q = std::get_if<Quaternion>(&v)) return q->to_string();
    if (auto o = std::get_if<QuatOrder>(&v))
      return "order n=" + std::to_string(o->alg->field()->n()) + " disc=" + o->disc_z.get_str();
    const UnitGroup& G = *std::get<GroupPtr>(v);
    return "group size=" + std::to_string(G.size()) + " tag=" + G.tag().to_string();
  }

  // "name" or "name(arg)"
  static std::pair<std::string, std::string> split_call(const std::string& prop) {
    const auto p = prop.find('(');
    if (p == std::string::npos) return {prop, ""};
    if (prop.back() != ')') throw Error(ErrorKind::SchemaError, "unbalanced property '" + prop + "'");
    return {prop.substr(0, p), prop.substr(p + 1, prop.size() - p - 2)};
  }

  std::string property(const std::string& target, const std::string& prop) {
    auto [name, arg] = split_call(prop);
    const Value& v = lookup(target);
    if (auto o = std::get_if<QuatOrder>(&v)) {
      if (name == "maximal") return bool_str(is_maximal(*o));
      if (name == "azumaya") return bool_str(is_azumaya(*o));
      if (name == "disc") return o->disc_z.get_str();
      if (name == "disc_is_target") return bool_str(abs(o->disc_z) == ramification(o->alg).disc_target);
      if (name == "rank") return std::to_string(o->rank());
      if (name == "n") return std::to_string(o->alg->field()->n());
      if (name == "contains") return bool_str(o->contains(parse_element(arg, context(o->alg))));
      if (name == "equals") return bool_str(*o == order(arg));
      if (name == "up_to_2") return bool_str(equal_up_to_2_power(*o, order(arg)));
    } else if (auto g = std::get_if<GroupPtr>(&v)) {
      const UnitGroup& G = **g;
      const GroupInvariants& inv = G.invariants();
      if (name == "size") return std::to_string(G.size());
      if (name == "tag") return G.tag().to_string();
      if (name == "abelian") return bool_str(inv.abelian);
      if (name == "cyclic") return bool_str(inv.cyclic);
      if (name == "perfect") return bool_str(inv.perfect);
      if (name == "center_size") return std::to_string(inv.center_size);
      if (name == "derived_size") return std::to_string(inv.derived_size);
      if (name == "derived_index") return std::to_string(G.size() / inv.derived_size);
      if (name == "derived_abelian") return bool_str(inv.derived_abelian);
      if (name == "derived_cyclic") return bool_str(inv.derived_cyclic);
      if (name == "max_order") return std::to_string(inv.max_element_order);
      if (name == "spectrum") return spectrum_str(inv);
      if (name == "has_order") return bool_str(inv.order_spectrum.count(std::stoul(arg)) > 0);
      if (name == "full") return bool_str(is_full(G));
      if (name == "contains") return bool_str(G.index_of(parse_element(arg, context(G.order().alg))).has_value());
    } else {
      const Quaternion& q = std::get<Quaternion>(v);
      if (name == "order") return std::to_string(multiplicative_order(q, 10000));
      if (name == "trd") return q.trd().to_string();
      if (name == "nrd") return q.nrd().to_string();
      if (name == "integral") return bool_str(q.is_integral());
      if (name == "value") return q.to_string();
      if (name == "in") return bool_str(order(arg).contains(q));
    }
    throw Error(ErrorKind::SchemaError, "unknown property '" + prop + "' for '" + target + "'");
  }

  bool same_value(const std::string& target, const std::string& prop, const std::string& actual,
                  const std::string& want) {
    auto [name, arg] = split_call(prop);
    (void)arg;
    if (name == "trd" || name == "nrd") {
      const Quaternion& q = std::get<Quaternion>(lookup(target));
      return parse_scalar(want, context(q.algebra())).to_string() == actual;
    }
    if (name == "value") {
      const Quaternion& q = std::get<Quaternion>(lookup(target));
      return parse_element(want, context(q.algebra())) == q;
    }
    return actual == want;
  }

  const Scenario& sc_;
  RunOptions opt_;
  Algebra base_;
  std::optional<Quaternion> d_;
  std::map<std::string, Value> values_;
};

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string ms(double s) { return std::to_string(static_cast<long long>(s * 1000 + 0.5)) + " ms"; }

}  // namespace

Scenario parse_scenario(const std::string& text) {
  Scenario sc;
  std::istringstream is(text);
  std::string raw;
  std::size_t no = 0;
  bool body = false;
  while (std::getline(is, raw)) {
    ++no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto [key, rest] = split_word(line);
    auto header = [&] {
      if (body) schema(no, "'" + key + "' must come before the first step");
    };
    if (key == "scenario") {
      header();
      sc.name = rest;
    } else if (key == "source") {
      header();
      sc.source = rest;
    } else if (key == "tier") {
      header();
      if (rest != "quick" && rest != "slow" && rest != "stretch") schema(no, "tier must be quick, slow or stretch");
      sc.tier = rest;
    } else if (key == "n") {
      header();
      sc.n = parse_unsigned(rest, no, "n");
      if (sc.n == 0) schema(no, "n must be positive");
    } else if (key == "algebra") {
      header();
      auto parts = split_top_level(rest);
      if (parts.size() != 2) schema(no, "algebra needs 'a, b'");
      sc.algebra_a = trim(parts[0]);
      sc.algebra_b = trim(parts[1]);
    } else if (key == "embed") {
      header();
      sc.embed = parse_unsigned(rest, no, "root order");
    } else if (key == "step" || key == "expect" || key == "observe" || key == "note") {
      if (sc.n == 0) schema(no, "'n' must be set before '" + key + "'");
      body = true;
      EntryKind k = key == "step" ? EntryKind::Step
                    : key == "expect" ? EntryKind::Expect
                    : key == "observe" ? EntryKind::Observe
                                       : EntryKind::Note;
      if (rest.empty()) schema(no, "empty '" + key + "'");
      sc.entries.push_back({k, no, rest});
    } else {
      schema(no, "unknown key '" + key + "'");
    }
  }
  if (sc.name.empty()) schema(no, "missing 'scenario' line");
  if (sc.n == 0) schema(no, "missing 'n' line");
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::SchemaError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::size_t Report::failures() const {
  std::size_t f = 0;
  for (const auto& e : entries)
    if (!e.ok) ++f;
  return f;
}

std::size_t Report::expectations() const {
  std::size_t c = 0;
  for (const auto& e : entries)
    if (e.kind == EntryKind::Expect) ++c;
  return c;
}

Report run_scenario(const Scenario& sc, const RunOptions& opt) {
  Report rep;
  rep.name = sc.name;
  rep.source = sc.source;
  rep.tier = sc.tier;
  rep.n = sc.n;
  const auto start = std::chrono::steady_clock::now();
  std::unique_ptr<Runner> runner;
  std::string setup_error;
  try {
    runner = std::make_unique<Runner>(sc, opt);
  } catch (const std::exception& e) {
    setup_error = e.what();
  }
  for (const auto& ent : sc.entries) {
    ReportEntry r;
    r.kind = ent.kind;
    r.line = ent.line;
    r.text = ent.text;
    if (ent.kind == EntryKind::Note) {
      rep.entries.push_back(std::move(r));
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    try {
      if (!runner) throw Error(ErrorKind::SchemaError, "scenario setup failed: " + setup_error);
      switch (ent.kind) {
        case EntryKind::Step:
          r.value = runner->step(ent.text);
          break;
        case EntryKind::Expect: {
          auto [actual, ok] = runner->expect(ent.text);
          r.value = actual;
          r.ok = ok;
          if (!ok) r.error = "expected " + trim(ent.text.substr(ent.text.rfind(" = ") + 3)) + ", got " + actual;
          break;
        }
        default:
          r.value = runner->observe(ent.text);
          break;
      }
    } catch (const std::exception& e) {
      r.ok = false;
      r.error = e.what();
    }
    if (ent.kind == EntryKind::Step) r.seconds = since(t0);
    rep.entries.push_back(std::move(r));
  }
  rep.seconds = since(start);
  return rep;
}

std::string render_text(const Report& r, const RunOptions& opt) {
  std::ostringstream os;
  os << "scenario " << r.name << " (n=" << r.n << ", tier=" << r.tier << ")\n";
  if (!r.source.empty()) os << "source: " << r.source << "\n";
  for (const auto& e : r.entries) {
    std::string kind = kind_name(e.kind);
    kind.resize(7, ' ');
    os << "  " << kind << " L" << e.line << " " << e.text;
    if (e.kind == EntryKind::Note) {
      os << "\n";
      continue;
    }
    if (!e.error.empty() && e.kind != EntryKind::Expect) {
      os << " -> ERROR " << e.error;
    } else if (e.kind == EntryKind::Expect) {
      os << (e.ok ? " -> pass" : " -> FAIL (" + e.error + ")");
    } else {
      os << " -> " << e.value;
    }
    if (opt.timing && e.kind == EntryKind::Step) os << " [" << ms(e.seconds) << "]";
    os << "\n";
  }
  os << "result: " << (r.passed() ? "pass" : "FAIL") << " (" << r.expectations() << " expectations, "
     << r.failures() << " failures)";
  if (opt.timing) os << " [" << ms(r.seconds) << "]";
  os << "\n";
  return os.str();
}

namespace {

nlohmann::json to_json(const Report& r, const RunOptions& opt) {
  nlohmann::json j;
  j["scenario"] = r.name;
  j["source"] = r.source;
  j["tier"] = r.tier;
  j["n"] = r.n;
  j["passed"] = r.passed();
  j["expectations"] = r.expectations();
  j["failures"] = r.failures();
  if (opt.timing) j["time_ms"] = static_cast<long long>(r.seconds * 1000 + 0.5);
  auto& es = j["entries"] = nlohmann::json::array();
  for (const auto& e : r.entries) {
    nlohmann::json x;
    x["kind"] = kind_name(e.kind);
    x["line"] = e.line;
    x["text"] = e.text;
    if (e.kind != EntryKind::Note) {
      x["ok"] = e.ok;
      x["value"] = e.value;
      if (!e.error.empty()) x["error"] = e.error;
    }
    if (opt.timing && e.kind == EntryKind::Step) x["time_ms"] = static_cast<long long>(e.seconds * 1000 + 0.5);
    es.push_back(std::move(x));
  }
  return j;
}

}  // namespace

std::string render_json(const Report& r, const RunOptions& opt) { return to_json(r, opt).dump(2) + "\n"; }

std::string render_json(const std::vector<Report>& rs, const RunOptions& opt) {
  nlohmann::json j;
  bool all = true;
  auto& arr = j["reports"] = nlohmann::json::array();
  for (const auto& r : rs) {
    arr.push_back(to_json(r, opt));
    all = all && r.passed();
  }
  j["passed"] = all;
  return j.dump(2) + "\n";
}

}  // namespace quatlat
