// quatlat: command-line front end for the quatlat library.
//
// Exit codes: 0 success, 1 computation failure or failed expectation,
// 2 usage or schema error. QUATLAT_THREADS caps worker threads.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "quatlat/embed.hpp"
#include "quatlat/error.hpp"
#include "quatlat/expr.hpp"
#include "quatlat/normone.hpp"
#include "quatlat/orderio.hpp"
#include "quatlat/scenario.hpp"

#ifndef QUATLAT_SCENARIO_DIR
#define QUATLAT_SCENARIO_DIR "scenarios"
#endif

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace quatlat;

namespace {

unsigned env_threads() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* s = std::getenv("QUATLAT_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end != s && *end == '\0' && v > 0) return static_cast<unsigned>(std::min<long>(v, hw));
  }
  return hw;
}

struct Common {
  bool json = false;
};

std::string poly_str(const ZVec& coeffs) {
  std::string s;
  for (std::size_t e = coeffs.size(); e-- > 0;) {
    const mpz_class& a = coeffs[e];
    if (a == 0) continue;
    mpz_class m = abs(a);
    if (s.empty()) s += a < 0 ? "-" : "";
    else s += a < 0 ? " - " : " + ";
    if (m != 1 || e == 0) s += m.get_str();
    if (e > 0) s += (m != 1 ? "*" : std::string()) + "c" + (e > 1 ? "^" + std::to_string(e) : "");
  }
  return s.empty() ? "0" : s;
}

Algebra make_algebra(unsigned n, const std::string& a, const std::string& b) {
  Algebra std_alg = SymbolAlgebra::standard(n);
  if (a == "-1" && b == "-1") return std_alg;
  ExprContext ctx{std_alg, std::nullopt, {}};
  return SymbolAlgebra::build(std_alg->field(), parse_scalar(a, ctx), parse_scalar(b, ctx));
}

QuatOrder load_order(const std::string& path) {
  if (path == "-") return read_order(std::cin);
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::SchemaError, "cannot read " + path);
  return read_order(in);
}

void save_order(const QuatOrder& O, const std::string& out) {
  if (out.empty() || out == "-") {
    write_order(std::cout, O);
    return;
  }
  std::ofstream f(out);
  if (!f) throw Error(ErrorKind::SchemaError, "cannot write " + out);
  write_order(f, O);
}

json order_json(const QuatOrder& O) {
  return {{"n", O.alg->field()->n()},
          {"algebra", O.alg->describe()},
          {"rank", O.rank()},
          {"disc", O.disc_z.get_str()},
          {"maximal", is_maximal(O)},
          {"azumaya", is_azumaya(O)}};
}

json group_json(const UnitGroup& G) {
  const GroupInvariants& inv = G.invariants();
  json spec = json::object();
  for (const auto& [ord, cnt] : inv.order_spectrum) spec[std::to_string(ord)] = cnt;
  return {{"size", G.size()},
          {"tag", G.tag().to_string()},
          {"abelian", inv.abelian},
          {"cyclic", inv.cyclic},
          {"perfect", inv.perfect},
          {"center_size", inv.center_size},
          {"derived_size", inv.derived_size},
          {"derived_abelian", inv.derived_abelian},
          {"derived_cyclic", inv.derived_cyclic},
          {"max_element_order", inv.max_element_order},
          {"order_spectrum", spec}};
}

void print_kv(const json& j, const std::string& indent = "") {
  for (const auto& [k, v] : j.items()) {
    if (v.is_object()) {
      std::cout << indent << k << ":\n";
      print_kv(v, indent + "  ");
    } else if (v.is_string()) {
      std::cout << indent << k << ": " << v.get<std::string>() << "\n";
    } else {
      std::cout << indent << k << ": " << v.dump() << "\n";
    }
  }
}

void emit(const Common& c, const json& j) {
  if (c.json) std::cout << j.dump(2) << "\n";
  else print_kv(j);
}

std::vector<fs::path> scenario_files(const fs::path& dir) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) throw Error(ErrorKind::SchemaError, "no scenario directory " + dir.string());
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".scn") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

int run_reports(std::vector<Scenario> scs, const Common& c, RunOptions opt, unsigned workers) {
  if (scs.size() == 1) opt.threads = workers;
  std::sort(scs.begin(), scs.end(), [](const Scenario& a, const Scenario& b) { return a.name < b.name; });
  std::vector<Report> reps(scs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < scs.size();) reps[i] = run_scenario(scs[i], opt);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < std::min<std::size_t>(workers, scs.size()); ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  bool ok = true;
  for (const auto& r : reps) ok = ok && r.passed();
  if (c.json) {
    std::cout << (reps.size() == 1 ? render_json(reps[0], opt) : render_json(reps, opt));
  } else {
    for (const auto& r : reps) std::cout << render_text(r, opt) << "\n";
    std::size_t failed = 0;
    for (const auto& r : reps) failed += !r.passed();
    std::cout << reps.size() << " scenarios, " << failed << " failed\n";
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quatlat: quaternion orders over real cyclotomic fields"};
  app.require_subcommand(1);
  Common c;
  unsigned threads = env_threads();

  auto add_json = [&](CLI::App* sub) { sub->add_flag("--json", c.json, "Emit JSON"); };

  unsigned n = 0;
  std::string alg_a = "-1", alg_b = "-1";
  auto add_algebra = [&](CLI::App* sub) {
    sub->add_option("-a,--alg-a", alg_a, "Algebra parameter a")->capture_default_str();
    sub->add_option("-b,--alg-b", alg_b, "Algebra parameter b")->capture_default_str();
  };

  auto* field = app.add_subcommand("field", "Real cyclotomic fields")->require_subcommand(1);
  auto* field_info = field->add_subcommand("info", "Minimal polynomial, degree, discriminant, primes above 2");
  field_info->add_option("--n", n, "Conductor")->required()->check(CLI::Range(1u, 1024u));
  add_json(field_info);

  auto* algebra = app.add_subcommand("algebra", "Quaternion algebras")->require_subcommand(1);
  auto* algebra_ram = algebra->add_subcommand("ram", "Ramification above 2 and the discriminant target");
  algebra_ram->add_option("--n", n, "Conductor")->required()->check(CLI::Range(1u, 1024u));
  add_algebra(algebra_ram);
  add_json(algebra_ram);

  auto* order = app.add_subcommand("order", "Orders stored in order files")->require_subcommand(1);
  std::string in_path, out_path, gens, elem;
  unsigned to_n = 0;
  auto* o_build = order->add_subcommand("build", "Order generated by elements");
  o_build->add_option("--n", n, "Conductor")->required()->check(CLI::Range(1u, 1024u));
  o_build->add_option("--gens", gens, "Comma-separated generators")->required();
  add_algebra(o_build);
  auto* o_adjoin = order->add_subcommand("adjoin", "Adjoin an element");
  o_adjoin->add_option("--elem", elem, "Element expression")->required();
  auto* o_max = order->add_subcommand("maximize", "A maximal order containing the input");
  auto* o_extend = order->add_subcommand("extend", "Extend scalars to a larger field");
  o_extend->add_option("--to", to_n, "Target conductor (a multiple of n)")->required();
  auto* o_normone = order->add_subcommand("normone", "Norm-one group size and tag");
  bool list_elems = false;
  o_normone->add_flag("--list", list_elems, "Print the elements");
  auto* o_identify = order->add_subcommand("identify", "Norm-one group invariants and recognition");
  auto* o_info = order->add_subcommand("info", "Rank, discriminant and maximality");
  for (auto* sub : {o_adjoin, o_max, o_extend, o_normone, o_identify, o_info})
    sub->add_option("file", in_path, "Order file ('-' for stdin)")->required();
  for (auto* sub : {o_build, o_adjoin, o_max, o_extend}) sub->add_option("-o,--output", out_path, "Output file");
  for (auto* sub : {o_normone, o_identify, o_info}) add_json(sub);

  bool no_timing = false;
  auto* scenario = app.add_subcommand("scenario", "Scenario files")->require_subcommand(1);
  auto* sc_run = scenario->add_subcommand("run", "Replay scenario files");
  std::vector<std::string> sc_paths;
  sc_run->add_option("paths", sc_paths, "Scenario files")->required()->check(CLI::ExistingFile);
  sc_run->add_flag("--no-timing", no_timing, "Omit timing fields");
  add_json(sc_run);

  auto* corpus = app.add_subcommand("corpus", "The bundled scenario corpus")->require_subcommand(1);
  auto* co_run = corpus->add_subcommand("run", "Replay every bundled scenario");
  std::string dir = QUATLAT_SCENARIO_DIR;
  std::vector<std::string> tiers{"quick", "slow"};
  bool with_stretch = false;
  co_run->add_option("--dir", dir, "Scenario directory")->capture_default_str();
  co_run->add_option("--tier", tiers, "Tiers to run")->check(CLI::IsMember({"quick", "slow", "stretch"}));
  co_run->add_flag("--include-stretch", with_stretch, "Also run stretch scenarios");
  co_run->add_flag("--no-timing", no_timing, "Omit timing fields");
  add_json(co_run);

  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (field_info->parsed()) {
      Field f = RealCycloField::get(n);
      json primes = json::array();
      for (auto [e, fd] : factor_prime(f, 2)) primes.push_back({{"e", e}, {"f", fd}});
      emit(c, {{"n", n},
               {"degree", f->degree()},
               {"minpoly", poly_str(f->minpoly())},
               {"disc", f->disc().get_str()},
               {"primes_above_2", primes}});
    } else if (algebra_ram->parsed()) {
      Algebra A = make_algebra(n, alg_a, alg_b);
      RamificationData rd = ramification(A);
      auto plist = [](const std::vector<PrimeAbove2>& ps) {
        json a = json::array();
        for (const auto& p : ps) a.push_back({{"e", p.e}, {"f", p.f}, {"local_degree", p.local_degree}});
        return a;
      };
      json j{{"n", n},
             {"algebra", A->describe()},
             {"definite", A->definite()},
             {"primes_above_2", plist(rd.primes)},
             {"ramified_above_2", plist(rd.ramified)},
             {"finite_ramification", !rd.ramified.empty()},
             {"disc_target", rd.disc_target.get_str()}};
      if (c.json) {
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "algebra: " << A->describe() << "\n";
        std::cout << "definite: " << (A->definite() ? "true" : "false") << "\n";
        for (const auto& p : rd.primes)
          std::cout << "prime above 2: e=" << p.e << " f=" << p.f << " local degree " << p.local_degree
                    << (p.local_degree % 2 ? " (ramified)" : "") << "\n";
        std::cout << (rd.ramified.empty() ? "no finite ramification\n"
                                          : std::to_string(rd.ramified.size()) + " ramified prime(s) above 2\n");
        std::cout << "disc target: " << rd.disc_target.get_str() << "\n";
      }
    } else if (o_build->parsed()) {
      Algebra A = make_algebra(n, alg_a, alg_b);
      save_order(order_closure(A, parse_element_list(gens, ExprContext{A, std::nullopt, {}})), out_path);
    } else if (o_adjoin->parsed()) {
      QuatOrder O = load_order(in_path);
      save_order(adjoin(O, parse_element(elem, ExprContext{O.alg, std::nullopt, {}})), out_path);
    } else if (o_max->parsed()) {
      save_order(maximize(load_order(in_path)), out_path);
    } else if (o_extend->parsed()) {
      save_order(extend_scalars(load_order(in_path), to_n), out_path);
    } else if (o_normone->parsed()) {
      UnitGroup G = norm_one_group(load_order(in_path), threads);
      json j{{"size", G.size()}, {"tag", G.tag().to_string()}};
      if (list_elems) {
        json el = json::array();
        for (const auto& x : G.elements()) el.push_back(x.to_string());
        j["elements"] = el;
      }
      if (c.json) {
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "size: " << G.size() << "\ntag: " << G.tag().to_string() << "\n";
        if (list_elems)
          for (const auto& x : G.elements()) std::cout << "  " << x.to_string() << "\n";
      }
    } else if (o_identify->parsed()) {
      UnitGroup G = norm_one_group(load_order(in_path), threads);
      json j = group_json(G);
      j["full"] = is_full(G);
      emit(c, j);
    } else if (o_info->parsed()) {
      emit(c, order_json(load_order(in_path)));
    } else if (sc_run->parsed()) {
      std::vector<Scenario> scs;
      for (const auto& p : sc_paths) scs.push_back(load_scenario(p));
      return run_reports(std::move(scs), c, {1, !no_timing}, threads);
    } else if (co_run->parsed()) {
      if (with_stretch) tiers.push_back("stretch");
      std::vector<Scenario> scs;
      for (const auto& p : scenario_files(dir)) {
        Scenario s = load_scenario(p);
        if (std::find(tiers.begin(), tiers.end(), s.tier) != tiers.end()) scs.push_back(std::move(s));
      }
      return run_reports(std::move(scs), c, {1, !no_timing}, threads);
    }
  } catch (const Error& e) {
    const bool usage = e.kind() == ErrorKind::SchemaError || e.kind() == ErrorKind::SyntaxError ||
                       e.kind() == ErrorKind::UnknownSymbol;
    if (c.json) {
      json err{{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
      if (auto* pe = dynamic_cast<const ParseError*>(&e)) err["span"] = {pe->begin(), pe->end()};
      std::cout << json{{"error", err}}.dump(2) << "\n";
    } else {
      std::cerr << "error: " << e.what() << "\n";
    }
    return usage ? 2 : 1;
  } catch (const std::exception& e) {
    if (c.json) std::cout << json{{"error", {{"kind", "Internal"}, {"message", e.what()}}}}.dump(2) << "\n";
    else std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
