#include "quatlat/expr.hpp"

#include <cctype>

#include "quatlat/error.hpp"

namespace quatlat {

namespace {

enum class Tok { Num, Name, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::size_t begin;
  std::size_t end;
  std::string text;
};

std::vector<Token> tokenize(std::string_view s, std::size_t base) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char ch = static_cast<unsigned char>(s[i]);
    if (std::isspace(ch)) {
      ++i;
      continue;
    }
    const std::size_t b = i;
    if (std::isdigit(ch)) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({Tok::Num, base + b, base + i, std::string(s.substr(b, i - b))});
      continue;
    }
    if (std::isalpha(ch) || ch == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::Name, base + b, base + i, std::string(s.substr(b, i - b))});
      continue;
    }
    if (s.substr(i, 3) == "\xE2\x88\x92") {
      out.push_back({Tok::Minus, base + b, base + b + 3, "-"});
      i += 3;
      continue;
    }
    Tok k;
    switch (ch) {
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '^': k = Tok::Caret; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      default: {
        std::size_t e = i + 1;
        while (e < s.size() && (static_cast<unsigned char>(s[e]) & 0xC0) == 0x80) ++e;
        throw ParseError(ErrorKind::SyntaxError, "unexpected character '" + std::string(s.substr(i, e - i)) + "'",
                         base + b, base + e);
      }
    }
    out.push_back({k, base + b, base + b + 1, std::string(1, static_cast<char>(ch))});
    ++i;
  }
  out.push_back({Tok::End, base + s.size(), base + s.size(), ""});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const ExprContext& ctx) : toks_(std::move(toks)), ctx_(ctx) {}

  Quaternion parse() {
    Quaternion v = expr();
    if (peek().kind != Tok::End) fail(peek(), "unexpected '" + peek().text + "'");
    return v;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(ErrorKind::SyntaxError, t.kind == Tok::End ? msg + " (end of input)" : msg, t.begin, t.end);
  }

  Quaternion scalar(const mpq_class& q) const { return Quaternion(ctx_.alg, FieldElem(ctx_.alg->field(), q)); }

  Quaternion expr() {
    Quaternion acc = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const bool minus = take().kind == Tok::Minus;
      Quaternion t = term();
      if (minus) acc -= t;
      else acc += t;
    }
    return acc;
  }

  Quaternion term() {
    Quaternion acc = factor();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const bool div = take().kind == Tok::Slash;
      const std::size_t b = peek().begin;
      Quaternion f = factor();
      if (!div) {
        acc = acc * f;
        continue;
      }
      if (f.is_zero()) throw ParseError(ErrorKind::DivisionByZero, "division by zero", b, toks_[pos_ - 1].end);
      acc = acc * f.inverse();
    }
    return acc;
  }

  Quaternion factor() {
    if (peek().kind == Tok::Minus) {
      take();
      return -factor();
    }
    if (peek().kind == Tok::Plus) {
      take();
      return factor();
    }
    const std::size_t b = peek().begin;
    Quaternion base = atom();
    if (peek().kind != Tok::Caret) return base;
    take();
    bool neg = false;
    if (peek().kind == Tok::Minus) {
      take();
      neg = true;
    }
    const Token& e = peek();
    if (e.kind != Tok::Num) fail(e, "expected an integer exponent");
    take();
    if (e.text.size() > 6) throw ParseError(ErrorKind::SyntaxError, "exponent too large", e.begin, e.end);
    long k = std::stol(e.text);
    if (neg) k = -k;
    if (k < 0 && base.is_zero()) throw ParseError(ErrorKind::DivisionByZero, "negative power of zero", b, e.end);
    return base.pow(k);
  }

  Quaternion atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Num:
        take();
        return scalar(mpq_class(mpz_class(t.text)));
      case Tok::LParen: {
        take();
        Quaternion v = expr();
        if (peek().kind != Tok::RParen) fail(peek(), "expected ')'");
        take();
        return v;
      }
      case Tok::Name:
        take();
        return symbol(t);
      default:
        fail(t, t.kind == Tok::End ? "expected an operand" : "unexpected '" + t.text + "'");
    }
  }

  Quaternion symbol(const Token& t) const {
    const Algebra& A = ctx_.alg;
    if (auto it = ctx_.names.find(t.text); it != ctx_.names.end()) return it->second;
    if (t.text == "c") return Quaternion(A, FieldElem::gen(A->field()));
    if (t.text == "i") return Quaternion::unit(A, 1);
    if (t.text == "j") return Quaternion::unit(A, 2);
    if (t.text == "k") return Quaternion::unit(A, 3);
    if (t.text == "d") {
      if (!ctx_.d) throw ParseError(ErrorKind::UnknownSymbol, "d needs a declared embedding", t.begin, t.end);
      return *ctx_.d;
    }
    if (t.text == "sqrt2" || t.text == "sqrt5") {
      try {
        return Quaternion(A, sqrt_small(A->field(), t.text == "sqrt2" ? 2 : 5));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotPresent) throw;
        throw ParseError(ErrorKind::UnknownSymbol,
                         t.text + " is not in the field for n=" + std::to_string(A->field()->n()), t.begin, t.end);
      }
    }
    throw ParseError(ErrorKind::UnknownSymbol, "unknown symbol '" + t.text + "'", t.begin, t.end);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const ExprContext& ctx_;
};

Quaternion parse_at(std::string_view src, std::size_t base, const ExprContext& ctx) {
  return Parser(tokenize(src, base), ctx).parse();
}

}  // namespace

std::vector<std::string_view> split_top_level(std::string_view src) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i] == '(') ++depth;
    else if (src[i] == ')') --depth;
    else if (src[i] == ',' && depth == 0) {
      out.push_back(src.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(src.substr(start));
  return out;
}

Quaternion parse_element(std::string_view src, const ExprContext& ctx) { return parse_at(src, 0, ctx); }

FieldElem parse_scalar(std::string_view src, const ExprContext& ctx) {
  Quaternion q = parse_element(src, ctx);
  for (int m = 1; m < 4; ++m)
    if (!q[m].is_zero()) throw ParseError(ErrorKind::SyntaxError, "expected a central element", 0, src.size());
  return q[0];
}

std::vector<Quaternion> parse_element_list(std::string_view src, const ExprContext& ctx) {
  std::vector<Quaternion> out;
  for (std::string_view piece : split_top_level(src)) {
    const std::size_t base = static_cast<std::size_t>(piece.data() - src.data());
    out.push_back(parse_at(piece, base, ctx));
  }
  return out;
}

}  // namespace quatlat
