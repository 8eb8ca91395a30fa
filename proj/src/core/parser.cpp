#include "core/parser.hpp"

#include <cctype>
#include <utility>

namespace oscdecay {

namespace {

constexpr unsigned kMaxExponent = 4096;

enum class TokKind { plus, minus, star, slash, caret, lparen, rparen, number, ident, end };

struct Token {
  TokKind kind;
  std::size_t begin;
  std::size_t end;
  std::string_view text;
};

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_letter(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    std::size_t begin = i;
    auto single = [&](TokKind k) {
      out.push_back({k, begin, begin + 1, text.substr(begin, 1)});
      ++i;
    };
    switch (c) {
      case '+': single(TokKind::plus); continue;
      case '-': single(TokKind::minus); continue;
      case '*': single(TokKind::star); continue;
      case '/': single(TokKind::slash); continue;
      case '^': single(TokKind::caret); continue;
      case '(': single(TokKind::lparen); continue;
      case ')': single(TokKind::rparen); continue;
      default: break;
    }
    if (is_digit(c)) {
      while (i < text.size() && is_digit(text[i])) ++i;
      if (i < text.size() && text[i] == '.') {
        ++i;
        if (i >= text.size() || !is_digit(text[i])) {
          throw ParseError("expected digits after decimal point", begin, i,
                           {"digit"});
        }
        while (i < text.size() && is_digit(text[i])) ++i;
      }
      out.push_back({TokKind::number, begin, i, text.substr(begin, i - begin)});
      continue;
    }
    if (is_letter(c)) {
      while (i < text.size() && (is_letter(text[i]) || is_digit(text[i]))) ++i;
      out.push_back({TokKind::ident, begin, i, text.substr(begin, i - begin)});
      continue;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", begin,
                     begin + 1, {"number", "variable", "'('"});
  }
  out.push_back({TokKind::end, text.size(), text.size(), {}});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const ParseOptions& opts)
      : tokens_(std::move(tokens)), opts_(opts) {}

  Polynomial parse() {
    Polynomial p = parse_expr();
    if (peek().kind != TokKind::end) {
      fail(peek(), "unexpected input after expression",
           {"'+'", "'-'", "end of input"});
    }
    return p;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }
  bool match(TokKind k) {
    if (peek().kind == k) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const Token& tok, std::string message,
                         std::vector<std::string> expected) {
    if (tok.kind == TokKind::end) message += " (at end of input)";
    throw ParseError(std::move(message), tok.begin, tok.end,
                     std::move(expected));
  }

  Polynomial parse_expr() {
    bool negate = false;
    if (match(TokKind::minus)) {
      negate = true;
    } else {
      match(TokKind::plus);
    }
    Polynomial acc = parse_term();
    if (negate) acc = -acc;
    while (true) {
      if (match(TokKind::plus)) {
        acc = acc + parse_term();
      } else if (match(TokKind::minus)) {
        acc = acc - parse_term();
      } else {
        return acc;
      }
    }
  }

  Polynomial parse_term() {
    Polynomial acc = parse_factor();
    while (match(TokKind::star)) acc = acc * parse_factor();
    return acc;
  }

  Polynomial parse_factor() {
    Polynomial base = parse_base();
    if (match(TokKind::caret)) {
      unsigned e = parse_exponent();
      return base.pow(e);
    }
    return base;
  }

  unsigned parse_exponent() {
    const Token& tok = peek();
    if (tok.kind != TokKind::number) {
      fail(tok, "expected integer exponent after '^'", {"integer"});
    }
    if (tok.text.find('.') != std::string_view::npos) {
      fail(tok, "exponent must be an integer", {"integer"});
    }
    advance();
    unsigned value = 0;
    for (char c : tok.text) {
      value = value * 10 + static_cast<unsigned>(c - '0');
      if (value > kMaxExponent) {
        throw ParseError("exponent exceeds " + std::to_string(kMaxExponent),
                         tok.begin, tok.end, {"integer"});
      }
    }
    return value;
  }

  Polynomial parse_base() {
    const Token& tok = peek();
    switch (tok.kind) {
      case TokKind::number:
        return parse_rational();
      case TokKind::ident:
        return parse_variable();
      case TokKind::lparen: {
        advance();
        Polynomial inner = parse_expr();
        if (!match(TokKind::rparen)) {
          fail(peek(), "expected ')'", {"')'", "'+'", "'-'", "'*'"});
        }
        return inner;
      }
      default:
        fail(tok, "expected a number, variable, or parenthesized expression",
             {"number", "variable", "'('"});
    }
  }

  Polynomial parse_rational() {
    const Token& tok = advance();
    if (tok.text.find('.') != std::string_view::npos) {
      return Polynomial::constant(
          opts_.dim, rational_from_decimal(std::string(tok.text)));
    }
    // Base 10 explicitly: the default base 0 would read leading zeros as
    // octal and reject digits 8 and 9.
    Rational value{mpz_class(std::string(tok.text), 10), 1};
    if (peek().kind == TokKind::slash) {
      advance();
      const Token& den = peek();
      if (den.kind != TokKind::number ||
          den.text.find('.') != std::string_view::npos) {
        fail(den, "expected integer denominator after '/'", {"integer"});
      }
      advance();
      mpz_class d(std::string(den.text), 10);
      if (d == 0) {
        throw ParseError("zero denominator in rational literal", den.begin,
                         den.end, {"nonzero integer"});
      }
      value /= Rational(d, 1);
      value.canonicalize();
    }
    return Polynomial::constant(opts_.dim, value);
  }

  Polynomial parse_variable() {
    const Token& tok = advance();
    std::string_view name = tok.text;
    char letter = name[0];
    VarRole role;
    if (letter == 'x') {
      role = VarRole::x;
    } else if (letter == 'y') {
      role = VarRole::y;
    } else if (letter == 't') {
      role = VarRole::t;
    } else {
      fail(tok, "unknown variable '" + std::string(name) + "'", {"variable"});
    }
    if (role == VarRole::t && !opts_.allow_tau) {
      fail(tok,
           "shift variable '" + std::string(name) + "' is not allowed here",
           {"variable"});
    }
    if (name.size() < 2) {
      fail(tok, "variable '" + std::string(name) + "' is missing an index",
           {"variable"});
    }
    long index = 0;
    for (std::size_t i = 1; i < name.size(); ++i) {
      if (!is_digit(name[i])) {
        fail(tok, "unknown variable '" + std::string(name) + "'",
             {"variable"});
      }
      index = index * 10 + (name[i] - '0');
      if (index > 64) break;  // already out of any legal range
    }
    if (index < 1 || index > opts_.dim) {
      fail(tok,
           "variable '" + std::string(name) + "' is out of range for dimension " +
               std::to_string(opts_.dim),
           {"variable"});
    }
    return Polynomial::variable(opts_.dim,
                                {role, static_cast<int>(index)});
  }

  std::vector<Token> tokens_;
  ParseOptions opts_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, const ParseOptions& opts) {
  // Validates the dimension guard up front (1..6).
  Polynomial probe(opts.dim);
  (void)probe;
  Parser parser(tokenize(text), opts);
  return parser.parse();
}

}  // namespace oscdecay
