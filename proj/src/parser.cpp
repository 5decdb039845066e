#include "leibniz/parser.hpp"

#include <cctype>
#include <charconv>
#include <vector>

namespace leibniz {

std::string_view kind_name(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::UnexpectedToken: return "UnexpectedToken";
    case ParseErrorKind::UnbalancedDelimiter: return "UnbalancedDelimiter";
    case ParseErrorKind::UnknownFunction: return "UnknownFunction";
    case ParseErrorKind::MalformedDifferential: return "MalformedDifferential";
  }
  return "?";
}

Equation Statement::equation() const {
  if (!rhs) throw Error(ErrorCode::InvalidArgument, "expected an equation of the form lhs = rhs");
  return Equation(lhs, *rhs);
}

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Equals, End };

struct Token {
  Tok kind;
  SourceSpan span;
  std::string text;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    auto single = [&](Tok kind) {
      tokens.push_back({kind, {start, start + 1}, std::string(1, c)});
      ++i;
    };
    switch (c) {
      case '+': single(Tok::Plus); continue;
      case '-': single(Tok::Minus); continue;
      case '*': single(Tok::Star); continue;
      case '/': single(Tok::Slash); continue;
      case '^': single(Tok::Caret); continue;
      case '(': single(Tok::LParen); continue;
      case ')': single(Tok::RParen); continue;
      case '=': single(Tok::Equals); continue;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i < text.size() && text[i] == '.') {
        ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      }
      if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < text.size() && (text[j] == '+' || text[j] == '-')) ++j;
        if (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
          i = j;
          while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        }
      }
      tokens.push_back({Tok::Number, {start, i}, std::string(text.substr(start, i - start))});
      continue;
    }
    if (ident_start(c)) {
      while (i < text.size() && ident_char(text[i])) ++i;
      tokens.push_back({Tok::Ident, {start, i}, std::string(text.substr(start, i - start))});
      continue;
    }
    // UTF-8 epsilon and pi.
    if (text.substr(i, 2) == "\xCE\xB5") {
      tokens.push_back({Tok::Ident, {start, i + 2}, "eps"});
      i += 2;
      continue;
    }
    if (text.substr(i, 2) == "\xCF\x80") {
      tokens.push_back({Tok::Ident, {start, i + 2}, "pi"});
      i += 2;
      continue;
    }
    std::size_t len = 1;
    auto byte = static_cast<unsigned char>(c);
    if (byte >= 0xF0) {
      len = 4;
    } else if (byte >= 0xE0) {
      len = 3;
    } else if (byte >= 0xC0) {
      len = 2;
    }
    len = std::min(len, text.size() - i);
    throw ParseError(ParseErrorKind::UnexpectedToken, {start, start + len},
                     "unexpected character '" + std::string(text.substr(start, len)) + "'");
  }
  tokens.push_back({Tok::End, {text.size(), text.size()}, ""});
  return tokens;
}

std::optional<Function> lookup_function(std::string_view name) {
  if (name == "sin") return Function::Sin;
  if (name == "cos") return Function::Cos;
  if (name == "tan") return Function::Tan;
  if (name == "exp") return Function::Exp;
  if (name == "ln") return Function::Ln;
  if (name == "sqrt") return Function::Sqrt;
  if (name == "abs") return Function::Abs;
  return std::nullopt;
}

std::optional<NamedConstant> lookup_constant(std::string_view name) {
  if (name == "pi") return NamedConstant::Pi;
  if (name == "e") return NamedConstant::E;
  if (name == "C") return NamedConstant::C;
  if (name == "eps") return NamedConstant::Epsilon;
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(lex(text)) {}

  Statement statement() {
    Statement s{expr(), std::nullopt};
    if (peek().kind == Tok::Equals) {
      advance();
      s.rhs = expr();
    }
    finish();
    return s;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)]; }
  const Token& advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(ParseErrorKind kind, const Token& at, const std::string& message) const {
    throw ParseError(kind, at.span, message);
  }

  [[noreturn]] void unexpected(const Token& t) const {
    switch (t.kind) {
      case Tok::End: fail(ParseErrorKind::UnexpectedToken, t, "unexpected end of input");
      case Tok::RParen: fail(ParseErrorKind::UnbalancedDelimiter, t, "unmatched ')'");
      default: fail(ParseErrorKind::UnexpectedToken, t, "unexpected '" + t.text + "'");
    }
  }

  void finish() {
    const Token& t = peek();
    if (t.kind == Tok::End) return;
    reject_juxtaposition();
    unexpected(t);
  }

  void reject_juxtaposition() const {
    const Token& t = peek();
    if (t.kind == Tok::Number || t.kind == Tok::Ident || t.kind == Tok::LParen) {
      fail(ParseErrorKind::UnexpectedToken, t,
           "unexpected '" + t.text + "': implicit multiplication is not supported, write '*' explicitly");
    }
  }

  Expr expr() {
    std::vector<Expr> terms{term()};
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      bool minus = advance().kind == Tok::Minus;
      Expr t = term();
      terms.push_back(minus ? -t : t);
    }
    return terms.size() == 1 ? terms.front() : Expr::sum(std::move(terms));
  }

  Expr term() {
    std::vector<Expr> factors{unary()};
    reject_juxtaposition();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      bool divide = advance().kind == Tok::Slash;
      Expr f = unary();
      factors.push_back(divide ? pow(f, -1) : f);
      reject_juxtaposition();
    }
    return factors.size() == 1 ? factors.front() : Expr::product(std::move(factors));
  }

  Expr unary() {
    if (peek().kind == Tok::Minus) {
      advance();
      return -unary();
    }
    if (peek().kind == Tok::Plus) {
      advance();
      return unary();
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (peek().kind == Tok::Caret) {
      advance();
      return pow(base, unary());
    }
    return base;
  }

  Expr parenthesized() {
    const Token& open = peek();
    if (open.kind != Tok::LParen) unexpected(open);
    Token opener = advance();
    Expr inner = expr();
    if (peek().kind != Tok::RParen) {
      if (peek().kind == Tok::End || peek().kind == Tok::Equals) {
        fail(ParseErrorKind::UnbalancedDelimiter, opener, "'(' is never closed");
      }
      reject_juxtaposition();
      unexpected(peek());
    }
    advance();
    return inner;
  }

  static std::optional<int> parse_order(std::string_view digits) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
    return value;
  }

  static bool valid_symbol_name(std::string_view name) {
    return !name.empty() && ident_start(name.front()) && name.front() != 'd' && !is_reserved_name(name);
  }

  Expr differential_operator(const Token& head, int order) {
    if (order < 1) fail(ParseErrorKind::MalformedDifferential, head, "differential order must be at least 1");
    Expr operand = parenthesized();
    return Expr::differential_operator(order, operand);
  }

  // Identifiers beginning with 'd' always denote differentials: "dx", "d2x",
  // "d(...)", "d2(...)", "d^2x", "d^2(...)".
  Expr differential(const Token& head) {
    std::string_view text = head.text;
    if (text == "d") {
      if (peek().kind == Tok::LParen) return differential_operator(head, 1);
      if (peek().kind == Tok::Caret) {
        advance();
        const Token& n = advance();
        auto order = n.kind == Tok::Number ? parse_order(n.text) : std::nullopt;
        if (!order) fail(ParseErrorKind::MalformedDifferential, n, "expected an integer order after 'd^'");
        if (peek().kind == Tok::LParen) return differential_operator(head, *order);
        const Token& b = advance();
        if (b.kind != Tok::Ident || !valid_symbol_name(b.text)) {
          fail(ParseErrorKind::MalformedDifferential, b, "expected a symbol after 'd^" + n.text + "'");
        }
        if (*order < 1) fail(ParseErrorKind::MalformedDifferential, n, "differential order must be at least 1");
        return Expr::differential(b.text, *order);
      }
      fail(ParseErrorKind::MalformedDifferential, head, "'d' must be applied to a symbol or a parenthesized expression");
    }
    std::size_t i = 1;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    std::string_view digits = text.substr(1, i - 1);
    std::string_view base = text.substr(i);
    int order = 1;
    if (!digits.empty()) {
      auto parsed = parse_order(digits);
      if (!parsed || *parsed < 1) fail(ParseErrorKind::MalformedDifferential, head, "differential order must be at least 1");
      order = *parsed;
    }
    if (base.empty()) {
      if (peek().kind == Tok::LParen) return differential_operator(head, order);
      fail(ParseErrorKind::MalformedDifferential, head, "'" + head.text + "' must be followed by a symbol or '('");
    }
    if (!valid_symbol_name(base)) {
      fail(ParseErrorKind::MalformedDifferential, head, "'" + std::string(base) + "' is not a symbol that can carry a differential");
    }
    return Expr::differential(std::string(base), order);
  }

  Expr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        Token tok = advance();
        auto value = parse_decimal(tok.text);
        if (!value) fail(ParseErrorKind::UnexpectedToken, tok, "malformed number '" + tok.text + "'");
        return Expr::number(*value);
      }
      case Tok::LParen:
        return parenthesized();
      case Tok::Ident: {
        Token tok = advance();
        if (auto f = lookup_function(tok.text)) {
          if (peek().kind != Tok::LParen) {
            fail(ParseErrorKind::UnexpectedToken, tok, "function '" + tok.text + "' must be followed by '('");
          }
          return Expr::apply(*f, parenthesized());
        }
        if (auto c = lookup_constant(tok.text)) return Expr::constant(*c);
        if (tok.text.front() == 'd') return differential(tok);
        if (peek().kind == Tok::LParen) fail(ParseErrorKind::UnknownFunction, tok, "unknown function '" + tok.text + "'");
        return Expr::symbol(tok.text);
      }
      default:
        unexpected(t);
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Statement parse_statement(std::string_view text) { return Parser(text).statement(); }

Expr parse_expr(std::string_view text) {
  Statement s = parse_statement(text);
  if (s.rhs) throw Error(ErrorCode::InvalidArgument, "expected an expression, found an equation");
  return s.lhs;
}

Equation parse_equation(std::string_view text) { return parse_statement(text).equation(); }

std::string render_parse_error(const ParseError& error, std::string_view text) {
  const SourceSpan& span = error.span();
  std::string out = "error: " + std::string(error.what()) + "\n  " + std::string(text) + "\n  ";
  // Count UTF-8 code points so carets line up with what a terminal shows.
  auto columns = [&text](std::size_t from, std::size_t to) {
    std::size_t n = 0;
    for (std::size_t i = from; i < to && i < text.size(); ++i) {
      if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) ++n;
    }
    return n;
  };
  out.append(columns(0, span.start), ' ');
  out.append(std::max<std::size_t>(1, columns(span.start, span.end)), '^');
  out += "\n";
  return out;
}

}  // namespace leibniz
