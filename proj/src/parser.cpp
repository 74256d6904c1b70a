#include "chaindiff/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <optional>
#include <vector>

namespace chaindiff {

namespace {

enum class Tok {
  Int,
  Float,
  Ident,
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Comma,
  Plus,
  Minus,
  Star,
  Slash,
  At,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  size_t i = 0;
  auto push = [&](Tok k, std::string s) {
    out.push_back({k, std::move(s), line, col});
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++col;
      ++i;
      continue;
    }
    int start_col = col;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      bool is_float = false;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
        ++j;
      if (j < text.size() && text[j] == '.') {
        is_float = true;
        ++j;
        while (j < text.size() &&
               std::isdigit(static_cast<unsigned char>(text[j])))
          ++j;
      }
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E') &&
          j + 1 < text.size() &&
          (std::isdigit(static_cast<unsigned char>(text[j + 1])) ||
           ((text[j + 1] == '+' || text[j + 1] == '-') && j + 2 < text.size() &&
            std::isdigit(static_cast<unsigned char>(text[j + 2]))))) {
        is_float = true;
        ++j;
        if (text[j] == '+' || text[j] == '-') ++j;
        while (j < text.size() &&
               std::isdigit(static_cast<unsigned char>(text[j])))
          ++j;
      }
      out.push_back({is_float ? Tok::Float : Tok::Int,
                     text.substr(i, j - i), line, start_col});
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) ||
              text[j] == '_'))
        ++j;
      out.push_back({Tok::Ident, text.substr(i, j - i), line, start_col});
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    Tok k;
    switch (c) {
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '[': k = Tok::LBracket; break;
      case ']': k = Tok::RBracket; break;
      case '{': k = Tok::LBrace; break;
      case '}': k = Tok::RBrace; break;
      case ',': k = Tok::Comma; break;
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '@': k = Tok::At; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line,
                         col);
    }
    push(k, std::string(1, c));
    ++col;
    ++i;
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

bool direction_name(const std::string& s, int& index) {
  if (s.size() < 2 || s[0] != 'e') return false;
  for (size_t i = 1; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  index = std::atoi(s.c_str() + 1);
  return true;
}

// D-construct spellings: "D", "D_" (braced slot list follows), "D_<digits>"
bool diff_head(const std::string& s, std::optional<int>& slot, bool& braced) {
  if (s == "D") {
    braced = false;
    slot.reset();
    return true;
  }
  if (s == "D_") {
    braced = true;
    slot.reset();
    return true;
  }
  if (s.size() > 2 && s.rfind("D_", 0) == 0) {
    for (size_t i = 2; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    slot = std::atoi(s.c_str() + 2);
    braced = false;
    return true;
  }
  return false;
}

// Identifier resolution context
enum class Mode { Function, Point };

class Parser {
 public:
  explicit Parser(std::string text) : toks_(lex(text)) {}

  Expr run() {
    Expr e = expr(Mode::Function);
    expect(Tok::End, "end of input");
    return e;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(int k = 1) const {
    size_t i = pos_ + k;
    return toks_[std::min(i, toks_.size() - 1)];
  }
  Token advance() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, cur().line, cur().col);
  }

  Token expect(Tok k, const std::string& what) {
    if (cur().kind != k)
      fail("expected " + what + ", found '" +
           (cur().kind == Tok::End ? "end of input" : cur().text) + "'");
    return advance();
  }

  Expr expr(Mode mode) {
    Expr acc = term(mode);
    while (cur().kind == Tok::Plus || cur().kind == Tok::Minus) {
      bool minus = advance().kind == Tok::Minus;
      Expr rhs = term(mode);
      if (minus) rhs = Expr::product({Expr::scalar(std::int64_t{-1}), rhs});
      acc = Expr::sum({acc, rhs});
    }
    return acc;
  }

  Expr term(Mode mode) {
    Expr acc = factor(mode);
    while (cur().kind == Tok::Star) {
      advance();
      acc = Expr::product({acc, factor(mode)});
    }
    return acc;
  }

  Expr factor(Mode mode) {
    std::vector<Expr> chain = {unary(mode)};
    while (cur().kind == Tok::Ident && cur().text == "o") {
      advance();
      chain.push_back(unary(Mode::Function));
    }
    Expr acc = chain.back();
    for (size_t i = chain.size() - 1; i-- > 0;)
      acc = Expr::compose(chain[i], acc);
    return acc;
  }

  Expr unary(Mode mode) {
    if (cur().kind == Tok::Minus) {
      advance();
      Expr v = unary(mode);
      if (v.kind() == ExprKind::Scalar) return Expr::scalar(-v.scalar_value());
      return Expr::product({Expr::scalar(std::int64_t{-1}), v});
    }
    return postfix(mode);
  }

  Expr postfix(Mode mode) {
    Expr e = primary(mode);
    while (cur().kind == Tok::LParen) {
      e = Expr::apply(e, call_args());
    }
    return e;
  }

  std::vector<Expr> call_args() {
    expect(Tok::LParen, "'('");
    std::vector<Expr> args = {expr(Mode::Point)};
    while (cur().kind == Tok::Comma) {
      advance();
      args.push_back(expr(Mode::Point));
    }
    expect(Tok::RParen, "')'");
    return args;
  }

  Expr number() {
    Token t = advance();
    if (t.kind == Tok::Int) {
      if (cur().kind == Tok::Slash && peek().kind == Tok::Int) {
        advance();
        Token den = advance();
        return Expr::scalar(Rational::ratio(std::atoll(t.text.c_str()),
                                            std::atoll(den.text.c_str())));
      }
      return Expr::scalar(
          static_cast<std::int64_t>(std::atoll(t.text.c_str())));
    }
    return Expr::scalar(std::strtod(t.text.c_str(), nullptr));
  }

  Expr diff_construct(std::optional<int> single_slot, bool braced) {
    std::vector<int> slots;
    if (single_slot) slots.push_back(*single_slot);
    if (braced) {
      expect(Tok::LBrace, "'{'");
      slots.push_back(std::atoi(expect(Tok::Int, "slot number").text.c_str()));
      while (cur().kind == Tok::Comma) {
        advance();
        slots.push_back(std::atoi(expect(Tok::Int, "slot number").text.c_str()));
      }
      expect(Tok::RBrace, "'}'");
    }
    expect(Tok::LBracket, "'['");
    std::vector<Expr> dirs;
    auto one_dir = [&]() {
      // a bare integer literal is a direction index; 0 is the zero direction
      if (cur().kind == Tok::Int &&
          !(peek().kind == Tok::Slash && peek(2).kind == Tok::Int)) {
        int idx = std::atoi(advance().text.c_str());
        return idx == 0 ? Expr::scalar(std::int64_t{0})
                        : Expr::direction_var(idx);
      }
      return expr(Mode::Point);
    };
    dirs.push_back(one_dir());
    while (cur().kind == Tok::Comma) {
      advance();
      dirs.push_back(one_dir());
    }
    expect(Tok::RBracket, "']'");
    Expr target = postfix(Mode::Function);
    expect(Tok::At, "'@'");
    Expr base = postfix(Mode::Point);
    if (target.kind() == ExprKind::FuncSymbol && target.arity() == 1 &&
        base.kind() == ExprKind::Tuple)
      target = Expr::func_symbol(target.name(),
                                 static_cast<int>(base.children().size()));
    if (!slots.empty() && slots.size() != dirs.size())
      fail("slot list and direction list differ in length");
    return Expr::diff(target, base, std::move(dirs), std::move(slots));
  }

  Expr primary(Mode mode) {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::Int:
      case Tok::Float:
        return number();
      case Tok::LParen: {
        advance();
        std::vector<Expr> elems = {expr(mode)};
        while (cur().kind == Tok::Comma) {
          advance();
          elems.push_back(expr(Mode::Point));
        }
        expect(Tok::RParen, "')'");
        if (elems.size() == 1) return elems[0];
        if (mode == Mode::Function)
          fail("tuple in function position");
        return Expr::tuple(std::move(elems));
      }
      case Tok::Ident: {
        std::optional<int> slot;
        bool braced = false;
        int dir_index = 0;
        if (t.text == "exp") {
          advance();
          return Expr::exp_fn();
        }
        if (t.text == "pow") {
          advance();
          expect(Tok::LBracket, "'['");
          Token k = expect(Tok::Int, "positive integer exponent");
          int exponent = std::atoi(k.text.c_str());
          if (exponent < 1)
            throw ParseError("power exponent must be a positive integer",
                             k.line, k.col);
          expect(Tok::RBracket, "']'");
          return Expr::power(exponent);
        }
        if (t.text == "lin") {
          advance();
          expect(Tok::LBracket, "'['");
          Token name = expect(Tok::Ident, "linear symbol name");
          expect(Tok::RBracket, "']'");
          return Expr::linear(name.text);
        }
        if (diff_head(t.text, slot, braced)) {
          advance();
          return diff_construct(slot, braced);
        }
        if (direction_name(t.text, dir_index)) {
          advance();
          if (dir_index < 1)
            throw ParseError("direction indices start at 1", t.line, t.col);
          return Expr::direction_var(dir_index);
        }
        if (t.text == "o") fail("'o' is the composition operator");
        advance();
        if (cur().kind == Tok::LParen) {
          std::vector<Expr> args = call_args();
          Expr fn = Expr::func_symbol(t.text, static_cast<int>(args.size()));
          return Expr::apply(std::move(fn), std::move(args));
        }
        // x, y, z always name points, so bare function symbols stay
        // distinguishable in printed output.
        bool point_name = t.text == "x" || t.text == "y" || t.text == "z";
        if (mode == Mode::Function && !point_name)
          return Expr::func_symbol(t.text);
        return Expr::point_var(t.text);
      }
      default:
        fail("expected an expression");
    }
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

}  // namespace

Expr parse(const std::string& text) {
  Parser p(text);
  return canonicalize(p.run());
}

}  // namespace chaindiff
