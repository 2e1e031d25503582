#include "wittkit/polyparse.hpp"

#include <cctype>

#include "wittkit/errors.hpp"

namespace wittkit {

namespace {

class Parser {
 public:
  Parser(const std::string& s, const AlgebraPtr& alg, int line, int column)
      : s_(s), alg_(alg), line_(line), column_(column) {}

  PolyElement parse() {
    auto e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    int line = line_, col = column_;
    for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i) {
      if (s_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SyntaxError(what, line, col);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Integer integer() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return Integer(s_.substr(start, pos_ - start));
  }

  std::string identifier() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  PolyElement expr() {
    PolyElement acc = alg_->zero();
    bool first = true;
    for (;;) {
      skip();
      bool neg = false;
      if (accept('-')) neg = true;
      else if (!first && !accept('+')) break;
      else if (first) accept('+');
      PolyElement t = term();
      acc = neg ? acc - t : acc + t;
      first = false;
      skip();
      if (pos_ >= s_.size() || (s_[pos_] != '+' && s_[pos_] != '-')) break;
    }
    return acc;
  }

  PolyElement term() {
    PolyElement acc = power();
    while (accept('*')) acc = acc * power();
    return acc;
  }

  // Exponent as num / p^k.
  std::pair<Integer, int> exponent() {
    if (!accept('(')) return {integer(), 0};
    Integer num = integer();
    int k = 0;
    if (accept('/')) {
      skip();
      if (pos_ < s_.size() && s_[pos_] == 'p') {
        ++pos_;
        k = 1;
        if (accept('^')) k = static_cast<int>(integer().get_si());
      } else {
        Integer den = integer();
        while (den > 1 && den % alg_->p() == 0) {
          den /= alg_->p();
          ++k;
        }
        if (den != 1) fail("exponent denominator is not a power of p");
      }
    }
    expect(')');
    return {num, k};
  }

  PolyElement power() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (accept('(')) {
      PolyElement inner = expr();
      expect(')');
      return raise(inner);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return raise(alg_->constant(integer()));
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t at = pos_;
      const std::string name = identifier();
      if (!alg_->var_index(name)) {
        if (name == "p") return raise(alg_->constant(alg_->p()));
        pos_ = at;
        fail("unknown variable '" + name + "'");
      }
      if (!accept('^')) return alg_->var(name);
      auto [num, k] = exponent();
      if (num > Integer(1) << 30) fail("exponent too large");
      if (k > alg_->level()) fail("exponent needs level " + std::to_string(k) + " but the algebra has level " +
                                  std::to_string(alg_->level()));
      return alg_->var_power(name, num.get_si(), k);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  PolyElement raise(const PolyElement& base) {
    if (!accept('^')) return base;
    auto [num, k] = exponent();
    if (k != 0) fail("fractional exponents apply to variables only");
    if (num > 4096) fail("exponent too large");
    return base.pow(num.get_ui());
  }

  const std::string& s_;
  AlgebraPtr alg_;
  int line_;
  int column_;
  std::size_t pos_ = 0;
};

}  // namespace

PolyElement parse_polynomial(const std::string& text, const AlgebraPtr& alg, int line, int column) {
  return Parser(text, alg, line, column).parse();
}

}  // namespace wittkit
