#include "aat/parse.hpp"

#include <cctype>

#include "aat/errors.hpp"

namespace aat {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const RingPtr& ring, std::size_t line, std::size_t col0)
      : s_(text), ring_(ring), line_(line), col0_(col0) {}

  MPoly parse() {
    skip_ws();
    if (pos_ == s_.size()) fail("empty expression");
    MPoly p = expr();
    skip_ws();
    if (pos_ != s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }
  [[noreturn]] void fail_at(std::size_t pos, const std::string& msg) const {
    throw ParseError(msg, line_, col0_ + pos);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  MPoly expr() {
    MPoly acc = term();
    while (true) {
      if (accept('+'))
        acc += term();
      else if (accept('-'))
        acc -= term();
      else
        return acc;
    }
  }

  MPoly term() {
    MPoly acc = unary();
    while (accept('*')) acc *= unary();
    return acc;
  }

  MPoly unary() {
    if (accept('-')) return -unary();
    return power();
  }

  MPoly power() {
    MPoly base = atom();
    if (!accept('^')) return base;
    skip_ws();
    std::size_t at = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+'))
      fail_at(at, "exponent must be a nonnegative integer literal");
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
      fail_at(at, "expected integer exponent after '^'");
    std::string digits = read_digits();
    if (pos_ < s_.size() && (s_[pos_] == '/' || s_[pos_] == '.'))
      fail_at(at, "exponent must be a nonnegative integer literal");
    if (digits.size() > 3 || std::stoi(digits) > 255) fail_at(at, "exponent too large (limit 255)");
    return pow(base, std::stol(digits));
  }

  std::string read_digits() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  MPoly atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      MPoly inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t at = pos_;
      Integer num(read_digits());
      Integer den = 1;
      if (pos_ < s_.size() && s_[pos_] == '/') {
        ++pos_;
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
          fail("expected integer denominator after '/'");
        den = Integer(read_digits());
        if (den == 0) fail_at(at, "zero denominator");
      }
      if (pos_ < s_.size() && s_[pos_] == '.') fail("floating-point literals are not allowed");
      return MPoly::constant(ring_, make_rat(num, den));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t at = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string name(s_.substr(at, pos_ - at));
      auto idx = ring_->find(name);
      if (!idx) fail_at(at, "unknown identifier '" + name + "'");
      return MPoly::symbol(ring_, *idx);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view s_;
  const RingPtr& ring_;
  std::size_t line_, col0_;
  std::size_t pos_ = 0;
};

}  // namespace

MPoly parse_poly(std::string_view text, const RingPtr& ring, std::size_t line, std::size_t first_column) {
  return Parser(text, ring, line, first_column).parse();
}

}  // namespace aat
