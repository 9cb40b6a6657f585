#include "lofdesign/expr.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "lofdesign/chebyshev.hpp"

namespace lofd {
namespace {

using Node = std::function<double(double)>;

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Node parse() {
    Node node = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character");
    return node;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream msg;
    msg << "expression: " << what << " at position " << pos_ << " in '" << text_ << "'";
    throw std::invalid_argument(msg.str());
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Node expr() {
    Node lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = [a = lhs, b = term()](double x) { return a(x) + b(x); };
      } else if (accept('-')) {
        lhs = [a = lhs, b = term()](double x) { return a(x) - b(x); };
      } else {
        return lhs;
      }
    }
  }

  Node term() {
    Node lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = [a = lhs, b = unary()](double x) { return a(x) * b(x); };
      } else if (accept('/')) {
        lhs = [a = lhs, b = unary()](double x) { return a(x) / b(x); };
      } else {
        return lhs;
      }
    }
  }

  Node unary() {
    if (accept('-')) return [a = unary()](double x) { return -a(x); };
    if (accept('+')) return unary();
    return power();
  }

  Node power() {
    Node base = primary();
    if (accept('^')) {
      Node exponent = unary();
      return [base, exponent](double x) { return std::pow(base(x), exponent(x)); };
    }
    return base;
  }

  Node primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Node inner = expr();
      expect(')');
      return inner;
    }
    if (c == 'x' || c == 'X') {
      ++pos_;
      return [](double x) { return x; };
    }
    if (c == 'T') {
      ++pos_;
      if (pos_ < text_.size() && text_[pos_] == '_') ++pos_;
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ == start) fail("expected Chebyshev degree after 'T'");
      const int degree = std::stoi(std::string(text_.substr(start, pos_ - start)));
      if (degree > 2 * cheb::kMaxParameters - 3) fail("Chebyshev degree too large");
      expect('(');
      Node arg = expr();
      expect(')');
      return [degree, arg](double x) { return cheb::eval_T(degree, arg(x)); };
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(text_.substr(pos_));
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(rest, &used);
      } catch (const std::exception&) {
        fail("malformed number");
      }
      pos_ += used;
      return [value](double) { return value; };
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

RegressionFunction parse_expression(std::string_view text) {
  Parser parser(text);
  return RegressionFunction{parser.parse(), std::string(text)};
}

}  // namespace lofd
