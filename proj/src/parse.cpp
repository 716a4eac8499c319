#include "hamext/parse.hpp"

#include <cctype>
#include <optional>

namespace hamext {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  ParsedCoeff run() {
    skip();
    if (pos_ == s_.size()) throw ParseError("empty expression", pos_);
    Coeff v = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return {std::move(v), kind_};
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) {
      throw ParseError(std::string("expected '") + c + "'" +
                           (pos_ < s_.size() ? std::string(", found '") + s_[pos_] + "'" : std::string(", found end")),
                       pos_);
    }
  }

  Coeff expr() {
    Coeff v;
    if (eat('-')) {
      v = -term();
    } else {
      eat('+');
      v = term();
    }
    for (;;) {
      if (eat('+')) {
        v = v + term();
      } else if (eat('-')) {
        v = v - term();
      } else {
        return v;
      }
    }
  }

  Coeff term() {
    Coeff v = power();
    for (;;) {
      if (eat('*')) {
        v = v * power();
      } else if (eat('/')) {
        const std::size_t at = pos_;
        const Coeff d = power();
        if (d.is_zero()) throw ParseError("division by zero", at);
        v = v / d;
      } else {
        return v;
      }
    }
  }

  Coeff power() {
    Coeff base = atom();
    if (!eat('^')) return base;
    skip();
    const bool neg = eat('-');
    skip();
    const std::size_t at = pos_;
    std::string digits;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) digits += s_[pos_++];
    if (digits.empty() || (pos_ < s_.size() && s_[pos_] == '.')) {
      throw ParseError("exponent must be an integer literal", at);
    }
    if (digits.size() > 3) throw ParseError("exponent too large", at);
    const int k = std::stoi(digits);
    if (neg) {
      if (base.is_zero()) throw ParseError("negative power of zero", at);
      return base.inverse().pow(k);
    }
    return base.pow(k);
  }

  Coeff atom() {
    skip();
    if (pos_ == s_.size()) throw ParseError("unexpected end of expression", pos_);
    const char ch = s_[pos_];
    if (ch == '(') {
      ++pos_;
      Coeff v = expr();
      expect(')');
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      const std::size_t at = pos_;
      std::string id;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        id += s_[pos_++];
      }
      if (id == "q") return Coeff::var(0);
      if (auto f = function(id)) {
        expect('(');
        skip();
        const std::size_t arg = pos_;
        if (s_.substr(pos_, 1) != "q" ||
            (pos_ + 1 < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])) || s_[pos_ + 1] == '_'))) {
          throw ParseError(id + " takes only the bare position variable q as argument", arg);
        }
        ++pos_;
        expect(')');
        note_kind(*f == Fn::sin || *f == Fn::cos ? GeneratorKind::circular : GeneratorKind::hyperbolic, at);
        return Coeff::fn(0, *f);
      }
      for (int i = 0; i < kParamCount; ++i) {
        if (kParamNames[i] == id) return Coeff::param(static_cast<Param>(i));
      }
      throw ParseError("unknown identifier '" + id +
                           "' (allowed: q, sin, cos, sinh, cosh and parameter names)",
                       at);
    }
    throw ParseError(std::string("unexpected '") + ch + "'", pos_);
  }

  Coeff number() {
    const std::size_t at = pos_;
    std::string whole, frac;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) whole += s_[pos_++];
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) frac += s_[pos_++];
    }
    if (whole.empty() && frac.empty()) throw ParseError("malformed number", at);
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      throw ParseError("exponent notation is not supported; write the decimal out", pos_);
    }
    mpz_class num(whole + frac, 10);
    mpz_class den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    Scalar v(num, den);
    v.canonicalize();
    return Coeff(v);
  }

  static std::optional<Fn> function(const std::string& id) {
    if (id == "sin") return Fn::sin;
    if (id == "cos") return Fn::cos;
    if (id == "sinh") return Fn::sinh;
    if (id == "cosh") return Fn::cosh;
    return std::nullopt;
  }

  void note_kind(GeneratorKind k, std::size_t at) {
    try {
      kind_ = combined_kind(kind_, k);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), at);
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  GeneratorKind kind_ = GeneratorKind::linear;
};

}  // namespace

ParsedCoeff parse_coeff(std::string_view text) { return Parser(text).run(); }

GeneratorKind combined_kind(GeneratorKind a, GeneratorKind b) {
  if (a == GeneratorKind::linear) return b;
  if (b == GeneratorKind::linear || a == b) return a;
  throw std::invalid_argument("circular and hyperbolic functions of q cannot be mixed");
}

}  // namespace hamext
