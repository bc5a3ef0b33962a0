#include "strelmine/parser.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "strelmine/errors.hpp"

namespace strelmine {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

class Parser {
public:
  Parser(std::string_view text, ParseOptions options) : text_(text), options_(options) {}

  FormulaPtr parse() {
    auto f = parse_or();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

private:
  std::string_view text_;
  ParseOptions options_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw syntax_error(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const std::string& what) {
    if (!eat(c)) fail("expected '" + std::string(1, c) + "' " + what);
  }

  // Peeks the next identifier-like word without consuming it.
  std::string peek_word() {
    skip_ws();
    if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) return {};
    std::size_t end = pos_;
    while (end < text_.size() && is_ident_char(text_[end])) ++end;
    return std::string(text_.substr(pos_, end - pos_));
  }

  void consume_word(const std::string& w) { pos_ += w.size(); }

  double parse_number() {
    skip_ws();
    const char* begin = text_.data() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  Scalar parse_scalar(bool allow_inf) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '$') {
      if (!options_.allow_holes) fail("parameter holes are not allowed here");
      ++pos_;
      if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) fail("expected hole name after '$'");
      std::size_t start = pos_;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
      return Scalar::param(std::string(text_.substr(start, pos_ - start)));
    }
    std::string w = peek_word();
    if (w == "inf") {
      if (!allow_inf) fail("'inf' is not allowed in a time interval");
      consume_word(w);
      return Scalar::lit(std::numeric_limits<double>::infinity());
    }
    double v = parse_number();
    if (v < 0.0) fail("interval endpoints must be non-negative");
    return Scalar::lit(v);
  }

  Interval parse_interval(bool temporal) {
    expect('[', "to open an interval");
    Interval iv;
    iv.lo = parse_scalar(/*allow_inf=*/false);
    expect(',', "between interval endpoints");
    iv.hi = parse_scalar(/*allow_inf=*/!temporal);
    expect(']', "to close an interval");
    if (!iv.lo.is_hole() && !iv.hi.is_hole()) {
      if (iv.lo.value > iv.hi.value) fail("interval lower bound exceeds upper bound");
      if (temporal && iv.lo.value == iv.hi.value) fail("time interval must be non-singular");
    }
    return iv;
  }

  FormulaPtr parse_or() {
    auto lhs = parse_and();
    while (eat('|')) lhs = f_or(lhs, parse_and());
    return lhs;
  }

  FormulaPtr parse_and() {
    auto lhs = parse_until();
    while (eat('&')) lhs = f_and(lhs, parse_until());
    return lhs;
  }

  FormulaPtr parse_until() {
    auto lhs = parse_unary();
    while (true) {
      std::string w = peek_word();
      if (w == "U") {
        consume_word(w);
        Interval iv = parse_interval(/*temporal=*/true);
        lhs = f_until(iv, lhs, parse_unary());
      } else if (w == "R") {
        consume_word(w);
        Interval iv = parse_interval(/*temporal=*/false);
        lhs = f_reach(iv, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  FormulaPtr parse_unary() {
    skip_ws();
    if (eat('!')) return f_not(parse_unary());
    std::string w = peek_word();
    if (w == "F" || w == "G") {
      consume_word(w);
      Interval iv = parse_interval(/*temporal=*/true);
      auto kid = parse_unary();
      return w == "F" ? f_eventually(iv, kid) : f_globally(iv, kid);
    }
    if (w == "E" || w == "somewhere" || w == "everywhere") {
      consume_word(w);
      Interval iv = parse_interval(/*temporal=*/false);
      auto kid = parse_unary();
      if (w == "E") return f_escape(iv, kid);
      if (w == "somewhere") return f_somewhere(iv, kid);
      return f_everywhere(iv, kid);
    }
    if (w == "surround") {
      consume_word(w);
      Interval iv = parse_interval(/*temporal=*/false);
      expect('(', "after surround interval");
      auto a = parse_or();
      expect(',', "between surround arguments");
      auto b = parse_or();
      expect(')', "to close surround arguments");
      return f_surround(iv, a, b);
    }
    return parse_primary();
  }

  FormulaPtr parse_primary() {
    skip_ws();
    if (eat('(')) {
      auto f = parse_or();
      expect(')', "to close a subformula");
      return f;
    }
    std::string w = peek_word();
    if (w.empty()) fail("expected a formula");
    if (w == "true") {
      consume_word(w);
      return f_true();
    }
    if (w == "inf" || w == "U" || w == "R" || w == "F" || w == "G" || w == "E" ||
        w == "somewhere" || w == "everywhere" || w == "surround") {
      fail("'" + w + "' is a reserved word");
    }
    consume_word(w);
    skip_ws();
    Cmp cmp;
    if (pos_ < text_.size() && text_[pos_] == '>') {
      ++pos_;
      cmp = eat('=') ? Cmp::Ge : Cmp::Gt;
    } else if (pos_ < text_.size() && text_[pos_] == '<') {
      ++pos_;
      cmp = eat('=') ? Cmp::Le : Cmp::Lt;
    } else {
      fail("expected a comparison operator after variable '" + w + "'");
    }
    skip_ws();
    Scalar thr;
    if (pos_ < text_.size() && text_[pos_] == '$') {
      thr = parse_scalar(/*allow_inf=*/false);
    } else {
      thr = Scalar::lit(parse_number());
    }
    return f_atom(w, cmp, thr);
  }
};

}  // namespace

FormulaPtr parse_formula(std::string_view text, ParseOptions options) {
  return Parser(text, options).parse();
}

}  // namespace strelmine
