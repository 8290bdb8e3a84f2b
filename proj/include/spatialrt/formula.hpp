// Copyright 2026 The spatialrt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <functional>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spatialrt {

/// Immutable SLCS formula. Copies share the underlying tree.
///
/// Core form uses only prop, top, not, and, close and surround; the other
/// node kinds are derived operators removed by desugar().
class Formula {
 public:
  enum class Kind { prop, top, negation, conjunction, disjunction, close, surround, near, reach, reach_through };

  static Formula prop(std::string name) { return Formula(Kind::prop, std::move(name), 0, {}); }
  static Formula top() { return Formula(Kind::top, {}, 0, {}); }
  static Formula negate(Formula f) { return Formula(Kind::negation, {}, 0, {std::move(f)}); }
  static Formula conj(Formula a, Formula b) { return Formula(Kind::conjunction, {}, 0, {std::move(a), std::move(b)}); }
  static Formula disj(Formula a, Formula b) { return Formula(Kind::disjunction, {}, 0, {std::move(a), std::move(b)}); }
  static Formula close(Formula f) { return Formula(Kind::close, {}, 0, {std::move(f)}); }
  static Formula surround(Formula a, Formula b) { return Formula(Kind::surround, {}, 0, {std::move(a), std::move(b)}); }
  static Formula near(unsigned steps, Formula f) {
    if (steps == 0) throw std::invalid_argument("nearness needs at least one step");
    return Formula(Kind::near, {}, steps, {std::move(f)});
  }
  static Formula reach(Formula a, Formula b) { return Formula(Kind::reach, {}, 0, {std::move(a), std::move(b)}); }
  static Formula reach_through(Formula from, Formula via, Formula to) {
    return Formula(Kind::reach_through, {}, 0, {std::move(from), std::move(via), std::move(to)});
  }

  Kind kind() const noexcept { return node_->kind; }
  const std::string& name() const noexcept { return node_->name; }
  unsigned steps() const noexcept { return node_->steps; }
  std::size_t arity() const noexcept { return node_->children.size(); }
  const Formula& operator[](std::size_t i) const { return node_->children.at(i); }
  std::size_t hash() const noexcept { return node_->hash; }

  bool is_core() const {
    switch (kind()) {
      case Kind::prop:
      case Kind::top:
        return true;
      case Kind::negation:
      case Kind::conjunction:
      case Kind::close:
      case Kind::surround:
        for (const auto& c : node_->children)
          if (!c.is_core()) return false;
        return true;
      default:
        return false;
    }
  }

  std::size_t depth() const {
    std::size_t d = 0;
    for (const auto& c : node_->children) d = std::max(d, c.depth());
    return d + 1;
  }

  void collect_props(std::set<std::string>& out) const {
    if (kind() == Kind::prop) out.insert(name());
    for (const auto& c : node_->children) c.collect_props(out);
  }

  /// Structural equality.
  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash() || a.kind() != b.kind() || a.steps() != b.steps() || a.name() != b.name() ||
        a.arity() != b.arity())
      return false;
    for (std::size_t i = 0; i < a.arity(); ++i)
      if (!(a[i] == b[i])) return false;
    return true;
  }

 private:
  struct Node {
    Kind kind;
    std::string name;
    unsigned steps;
    std::vector<Formula> children;
    std::size_t hash;
  };

  Formula(Kind k, std::string name, unsigned steps, std::vector<Formula> children) {
    std::size_t h = std::hash<int>{}(static_cast<int>(k)) * 0x9e3779b97f4a7c15ULL;
    auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    mix(std::hash<std::string>{}(name));
    mix(steps);
    for (const auto& c : children) mix(c.hash());
    node_ = std::make_shared<const Node>(Node{k, std::move(name), steps, std::move(children), h});
  }

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const noexcept { return f.hash(); }
};

/// Fully parenthesized text that parse() maps back to an equal formula.
inline std::string render(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::prop:
      return f.name();
    case K::top:
      return "true";
    case K::negation:
      return "!" + render(f[0]);
    case K::close:
      return "C " + render(f[0]);
    case K::near:
      return "N" + std::to_string(f.steps()) + " " + render(f[0]);
    case K::conjunction:
      return "(" + render(f[0]) + " & " + render(f[1]) + ")";
    case K::disjunction:
      return "(" + render(f[0]) + " | " + render(f[1]) + ")";
    case K::surround:
      return "(" + render(f[0]) + " S " + render(f[1]) + ")";
    case K::reach:
      return "(" + render(f[0]) + " T " + render(f[1]) + ")";
    case K::reach_through:
      return "(" + render(f[0]) + " R(" + render(f[1]) + ") " + render(f[2]) + ")";
  }
  return {};
}

class FormulaSyntaxError : public std::runtime_error {
 public:
  FormulaSyntaxError(std::size_t position, std::string expected, std::string found)
      : std::runtime_error("syntax error at position " + std::to_string(position) + ": expected " + expected +
                           ", found " + found),
        position_(position),
        expected_(std::move(expected)) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

namespace detail {

// Grammar, loosest binding first:
//   formula := disj [ ('S' | 'T') formula | 'R' '(' formula ')' formula ]
//   disj    := conj { '|' conj }
//   conj    := unary { '&' unary }
//   unary   := '!' unary | 'C' unary | 'N<k>' unary | atom
//   atom    := 'true' | 'false' | ident | '(' formula ')'
class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : text_(text) { advance(); }

  Formula parse_all() {
    if (tok_.type == Tok::end) fail("a formula");
    Formula f = parse_formula();
    if (tok_.type != Tok::end) fail("end of input");
    return f;
  }

 private:
  enum class Tok { end, lparen, rparen, bang, amp, bar, ident, kw_true, kw_false, kw_close, kw_near, kw_s, kw_t, kw_r };
  struct Token {
    Tok type = Tok::end;
    std::string text;
    std::size_t pos = 0;
    unsigned steps = 0;
  };

  [[noreturn]] void fail(const std::string& expected) const {
    std::string found = tok_.type == Tok::end ? "end of input" : "'" + tok_.text + "'";
    throw FormulaSyntaxError(tok_.pos, expected, found);
  }

  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    tok_ = Token{};
    tok_.pos = pos_;
    if (pos_ >= text_.size()) return;
    const char c = text_[pos_];
    auto single = [&](Tok t) {
      tok_.type = t;
      tok_.text = std::string(1, c);
      ++pos_;
    };
    switch (c) {
      case '(': return single(Tok::lparen);
      case ')': return single(Tok::rparen);
      case '!': return single(Tok::bang);
      case '&': return single(Tok::amp);
      case '|': return single(Tok::bar);
      default: break;
    }
    if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) {
      tok_.text = std::string(1, c);
      throw FormulaSyntaxError(pos_, "a formula token", "'" + tok_.text + "'");
    }
    std::size_t end = pos_;
    while (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) ++end;
    tok_.text = std::string(text_.substr(pos_, end - pos_));
    pos_ = end;
    const std::string& w = tok_.text;
    if (w == "true") {
      tok_.type = Tok::kw_true;
    } else if (w == "false") {
      tok_.type = Tok::kw_false;
    } else if (w == "C") {
      tok_.type = Tok::kw_close;
    } else if (w == "S") {
      tok_.type = Tok::kw_s;
    } else if (w == "T") {
      tok_.type = Tok::kw_t;
    } else if (w == "R") {
      tok_.type = Tok::kw_r;
    } else if (w[0] == 'N' && w.find_first_not_of("0123456789", 1) == std::string::npos) {
      tok_.type = Tok::kw_near;
      unsigned long k = 1;
      if (w.size() > 1) {
        if (w.size() > 10) throw FormulaSyntaxError(tok_.pos, "a nearness bound that fits 32 bits", "'" + w + "'");
        k = std::stoul(w.substr(1));
      }
      if (k == 0) throw FormulaSyntaxError(tok_.pos, "a nearness bound of at least 1", "'" + w + "'");
      tok_.steps = static_cast<unsigned>(k);
    } else {
      tok_.type = Tok::ident;
    }
  }

  void expect(Tok t, const char* what) {
    if (tok_.type != t) fail(what);
    advance();
  }

  Formula parse_formula() {
    Formula lhs = parse_disj();
    switch (tok_.type) {
      case Tok::kw_s:
        advance();
        return Formula::surround(std::move(lhs), parse_formula());
      case Tok::kw_t:
        advance();
        return Formula::reach(std::move(lhs), parse_formula());
      case Tok::kw_r: {
        advance();
        expect(Tok::lparen, "'(' after R");
        Formula via = parse_formula();
        expect(Tok::rparen, "')' closing R(...)");
        return Formula::reach_through(std::move(lhs), std::move(via), parse_formula());
      }
      default:
        return lhs;
    }
  }

  Formula parse_disj() {
    Formula f = parse_conj();
    while (tok_.type == Tok::bar) {
      advance();
      f = Formula::disj(std::move(f), parse_conj());
    }
    return f;
  }

  Formula parse_conj() {
    Formula f = parse_unary();
    while (tok_.type == Tok::amp) {
      advance();
      f = Formula::conj(std::move(f), parse_unary());
    }
    return f;
  }

  Formula parse_unary() {
    switch (tok_.type) {
      case Tok::bang:
        advance();
        return Formula::negate(parse_unary());
      case Tok::kw_close:
        advance();
        return Formula::close(parse_unary());
      case Tok::kw_near: {
        const unsigned k = tok_.steps;
        advance();
        return Formula::near(k, parse_unary());
      }
      default:
        return parse_atom();
    }
  }

  Formula parse_atom() {
    switch (tok_.type) {
      case Tok::kw_true:
        advance();
        return Formula::top();
      case Tok::kw_false:
        advance();
        return Formula::negate(Formula::top());
      case Tok::ident: {
        std::string name = tok_.text;
        advance();
        return Formula::prop(std::move(name));
      }
      case Tok::lparen: {
        advance();
        Formula f = parse_formula();
        expect(Tok::rparen, "')'");
        return f;
      }
      default:
        fail("a proposition, 'true', '!', 'C', 'N<k>' or '('");
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token tok_;
};

}  // namespace detail

/// Parses SLCS concrete syntax. Throws FormulaSyntaxError.
inline Formula parse_formula(std::string_view text) { return detail::FormulaParser(text).parse_all(); }

/// Rewrites derived operators into the core grammar.
inline Formula desugar(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::prop:
    case K::top:
      return f;
    case K::negation:
      return Formula::negate(desugar(f[0]));
    case K::conjunction:
      return Formula::conj(desugar(f[0]), desugar(f[1]));
    case K::close:
      return Formula::close(desugar(f[0]));
    case K::surround:
      return Formula::surround(desugar(f[0]), desugar(f[1]));
    case K::disjunction:
      return Formula::negate(Formula::conj(Formula::negate(desugar(f[0])), Formula::negate(desugar(f[1]))));
    case K::near: {
      Formula g = desugar(f[0]);
      for (unsigned i = 0; i < f.steps(); ++i) g = Formula::close(std::move(g));
      return g;
    }
    case K::reach: {
      // a T b = a & !((!b) S !(a | b))
      const Formula& a = f[0];
      const Formula& b = f[1];
      return desugar(
          Formula::conj(a, Formula::negate(Formula::surround(Formula::negate(b), Formula::negate(Formula::disj(a, b))))));
    }
    case K::reach_through: {
      // a R(b) c = a T ((b T c) & (b T a))
      const Formula& a = f[0];
      const Formula& b = f[1];
      const Formula& c = f[2];
      return desugar(Formula::reach(a, Formula::conj(Formula::reach(b, c), Formula::reach(b, a))));
    }
  }
  throw std::logic_error("unhandled formula kind");
}

}  // namespace spatialrt
