#include "gfield/phi.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

namespace gfield::phi {

// ---------------------------------------------------------------- nodes

int TestFunction::append(Node n) {
  nodes_.push_back(n);
  return static_cast<int>(nodes_.size()) - 1;
}

int TestFunction::merge_from(const TestFunction& other, int node) {
  const Node& src = other.nodes_[node];
  Node copy = src;
  if (src.a >= 0) copy.a = merge_from(other, src.a);
  if (src.b >= 0) copy.b = merge_from(other, src.b);
  return append(copy);
}

void TestFunction::refresh_arity() {
  arity_ = 0;
  for (const Node& n : nodes_)
    if (n.op == Op::variable) arity_ = std::max(arity_, n.var);
}

double TestFunction::eval_node(int idx, std::span<const double> x) const {
  const Node& n = nodes_[idx];
  switch (n.op) {
    case Op::constant: return n.value;
    case Op::variable: return x[n.var - 1];
    case Op::add: return eval_node(n.a, x) + eval_node(n.b, x);
    case Op::sub: return eval_node(n.a, x) - eval_node(n.b, x);
    case Op::mul: return eval_node(n.a, x) * eval_node(n.b, x);
    case Op::pow: {
      const double base = eval_node(n.a, x);
      double r = 1.0;
      for (int k = 0; k < n.exponent; ++k) r *= base;
      return r;
    }
    case Op::min: return std::min(eval_node(n.a, x), eval_node(n.b, x));
    case Op::max: return std::max(eval_node(n.a, x), eval_node(n.b, x));
    case Op::abs: return std::abs(eval_node(n.a, x));
    case Op::neg: return -eval_node(n.a, x);
  }
  return 0.0;
}

double TestFunction::eval(std::span<const double> x) const {
  if (root_ < 0) throw std::logic_error("eval on empty TestFunction");
  if (static_cast<int>(x.size()) < arity_)
    throw std::invalid_argument("eval: point has fewer coordinates than arity");
  return eval_node(root_, x);
}

// ---------------------------------------------------------------- builders

TestFunction TestFunction::constant(double c) {
  TestFunction f;
  f.root_ = f.append({Op::constant, c, 0, 0, -1, -1});
  return f;
}

TestFunction TestFunction::variable(int index) {
  if (index < 1) throw std::invalid_argument("variable index must be >= 1");
  TestFunction f;
  f.root_ = f.append({Op::variable, 0.0, index, 0, -1, -1});
  f.arity_ = index;
  return f;
}

namespace {
bool is_const(const TestFunction& f, double* out = nullptr) {
  if (f.empty()) return false;
  const auto& n = f.nodes()[f.root()];
  if (n.op != Op::constant) return false;
  if (out) *out = n.value;
  return true;
}
} // namespace

TestFunction TestFunction::add(TestFunction a, TestFunction b) {
  double ca, cb;
  const bool ka = is_const(a, &ca), kb = is_const(b, &cb);
  if (ka && kb) return constant(ca + cb);
  if (ka && ca == 0.0) return b;
  if (kb && cb == 0.0) return a;
  TestFunction f;
  const int ia = f.merge_from(a, a.root_);
  const int ib = f.merge_from(b, b.root_);
  f.root_ = f.append({Op::add, 0.0, 0, 0, ia, ib});
  f.refresh_arity();
  return f;
}

TestFunction TestFunction::sub(TestFunction a, TestFunction b) {
  double ca, cb;
  const bool ka = is_const(a, &ca), kb = is_const(b, &cb);
  if (ka && kb) return constant(ca - cb);
  if (kb && cb == 0.0) return a;
  TestFunction f;
  const int ia = f.merge_from(a, a.root_);
  const int ib = f.merge_from(b, b.root_);
  f.root_ = f.append({Op::sub, 0.0, 0, 0, ia, ib});
  f.refresh_arity();
  return f;
}

TestFunction TestFunction::mul(TestFunction a, TestFunction b) {
  double ca, cb;
  const bool ka = is_const(a, &ca), kb = is_const(b, &cb);
  if (ka && kb) return constant(ca * cb);
  if (ka && ca == 0.0) return constant(0.0);
  if (kb && cb == 0.0) return constant(0.0);
  if (ka && ca == 1.0) return b;
  if (kb && cb == 1.0) return a;
  TestFunction f;
  const int ia = f.merge_from(a, a.root_);
  const int ib = f.merge_from(b, b.root_);
  f.root_ = f.append({Op::mul, 0.0, 0, 0, ia, ib});
  f.refresh_arity();
  return f;
}

TestFunction TestFunction::pow(TestFunction a, int k) {
  if (k < 0 || k > kMaxExponent) throw std::invalid_argument("pow: exponent out of range");
  if (k == 0) return constant(1.0);
  if (k == 1) return a;
  double ca;
  if (is_const(a, &ca)) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= ca;
    return constant(r);
  }
  TestFunction f;
  const int ia = f.merge_from(a, a.root_);
  f.root_ = f.append({Op::pow, 0.0, 0, k, ia, -1});
  f.refresh_arity();
  return f;
}

TestFunction TestFunction::min(TestFunction a, TestFunction b) {
  double ca, cb;
  if (is_const(a, &ca) && is_const(b, &cb)) return constant(std::min(ca, cb));
  TestFunction f;
  const int ia = f.merge_from(a, a.root_);
  const int ib = f.merge_from(b, b.root_);
  f.root_ = f.append({Op::min, 0.0, 0, 0, ia, ib});
  f.refresh_arity();
  return f;
}

TestFunction TestFunction::max(TestFunction a, TestFunction b) {
  double ca, cb;
  if (is_const(a, &ca) && is_const(b, &cb)) return constant(std::max(ca, cb));
  TestFunction f;
  const int ia = f.merge_from(a, a.root_);
  const int ib = f.merge_from(b, b.root_);
  f.root_ = f.append({Op::max, 0.0, 0, 0, ia, ib});
  f.refresh_arity();
  return f;
}

TestFunction TestFunction::abs(TestFunction a) {
  double ca;
  if (is_const(a, &ca)) return constant(std::abs(ca));
  TestFunction f;
  const int ia = f.merge_from(a, a.root_);
  f.root_ = f.append({Op::abs, 0.0, 0, 0, ia, -1});
  f.refresh_arity();
  return f;
}

TestFunction TestFunction::neg(TestFunction a) {
  double ca;
  if (is_const(a, &ca)) return constant(-ca);
  TestFunction f;
  const int ia = f.merge_from(a, a.root_);
  f.root_ = f.append({Op::neg, 0.0, 0, 0, ia, -1});
  f.refresh_arity();
  return f;
}

// ---------------------------------------------------------------- queries

std::vector<int> TestFunction::referenced_vars() const {
  std::set<int> seen;
  for (const Node& n : nodes_)
    if (n.op == Op::variable) seen.insert(n.var);
  return {seen.begin(), seen.end()};
}

TestFunction TestFunction::substitute(int var, double value) const {
  TestFunction out;
  struct Rec {
    const TestFunction& src;
    TestFunction& dst;
    int var;
    double value;
    int walk(int idx) {
      const Node& n = src.nodes_[idx];
      if (n.op == Op::variable && n.var == var)
        return dst.append({Op::constant, value, 0, 0, -1, -1});
      Node copy = n;
      if (n.a >= 0) copy.a = walk(n.a);
      if (n.b >= 0) copy.b = walk(n.b);
      return dst.append(copy);
    }
  } rec{*this, out, var, value};
  out.root_ = rec.walk(root_);
  out.refresh_arity();
  return out;
}

bool TestFunction::structurally_equal(const TestFunction& other) const {
  struct Cmp {
    const TestFunction& x;
    const TestFunction& y;
    bool walk(int i, int j) const {
      const Node& a = x.nodes_[i];
      const Node& b = y.nodes_[j];
      if (a.op != b.op) return false;
      switch (a.op) {
        case Op::constant:
          if (a.value != b.value) return false;
          break;
        case Op::variable:
          if (a.var != b.var) return false;
          break;
        case Op::pow:
          if (a.exponent != b.exponent) return false;
          break;
        default: break;
      }
      if ((a.a >= 0) != (b.a >= 0) || (a.b >= 0) != (b.b >= 0)) return false;
      if (a.a >= 0 && !walk(a.a, b.a)) return false;
      if (a.b >= 0 && !walk(a.b, b.b)) return false;
      return true;
    }
  };
  if (empty() || other.empty()) return empty() == other.empty();
  return Cmp{*this, other}.walk(root_, other.root_);
}

// ---------------------------------------------------------------- printing

namespace {
std::string print_number(double v) {
  std::array<char, 32> buf;
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), p);
}
} // namespace

std::string TestFunction::print() const {
  struct Pr {
    const TestFunction& f;
    std::string walk(int idx) const {
      const Node& n = f.nodes_[idx];
      switch (n.op) {
        case Op::constant:
          return n.value < 0 ? "(-" + print_number(-n.value) + ")" : print_number(n.value);
        case Op::variable: return "x" + std::to_string(n.var);
        case Op::add: return "(" + walk(n.a) + "+" + walk(n.b) + ")";
        case Op::sub: return "(" + walk(n.a) + "-" + walk(n.b) + ")";
        case Op::mul: return "(" + walk(n.a) + "*" + walk(n.b) + ")";
        case Op::pow: return "(" + walk(n.a) + "^" + std::to_string(n.exponent) + ")";
        case Op::min: return "min(" + walk(n.a) + "," + walk(n.b) + ")";
        case Op::max: return "max(" + walk(n.a) + "," + walk(n.b) + ")";
        case Op::abs: return "abs(" + walk(n.a) + ")";
        case Op::neg: return "(-" + walk(n.a) + ")";
      }
      return "?";
    }
  };
  if (root_ < 0) return "";
  return Pr{*this}.walk(root_);
}

// ---------------------------------------------------------------- parser

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  TestFunction run() {
    TestFunction f;
    f.root_ = expr(f);
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    f.refresh_arity();
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

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

  int expr(TestFunction& f) {
    bool negated = eat('-');
    int lhs = term(f);
    if (negated) lhs = mk_neg(f, lhs);
    for (;;) {
      if (eat('+')) {
        const int rhs = term(f);
        lhs = f.append({Op::add, 0.0, 0, 0, lhs, rhs});
      } else if (eat('-')) {
        const int rhs = term(f);
        lhs = f.append({Op::sub, 0.0, 0, 0, lhs, rhs});
      } else {
        return lhs;
      }
    }
  }

  int term(TestFunction& f) {
    int lhs = factor(f);
    while (eat('*')) {
      const int rhs = factor(f);
      lhs = f.append({Op::mul, 0.0, 0, 0, lhs, rhs});
    }
    return lhs;
  }

  int factor(TestFunction& f) {
    int base = atom(f);
    if (eat('^')) {
      skip_ws();
      const std::size_t at = pos_;
      unsigned exponent = 0;
      auto [p, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), exponent);
      if (ec != std::errc() || p == text_.data() + pos_) {
        pos_ = at;
        fail("expected unsigned integer exponent");
      }
      pos_ = static_cast<std::size_t>(p - text_.data());
      if (exponent > static_cast<unsigned>(kMaxExponent)) {
        pos_ = at;
        fail("exponent exceeds maximum of " + std::to_string(kMaxExponent));
      }
      base = f.append({Op::pow, 0.0, 0, static_cast<int>(exponent), base, -1});
    }
    return base;
  }

  int atom(TestFunction& f) {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];

    if (c == '(') {
      ++pos_;
      const int inner = expr(f);
      if (!eat(')')) fail("expected ')'");
      return inner;
    }

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double value = 0.0;
      auto [p, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
      if (ec != std::errc()) fail("malformed number");
      pos_ = static_cast<std::size_t>(p - text_.data());
      return f.append({Op::constant, value, 0, 0, -1, -1});
    }

    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string_view ident = text_.substr(start, pos_ - start);

      if (ident == "min" || ident == "max") {
        if (!eat('(')) fail("expected '(' after " + std::string(ident));
        const int a = expr(f);
        if (!eat(',')) fail("expected ','");
        const int b = expr(f);
        if (!eat(')')) fail("expected ')'");
        return f.append({ident == "min" ? Op::min : Op::max, 0.0, 0, 0, a, b});
      }
      if (ident == "abs") {
        if (!eat('(')) fail("expected '(' after abs");
        const int a = expr(f);
        if (!eat(')')) fail("expected ')'");
        return f.append({Op::abs, 0.0, 0, 0, a, -1});
      }
      if (ident.size() >= 2 && ident[0] == 'x') {
        unsigned index = 0;
        auto [p, ec] = std::from_chars(ident.data() + 1, ident.data() + ident.size(), index);
        if (ec == std::errc() && p == ident.data() + ident.size() && index >= 1)
          return f.append({Op::variable, 0.0, static_cast<int>(index), 0, -1, -1});
      }
      pos_ = start;
      fail("unknown identifier '" + std::string(ident) + "'");
    }

    fail(std::string("unexpected character '") + c + "'");
  }

  // unary minus on a literal folds so that printed negative constants
  // round-trip to the same tree
  int mk_neg(TestFunction& f, int child) {
    if (f.nodes_[child].op == Op::constant) {
      f.nodes_[child].value = -f.nodes_[child].value;
      return child;
    }
    return f.append({Op::neg, 0.0, 0, 0, child, -1});
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

TestFunction parse(std::string_view text) { return Parser(text).run(); }

// ---------------------------------------------------------------- bounds

namespace {

struct Ival {
  double lo, hi;
};

Ival iv_add(Ival a, Ival b) { return {a.lo + b.lo, a.hi + b.hi}; }
Ival iv_sub(Ival a, Ival b) { return {a.lo - b.hi, a.hi - b.lo}; }
Ival iv_neg(Ival a) { return {-a.hi, -a.lo}; }
Ival iv_mul(Ival a, Ival b) {
  const double c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {std::min({c[0], c[1], c[2], c[3]}), std::max({c[0], c[1], c[2], c[3]})};
}
Ival iv_abs(Ival a) {
  if (a.lo >= 0) return a;
  if (a.hi <= 0) return {-a.hi, -a.lo};
  return {0.0, std::max(-a.lo, a.hi)};
}
Ival iv_pow(Ival a, int k) {
  Ival r{1.0, 1.0};
  for (int i = 0; i < k; ++i) r = iv_mul(r, a);
  if (k % 2 == 0 && a.lo < 0 && a.hi > 0) r.lo = 0.0;  // even power through zero
  return r;
}

double mag(Ival a) { return std::max(std::abs(a.lo), std::abs(a.hi)); }

struct BoundRec {
  const std::vector<TestFunction::Node>& nodes;
  double radius;

  // returns range and a Lipschitz bound w.r.t. max-norm on the ball
  std::pair<Ival, double> walk(int idx) const {
    const auto& n = nodes[idx];
    switch (n.op) {
      case Op::constant: return {{n.value, n.value}, 0.0};
      case Op::variable: return {{-radius, radius}, 1.0};
      case Op::add: {
        auto [ra, la] = walk(n.a);
        auto [rb, lb] = walk(n.b);
        return {iv_add(ra, rb), la + lb};
      }
      case Op::sub: {
        auto [ra, la] = walk(n.a);
        auto [rb, lb] = walk(n.b);
        return {iv_sub(ra, rb), la + lb};
      }
      case Op::mul: {
        auto [ra, la] = walk(n.a);
        auto [rb, lb] = walk(n.b);
        return {iv_mul(ra, rb), la * mag(rb) + lb * mag(ra)};
      }
      case Op::pow: {
        auto [ra, la] = walk(n.a);
        const double m = mag(ra);
        double dpow = n.exponent > 0 ? static_cast<double>(n.exponent) : 0.0;
        double mm = 1.0;
        for (int i = 0; i + 1 < n.exponent; ++i) mm *= m;
        return {iv_pow(ra, n.exponent), dpow * mm * la};
      }
      case Op::min: {
        auto [ra, la] = walk(n.a);
        auto [rb, lb] = walk(n.b);
        return {{std::min(ra.lo, rb.lo), std::min(ra.hi, rb.hi)}, std::max(la, lb)};
      }
      case Op::max: {
        auto [ra, la] = walk(n.a);
        auto [rb, lb] = walk(n.b);
        return {{std::max(ra.lo, rb.lo), std::max(ra.hi, rb.hi)}, std::max(la, lb)};
      }
      case Op::abs: {
        auto [ra, la] = walk(n.a);
        return {iv_abs(ra), la};
      }
      case Op::neg: {
        auto [ra, la] = walk(n.a);
        return {iv_neg(ra), la};
      }
    }
    return {{0.0, 0.0}, 0.0};
  }
};

} // namespace

TestFunction::GrowthBound TestFunction::growth_bound(double radius) const {
  if (radius <= 0) throw std::invalid_argument("growth_bound: radius must be positive");
  if (root_ < 0) throw std::logic_error("growth_bound on empty TestFunction");
  auto [range, lip] = BoundRec{nodes_, radius}.walk(root_);
  return {lip, mag(range)};
}

// ------------------------------------------- quadratic decomposition

namespace {

// polynomial in outer vars: monomial {0,0}=1, {v,0}=y_v, {v,w}=y_v*y_w (v<=w)
using Mono = std::pair<int, int>;
using Poly = std::map<Mono, TestFunction>;

void poly_add_term(Poly& p, Mono m, TestFunction coeff) {
  auto it = p.find(m);
  if (it == p.end())
    p.emplace(m, std::move(coeff));
  else
    it->second = TestFunction::add(std::move(it->second), std::move(coeff));
}

int mono_degree(Mono m) { return (m.first ? 1 : 0) + (m.second ? 1 : 0); }

std::optional<Mono> mono_mul(Mono a, Mono b) {
  if (mono_degree(a) + mono_degree(b) > 2) return std::nullopt;
  std::vector<int> vars;
  if (a.first) vars.push_back(a.first);
  if (a.second) vars.push_back(a.second);
  if (b.first) vars.push_back(b.first);
  if (b.second) vars.push_back(b.second);
  std::sort(vars.begin(), vars.end());
  if (vars.empty()) return Mono{0, 0};
  if (vars.size() == 1) return Mono{vars[0], 0};
  return Mono{vars[0], vars[1]};
}

std::optional<Poly> poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      auto m = mono_mul(ma, mb);
      if (!m) return std::nullopt;
      poly_add_term(out, *m, TestFunction::mul(ca, cb));
    }
  return out;
}

struct QuadRec {
  const TestFunction& f;
  const std::set<int>& outer;

  bool touches_outer(int idx) const {
    const auto& n = f.nodes()[idx];
    if (n.op == Op::variable) return outer.count(n.var) > 0;
    if (n.a >= 0 && touches_outer(n.a)) return true;
    if (n.b >= 0 && touches_outer(n.b)) return true;
    return false;
  }

  TestFunction build(int idx) const {
    const auto& n = f.nodes()[idx];
    switch (n.op) {
      case Op::constant: return TestFunction::constant(n.value);
      case Op::variable: return TestFunction::variable(n.var);
      case Op::add: return TestFunction::add(build(n.a), build(n.b));
      case Op::sub: return TestFunction::sub(build(n.a), build(n.b));
      case Op::mul: return TestFunction::mul(build(n.a), build(n.b));
      case Op::pow: return TestFunction::pow(build(n.a), n.exponent);
      case Op::min: return TestFunction::min(build(n.a), build(n.b));
      case Op::max: return TestFunction::max(build(n.a), build(n.b));
      case Op::abs: return TestFunction::abs(build(n.a));
      case Op::neg: return TestFunction::neg(build(n.a));
    }
    return TestFunction::constant(0.0);
  }

  std::optional<Poly> walk(int idx) const {
    if (!touches_outer(idx)) {
      Poly p;
      p.emplace(Mono{0, 0}, build(idx));
      return p;
    }
    const auto& n = f.nodes()[idx];
    switch (n.op) {
      case Op::variable: {
        Poly p;
        p.emplace(Mono{n.var, 0}, TestFunction::constant(1.0));
        return p;
      }
      case Op::add: {
        auto a = walk(n.a);
        auto b = walk(n.b);
        if (!a || !b) return std::nullopt;
        for (auto& [m, c] : *b) poly_add_term(*a, m, std::move(c));
        return a;
      }
      case Op::sub: {
        auto a = walk(n.a);
        auto b = walk(n.b);
        if (!a || !b) return std::nullopt;
        for (auto& [m, c] : *b) poly_add_term(*a, m, TestFunction::neg(std::move(c)));
        return a;
      }
      case Op::neg: {
        auto a = walk(n.a);
        if (!a) return std::nullopt;
        Poly out;
        for (auto& [m, c] : *a) out.emplace(m, TestFunction::neg(std::move(c)));
        return out;
      }
      case Op::mul: {
        auto a = walk(n.a);
        auto b = walk(n.b);
        if (!a || !b) return std::nullopt;
        return poly_mul(*a, *b);
      }
      case Op::pow: {
        if (n.exponent > 2) return std::nullopt;  // outer-var degree would exceed 2
        auto a = walk(n.a);
        if (!a) return std::nullopt;
        if (n.exponent == 0) {
          Poly p;
          p.emplace(Mono{0, 0}, TestFunction::constant(1.0));
          return p;
        }
        if (n.exponent == 1) return a;
        return poly_mul(*a, *a);
      }
      case Op::min:
      case Op::max:
      case Op::abs:
      case Op::constant:
        return std::nullopt;  // nonlinearity applied to outer variables
    }
    return std::nullopt;
  }
};

} // namespace

std::optional<QuadraticForm> decompose_quadratic(const TestFunction& f,
                                                 const std::set<int>& outer_vars) {
  if (f.empty()) return std::nullopt;
  QuadRec rec{f, outer_vars};
  auto poly = rec.walk(f.root());
  if (!poly) return std::nullopt;
  QuadraticForm out;
  out.constant_part = TestFunction::constant(0.0);
  for (auto& [m, c] : *poly) {
    if (m.first == 0)
      out.constant_part = TestFunction::add(std::move(out.constant_part), std::move(c));
    else if (m.second == 0)
      out.linear.emplace(m.first, std::move(c));
    else
      out.quad.emplace(std::make_pair(std::min(m.first, m.second),
                                      std::max(m.first, m.second)),
                       std::move(c));
  }
  return out;
}

} // namespace gfield::phi
