#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Payoff language: piecewise-polynomial locally-Lipschitz functions of
// x1..xn, closed under +, -, *, integer powers, min, max, abs and negation.
// Every expressible function has polynomial growth and a computable local
// Lipschitz bound, which is what the truncation-error budgets of the
// solvers rely on.
namespace gfield::phi {

enum class Op { constant, variable, add, sub, mul, pow, min, max, abs, neg };

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " (at position " + std::to_string(position) + ")"),
        pos(position) {}
  std::size_t pos;
};

class TestFunction {
 public:
  struct Node {
    Op op;
    double value = 0.0;  // constant
    int var = 0;         // variable index, 1-based
    int exponent = 0;    // pow
    int a = -1, b = -1;  // children
  };

  TestFunction() = default;

  int arity() const { return arity_; }
  bool empty() const { return root_ < 0; }

  double eval(std::span<const double> x) const;
  double eval1(double x) const { return eval(std::span<const double>(&x, 1)); }

  std::string print() const;

  struct GrowthBound {
    double lipschitz;  // valid for the sup-norm on the ball
    double sup;
  };
  // Conservative bounds on the closed ball max_i |x_i| <= radius.
  GrowthBound growth_bound(double radius) const;

  std::vector<int> referenced_vars() const;

  // var -> constant; result arity shrinks if the top variable disappears
  TestFunction substitute(int var, double value) const;

  bool structurally_equal(const TestFunction& other) const;

  const std::vector<Node>& nodes() const { return nodes_; }
  int root() const { return root_; }

  // ---- builders (fold constants, keep trees small) ----
  static TestFunction constant(double c);
  static TestFunction variable(int index);
  static TestFunction add(TestFunction a, TestFunction b);
  static TestFunction sub(TestFunction a, TestFunction b);
  static TestFunction mul(TestFunction a, TestFunction b);
  static TestFunction pow(TestFunction a, int k);
  static TestFunction min(TestFunction a, TestFunction b);
  static TestFunction max(TestFunction a, TestFunction b);
  static TestFunction abs(TestFunction a);
  static TestFunction neg(TestFunction a);
  static TestFunction scale(TestFunction a, double c) { return mul(constant(c), std::move(a)); }

 private:
  friend TestFunction parse(std::string_view);
  friend class Parser;

  int append(Node n);
  int merge_from(const TestFunction& other, int node);
  void refresh_arity();

  double eval_node(int idx, std::span<const double> x) const;

  std::vector<Node> nodes_;
  int root_ = -1;
  int arity_ = 0;
};

// Grammar:
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' uint)?
//   atom   := number | x<uint> | '(' expr ')'
//           | ('min'|'max') '(' expr ',' expr ')' | 'abs' '(' expr ')'
// Exponents above 12 are rejected (growth bounds would overflow).
TestFunction parse(std::string_view text);

inline constexpr int kMaxExponent = 12;

// f as a polynomial of total degree <= 2 in the "outer" variables with
// coefficient functions of the remaining variables:
//   f = a + sum_j b_j y_j + sum_{j<=k} c_jk y_j y_k.
// Succeeds only when the structure is syntactically visible (any subtree
// containing an outer variable must be built from +,-,*,^,neg and stay
// within degree two). This is what lets the layer recursion integrate a
// G-normal layer in closed form.
struct QuadraticForm {
  TestFunction constant_part;
  std::map<int, TestFunction> linear;                  // y_j coefficient
  std::map<std::pair<int, int>, TestFunction> quad;    // j <= k
};
std::optional<QuadraticForm> decompose_quadratic(const TestFunction& f,
                                                 const std::set<int>& outer_vars);

} // namespace gfield::phi
