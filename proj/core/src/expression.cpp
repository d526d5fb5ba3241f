#include "sladm/expression.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <utility>

#include "sladm/error.hpp"

namespace sladm::realline {

namespace detail {

enum class Op : unsigned char {
  push_const,
  push_x,
  neg,
  add,
  sub,
  mul,
  div,
  pow,
  sqrt,
  exp,
  log,
  sin,
  cos,
  tan,
  abs,
  sinh,
  cosh,
  tanh,
  atan,
  min,
  max,
};

struct Node {
  Op op;
  double value = 0.0;
  std::vector<std::unique_ptr<Node>> args;
};

// Postfix program compiled from the tree; evaluation uses a fixed stack.
struct Program {
  struct Instr {
    Op op;
    double value;
  };
  std::vector<Instr> code;
  std::size_t max_depth = 0;
  std::unique_ptr<Node> tree;
};

namespace {

struct FunctionInfo {
  std::string_view name;
  Op op;
  int arity;
};

constexpr std::array<FunctionInfo, 15> kFunctions{{
    {"sqrt", Op::sqrt, 1},
    {"exp", Op::exp, 1},
    {"log", Op::log, 1},
    {"ln", Op::log, 1},
    {"sin", Op::sin, 1},
    {"cos", Op::cos, 1},
    {"tan", Op::tan, 1},
    {"abs", Op::abs, 1},
    {"sinh", Op::sinh, 1},
    {"cosh", Op::cosh, 1},
    {"tanh", Op::tanh, 1},
    {"atan", Op::atan, 1},
    {"pow", Op::pow, 2},
    {"min", Op::min, 2},
    {"max", Op::max, 2},
}};

std::string_view op_name(Op op) {
  for (const auto& f : kFunctions) {
    if (f.op == op) return f.name;
  }
  return "?";
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::unique_ptr<Node> parse() {
    auto node = expr();
    skip_ws();
    if (pos_ != text_.size()) {
      throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "'",
                       pos_);
    }
    return node;
  }

 private:
  static std::unique_ptr<Node> make(Op op, double value = 0.0) {
    auto n = std::make_unique<Node>();
    n->op = op;
    n->value = value;
    return n;
  }

  static std::unique_ptr<Node> binary(Op op, std::unique_ptr<Node> lhs,
                                      std::unique_ptr<Node> rhs) {
    auto n = make(op);
    n->args.push_back(std::move(lhs));
    n->args.push_back(std::move(rhs));
    return n;
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool starts_with(std::string_view s) const {
    return text_.substr(pos_, s.size()) == s;
  }

  // Returns the operator at the cursor (consuming it) if it is one of `ops`.
  std::optional<char> accept_operator(std::string_view ops) {
    skip_ws();
    if (pos_ >= text_.size()) return std::nullopt;
    char c = text_[pos_];
    std::size_t width = 1;
    if (starts_with("\xC3\x97")) {
      c = '*';
      width = 2;
    } else if (starts_with("\xC3\xB7")) {
      c = '/';
      width = 2;
    } else if (starts_with("\xE2\x88\x92")) {
      c = '-';
      width = 3;
    }
    if (ops.find(c) == std::string_view::npos) return std::nullopt;
    pos_ += width;
    return c;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) {
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
    ++pos_;
  }

  std::unique_ptr<Node> expr() {
    auto lhs = term();
    while (auto c = accept_operator("+-")) {
      lhs = binary(*c == '+' ? Op::add : Op::sub, std::move(lhs), term());
    }
    return lhs;
  }

  std::unique_ptr<Node> term() {
    auto lhs = unary();
    while (auto c = accept_operator("*/")) {
      lhs = binary(*c == '*' ? Op::mul : Op::div, std::move(lhs), unary());
    }
    return lhs;
  }

  std::unique_ptr<Node> unary() {
    if (auto c = accept_operator("+-")) {
      auto operand = unary();
      if (*c == '+') return operand;
      auto n = make(Op::neg);
      n->args.push_back(std::move(operand));
      return n;
    }
    return power();
  }

  std::unique_ptr<Node> power() {
    auto base = primary();
    if (accept_operator("^")) {
      return binary(Op::pow, std::move(base), unary());
    }
    return base;
  }

  std::unique_ptr<Node> primary() {
    skip_ws();
    if (pos_ >= text_.size()) {
      throw ParseError("unexpected end of expression", pos_);
    }
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto inner = expr();
      expect(')');
      return inner;
    }
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return identifier();
    }
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  std::unique_ptr<Node> number() {
    const std::size_t start = pos_;
    double value = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr == first) {
      throw ParseError("malformed number", start);
    }
    pos_ += static_cast<std::size_t>(ptr - first);
    return make(Op::push_const, value);
  }

  std::unique_ptr<Node> identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return make(Op::push_x);
    if (name == "pi") return make(Op::push_const, std::numbers::pi);
    if (name == "e") return make(Op::push_const, std::numbers::e);

    for (const auto& f : kFunctions) {
      if (f.name != name) continue;
      expect('(');
      auto n = make(f.op);
      n->args.push_back(expr());
      for (int i = 1; i < f.arity; ++i) {
        expect(',');
        n->args.push_back(expr());
      }
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == ',') {
        throw ParseError("too many arguments to '" + std::string(name) + "'",
                         pos_);
      }
      expect(')');
      return n;
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void compile(const Node& node, Program& program, std::size_t depth) {
  for (std::size_t i = 0; i < node.args.size(); ++i) {
    compile(*node.args[i], program, depth + i);
  }
  program.code.push_back({node.op, node.value});
  program.max_depth = std::max(program.max_depth, depth + 1);
}

std::string format_literal(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (v < 0) s = "(" + s + ")";
  return s;
}

std::string render(const Node& n) {
  switch (n.op) {
    case Op::push_const:
      return format_literal(n.value);
    case Op::push_x:
      return "x";
    case Op::neg:
      return "(-" + render(*n.args[0]) + ")";
    case Op::add:
      return "(" + render(*n.args[0]) + " + " + render(*n.args[1]) + ")";
    case Op::sub:
      return "(" + render(*n.args[0]) + " - " + render(*n.args[1]) + ")";
    case Op::mul:
      return "(" + render(*n.args[0]) + " * " + render(*n.args[1]) + ")";
    case Op::div:
      return "(" + render(*n.args[0]) + " / " + render(*n.args[1]) + ")";
    case Op::pow:
      return "(" + render(*n.args[0]) + " ^ " + render(*n.args[1]) + ")";
    default: {
      std::string s(op_name(n.op));
      s += "(";
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) s += ", ";
        s += render(*n.args[i]);
      }
      return s + ")";
    }
  }
}

double run(const Program& program, double x) noexcept {
  // Expressions deeper than this are rejected at parse time.
  constexpr std::size_t kMaxStack = 256;
  std::array<double, kMaxStack> stack;
  std::size_t sp = 0;
  for (const auto& ins : program.code) {
    switch (ins.op) {
      case Op::push_const:
        stack[sp++] = ins.value;
        break;
      case Op::push_x:
        stack[sp++] = x;
        break;
      case Op::neg:
        stack[sp - 1] = -stack[sp - 1];
        break;
      case Op::add:
        --sp;
        stack[sp - 1] += stack[sp];
        break;
      case Op::sub:
        --sp;
        stack[sp - 1] -= stack[sp];
        break;
      case Op::mul:
        --sp;
        stack[sp - 1] *= stack[sp];
        break;
      case Op::div:
        --sp;
        stack[sp - 1] /= stack[sp];
        break;
      case Op::pow:
        --sp;
        stack[sp - 1] = std::pow(stack[sp - 1], stack[sp]);
        break;
      case Op::min:
        --sp;
        stack[sp - 1] = std::min(stack[sp - 1], stack[sp]);
        break;
      case Op::max:
        --sp;
        stack[sp - 1] = std::max(stack[sp - 1], stack[sp]);
        break;
      case Op::sqrt:
        stack[sp - 1] = std::sqrt(stack[sp - 1]);
        break;
      case Op::exp:
        stack[sp - 1] = std::exp(stack[sp - 1]);
        break;
      case Op::log:
        stack[sp - 1] = std::log(stack[sp - 1]);
        break;
      case Op::sin:
        stack[sp - 1] = std::sin(stack[sp - 1]);
        break;
      case Op::cos:
        stack[sp - 1] = std::cos(stack[sp - 1]);
        break;
      case Op::tan:
        stack[sp - 1] = std::tan(stack[sp - 1]);
        break;
      case Op::abs:
        stack[sp - 1] = std::fabs(stack[sp - 1]);
        break;
      case Op::sinh:
        stack[sp - 1] = std::sinh(stack[sp - 1]);
        break;
      case Op::cosh:
        stack[sp - 1] = std::cosh(stack[sp - 1]);
        break;
      case Op::tanh:
        stack[sp - 1] = std::tanh(stack[sp - 1]);
        break;
      case Op::atan:
        stack[sp - 1] = std::atan(stack[sp - 1]);
        break;
    }
  }
  return stack[0];
}

}  // namespace
}  // namespace detail

RealFunction::RealFunction() : RealFunction(parse_function("0")) {}

RealFunction::RealFunction(std::shared_ptr<const detail::Program> program,
                           std::string source)
    : program_(std::move(program)), source_(std::move(source)) {}

double RealFunction::eval_unchecked(double x) const noexcept {
  return detail::run(*program_, x);
}

double RealFunction::operator()(double x) const {
  const double y = detail::run(*program_, x);
  if (!std::isfinite(y)) {
    throw EvaluationError("'" + source_ + "' is not finite", x);
  }
  return y;
}

std::string RealFunction::to_string() const {
  return detail::render(*program_->tree);
}

RealFunction RealFunction::with_claims(Positivity positivity,
                                       Parity parity) const {
  RealFunction copy = *this;
  copy.positivity_ = positivity;
  copy.parity_ = parity;
  return copy;
}

std::vector<std::string> RealFunction::check_claims(
    const std::vector<double>& probes, double tol) const {
  std::vector<std::string> violations;
  auto describe = [&](const std::string& what, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, " at x = %.17g", x);
    violations.push_back(what + buf);
  };
  for (double x : probes) {
    const double fx = eval_unchecked(x);
    if (!std::isfinite(fx)) {
      describe("non-finite value", x);
      continue;
    }
    if (positivity_ == Positivity::nonnegative && fx < 0) {
      describe("negative value contradicts nonnegative claim", x);
    }
    if (positivity_ == Positivity::strictly_positive && fx <= 0) {
      describe("non-positive value contradicts positive claim", x);
    }
    if (parity_ != Parity::none) {
      const double fm = eval_unchecked(-x);
      const double mismatch =
          parity_ == Parity::even ? std::fabs(fx - fm) : std::fabs(fx + fm);
      if (!(mismatch <= tol * (1.0 + std::fabs(fx)))) {
        describe(parity_ == Parity::even ? "even-parity claim fails"
                                         : "odd-parity claim fails",
                 x);
      }
    }
  }
  return violations;
}

ScalarFn RealFunction::as_function() const {
  return [self = *this](double x) { return self(x); };
}

RealFunction parse_function(std::string_view text) {
  std::size_t first = 0;
  while (first < text.size() && (text[first] == ' ' || text[first] == '\t')) {
    ++first;
  }
  if (first == text.size()) throw ParseError("empty expression", 0);

  auto program = std::make_shared<detail::Program>();
  program->tree = detail::Parser(text).parse();
  detail::compile(*program->tree, *program, 0);
  if (program->max_depth > 256) {
    throw ParseError("expression nests too deeply", 0);
  }

  return RealFunction(std::move(program), std::string(text));
}

RealFunction constant_function(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return parse_function(value < 0 ? "0" + std::string(buf) : buf);
}

}  // namespace sladm::realline
