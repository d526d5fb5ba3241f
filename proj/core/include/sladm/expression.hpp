#pragma once

// Expression-defined real functions of one variable.
//
// Grammar (whitespace is insignificant):
//
//   expr    := term { ('+' | '-') term }
//   term    := unary { ('*' | '/') unary }
//   unary   := ('+' | '-') unary | power
//   power   := primary [ '^' unary ]            (right associative)
//   primary := number | 'x' | constant | name '(' expr { ',' expr } ')'
//            | '(' expr ')'
//   constant:= 'pi' | 'e'
//   name    := sqrt | exp | log | ln | sin | cos | tan | abs | pow | min
//            | max | sinh | cosh | tanh | atan
//
// The UTF-8 glyphs U+00D7 (multiplication), U+00F7 (division) and U+2212
// (minus) are accepted as aliases of '*', '/' and '-'.

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace sladm::realline {

using ScalarFn = std::function<double(double)>;

enum class Positivity { unknown, nonnegative, strictly_positive };
enum class Parity { none, even, odd };

namespace detail {
struct Program;
}

/// A parsed scalar expression in the variable `x`.
///
/// Immutable and cheap to copy; evaluation is reentrant. `operator()` throws
/// EvaluationError when the result is not a finite number.
class RealFunction {
 public:
  RealFunction();  // the zero function

  double operator()(double x) const;

  /// Same as operator() but returns NaN instead of throwing.
  double eval_unchecked(double x) const noexcept;

  /// Fully parenthesized infix form; parsing it back yields the same values.
  std::string to_string() const;

  const std::string& source() const noexcept { return source_; }

  Positivity claimed_positivity() const noexcept { return positivity_; }
  Parity claimed_parity() const noexcept { return parity_; }
  RealFunction with_claims(Positivity positivity, Parity parity) const;

  /// Spot-checks the claimed metadata at the given probe points and returns a
  /// human readable description of every violation (empty when consistent).
  std::vector<std::string> check_claims(const std::vector<double>& probes,
                                        double tol = 1e-9) const;

  ScalarFn as_function() const;

 private:
  friend RealFunction parse_function(std::string_view text);
  RealFunction(std::shared_ptr<const detail::Program> program,
               std::string source);

  std::shared_ptr<const detail::Program> program_;
  std::string source_;
  Positivity positivity_ = Positivity::unknown;
  Parity parity_ = Parity::none;
};

/// Parses `text`; throws ParseError on syntax errors and unknown identifiers.
RealFunction parse_function(std::string_view text);

RealFunction constant_function(double value);

}  // namespace sladm::realline
