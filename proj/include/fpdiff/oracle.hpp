#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "fpdiff/ast.hpp"
#include "fpdiff/classify.hpp"
#include "fpdiff/inputs.hpp"

namespace fpdiff {

/// Provider of the transcendental and rounding functions used by the
/// interpreter. Names are FP64 catalog spellings ("cos", "fmod").
class MathBackend {
 public:
  virtual ~MathBackend() = default;
  virtual std::string name() const = 0;
  virtual double call(std::string_view fn, std::span<const double> args) const = 0;
  virtual float call(std::string_view fn, std::span<const float> args) const = 0;
};

/// The host C math library (cos / cosf, ...).
std::shared_ptr<const MathBackend> host_math_backend();

struct EvalOptions {
  std::shared_ptr<const MathBackend> math = host_math_backend();
  /// FP32 programs only: evaluate expressions in binary64 and round to
  /// binary32 only when storing. Not IEEE binary32 semantics; it exists to
  /// demonstrate the difference from the strict path.
  bool wide_fp32_intermediates = false;
};

struct OracleResult {
  double comp = 0.0;  // final value, widened to double for FP32 programs
  Outcome outcome;
  std::string hexfloat;  // what a correct binary prints
};

/// Evaluates the program under strict IEEE-754 semantics in the program's
/// precision: round-to-nearest-even per operation, no contraction and no
/// reassociation. Throws EvalError on malformed programs or inputs.
OracleResult interpret(const ProgramAst& ast, const InputVector& input, const EvalOptions& options = {});

}  // namespace fpdiff
