#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fpdiff/ast.hpp"
#include "fpdiff/program_gen.hpp"
#include "fpdiff/rng.hpp"

namespace fpdiff {

enum class ValueClass { PosZero, NegZero, Subnormal, SmallNormal, LargeNormal, Moderate };
inline constexpr ValueClass kValueClasses[] = {ValueClass::PosZero,     ValueClass::NegZero,
                                               ValueClass::Subnormal,   ValueClass::SmallNormal,
                                               ValueClass::LargeNormal, ValueClass::Moderate};

std::string_view to_string(ValueClass c);
ValueClass value_class_from_string(std::string_view s);

/// Membership test for a value already rounded to the precision.
bool in_class(double value, ValueClass c, Precision p);

using ClassWeights = std::map<ValueClass, double>;

/// Moderate, LargeNormal, SmallNormal, Subnormal 0.2 each; the two zeros 0.1 each.
ClassWeights default_class_weights();

struct InputValue {
  std::string param;
  Param::Kind kind = Param::Kind::FpScalar;
  /// Text passed on the command line: a decimal integer, `+0.0`/`-0.0`, or `±d.ddddE±n`.
  std::string rendered;
  /// Value the binary obtains from `rendered`, widened to double.
  double numeric = 0.0;
  std::optional<ValueClass> value_class;  // floating-point values only
};

struct InputVector {
  std::string test_id;
  std::vector<InputValue> values;

  /// Command-line arguments, in parameter order.
  std::vector<std::string> argv() const;
};

/// Draws one value of the class, rendered with a four-digit mantissa.
InputValue sample_value(ValueClass c, Precision p, Rng& rng);

/// Rebuilds an input value from its rendered text (as stored in metadata).
InputValue parse_input_value(const Param& param, std::string_view rendered, Precision p);

/// Generates `count` input vectors for the program. Deterministic in
/// (ast_signature(ast), seed). Integer parameters are drawn uniformly from
/// `int_range`, which defaults to [1, ast.array_length].
std::vector<InputVector> generate_input_vectors(const ProgramAst& ast, std::size_t count, std::uint64_t seed,
                                                const ClassWeights& weights = default_class_weights(),
                                                std::optional<IntRange> int_range = std::nullopt);

}  // namespace fpdiff
