#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fpdiff/ast.hpp"
#include "fpdiff/rng.hpp"

namespace fpdiff {

struct IntRange {
  int lo = 0;
  int hi = 0;
  bool contains(int v) const { return lo <= v && v <= hi; }
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

/// Decimal exponents whose `d.dddd` literals are representable (possibly as
/// subnormals) in the precision: [-323, 308] for binary64, [-45, 38] for binary32.
IntRange representable_exponent_span(Precision p);

struct GenConfig {
  Precision precision = Precision::FP64;
  int max_loop_nesting = 3;
  int max_stmts_per_block = 4;
  int num_fp_params = 6;
  int num_int_params = 1;
  /// Probability that a floating-point parameter is an array rather than a scalar.
  double array_probability = 0.2;
  std::vector<std::string> math_fn_set;
  IntRange literal_exponent_range{-323, 308};
  IntRange loop_bound_range{1, 10};
  std::uint64_t seed = 0;

  // Production shaping.
  int max_expr_nodes = 6;
  double math_call_probability = 0.25;
  double zero_literal_probability = 0.05;
  bool allow_mul_accumulate = true;
  bool allow_nested_if = false;

  /// Defaults for the precision: full catalog, full exponent span.
  static GenConfig for_precision(Precision p, std::uint64_t seed = 0);

  friend bool operator==(const GenConfig&, const GenConfig&) = default;
};

/// Throws ConfigError if the configuration violates its invariants.
void validate(const GenConfig& config);

/// Samples a nonzero literal whose exponent lies in the configured range.
/// Values that would round to zero or overflow in the precision are resampled.
Literal sample_literal(const GenConfig& config, Rng& rng);

/// Generates a random kernel. The result depends only on `config`.
ProgramAst generate_program(const GenConfig& config);

/// Stable content hash of the program, used as the cross-platform test id.
std::string ast_signature(const ProgramAst& ast);

}  // namespace fpdiff
