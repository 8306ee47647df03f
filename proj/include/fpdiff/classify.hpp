#pragma once

#include <array>
#include <string>
#include <string_view>

#include "fpdiff/ast.hpp"

namespace fpdiff {

/// Outcome categories, in adjacency-matrix order.
enum class OutcomeTag { NaN = 0, Inf = 1, Zero = 2, Number = 3 };
inline constexpr std::array<OutcomeTag, 4> kOutcomeTags = {OutcomeTag::NaN, OutcomeTag::Inf,
                                                            OutcomeTag::Zero, OutcomeTag::Number};

std::string_view to_string(OutcomeTag t);

/// Categorized result of one run.
struct Outcome {
  OutcomeTag tag = OutcomeTag::Zero;
  bool negative = false;
  double value = 0.0;      // meaningful iff tag == Number
  bool subnormal = false;  // meaningful iff tag == Number

  static Outcome nan(bool negative = false);
  static Outcome inf(bool negative = false);
  static Outcome zero(bool negative = false);
  /// Categorizes a value; subnormality is judged against the precision.
  static Outcome from_value(double v, Precision p);

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

/// Compact text form stored in metadata: "+NaN", "-Inf", "+Zero",
/// "+Number(0x1.8p+1)", "-Number(0x0.000000000001p-1022,subnormal)".
std::string to_string(const Outcome& o);
Outcome outcome_from_string(std::string_view s);

/// `%a` rendering of a value, identical to what the emitted binaries print.
std::string hexfloat(double v);

/// Categorizes the single line a test binary prints. Accepts hexfloat and
/// decimal numbers and case-insensitive inf/nan with optional sign.
/// Throws ParseError on anything else.
Outcome parse_outcome(std::string_view stdout_line, Precision p);

/// Smallest positive normal number of the precision.
double smallest_normal(Precision p);

enum class DiscrepancyTag {
  NaN_vs_Inf,
  NaN_vs_Zero,
  NaN_vs_Num,
  Inf_vs_Zero,
  Inf_vs_Num,
  Num_vs_Zero,
  Num_vs_Num,
  Consistent,
};
inline constexpr int kDiscrepancyClassCount = 7;

std::string_view to_string(DiscrepancyTag t);
DiscrepancyTag discrepancy_tag_from_string(std::string_view s);

struct DiscrepancyClass {
  DiscrepancyTag tag = DiscrepancyTag::Consistent;
  /// Outcome tags of side a and side b, in that order.
  OutcomeTag side_a = OutcomeTag::Zero;
  OutcomeTag side_b = OutcomeTag::Zero;

  bool is_discrepancy() const { return tag != DiscrepancyTag::Consistent; }
  friend bool operator==(const DiscrepancyClass&, const DiscrepancyClass&) = default;
};

struct CompareOptions {
  /// 0 means bit-exact Number comparison; otherwise two Numbers agree when
  /// |a - b| <= relative_tolerance * max(|a|, |b|).
  double relative_tolerance = 0.0;
};

/// Unordered class of an outcome-tag pair (Consistent for equal tags).
DiscrepancyTag class_for_tags(OutcomeTag a, OutcomeTag b);

/// Compares two outcomes of the same test and input. Sign-only differences
/// of NaN, Inf and Zero are not discrepancies.
DiscrepancyClass compare_outcomes(const Outcome& a, const Outcome& b, const CompareOptions& options = {});

}  // namespace fpdiff
