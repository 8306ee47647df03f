#include "fpdiff/classify.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "fpdiff/error.hpp"

namespace fpdiff {

std::string_view to_string(OutcomeTag t) {
  switch (t) {
    case OutcomeTag::NaN: return "NaN";
    case OutcomeTag::Inf: return "Inf";
    case OutcomeTag::Zero: return "Zero";
    case OutcomeTag::Number: return "Number";
  }
  return "?";
}

Outcome Outcome::nan(bool negative) { return {OutcomeTag::NaN, negative, 0.0, false}; }
Outcome Outcome::inf(bool negative) { return {OutcomeTag::Inf, negative, 0.0, false}; }
Outcome Outcome::zero(bool negative) { return {OutcomeTag::Zero, negative, 0.0, false}; }

double smallest_normal(Precision p) {
  return p == Precision::FP64 ? DBL_MIN : static_cast<double>(FLT_MIN);
}

Outcome Outcome::from_value(double v, Precision p) {
  const bool neg = std::signbit(v);
  if (std::isnan(v)) return nan(neg);
  if (std::isinf(v)) return inf(neg);
  if (v == 0.0) return zero(neg);
  return {OutcomeTag::Number, neg, v, std::fabs(v) < smallest_normal(p)};
}

std::string hexfloat(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

std::string to_string(const Outcome& o) {
  std::string out(1, o.negative ? '-' : '+');
  out += to_string(o.tag);
  if (o.tag == OutcomeTag::Number) {
    out += '(';
    out += hexfloat(std::fabs(o.value));
    if (o.subnormal) out += ",subnormal";
    out += ')';
  }
  return out;
}

Outcome outcome_from_string(std::string_view s) {
  auto fail = [&]() -> Outcome { throw ParseError(std::string(s)); };
  if (s.size() < 2 || (s[0] != '+' && s[0] != '-')) return fail();
  const bool neg = s[0] == '-';
  const std::string_view rest = s.substr(1);
  if (rest == "NaN") return Outcome::nan(neg);
  if (rest == "Inf") return Outcome::inf(neg);
  if (rest == "Zero") return Outcome::zero(neg);
  if (rest.starts_with("Number(") && rest.ends_with(")")) {
    std::string inner(rest.substr(7, rest.size() - 8));
    Outcome o{OutcomeTag::Number, neg, 0.0, false};
    if (const auto comma = inner.find(','); comma != std::string::npos) {
      if (inner.substr(comma + 1) != "subnormal") return fail();
      o.subnormal = true;
      inner.resize(comma);
    }
    char* end = nullptr;
    o.value = std::strtod(inner.c_str(), &end);
    if (inner.empty() || *end != '\0' || inner[0] == '-' || inner[0] == '+') return fail();
    if (neg) o.value = -o.value;
    return o;
  }
  return fail();
}

Outcome parse_outcome(std::string_view line, Precision p) {
  const auto first = line.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw ParseError(std::string(line));
  const auto last = line.find_last_not_of(" \t\r\n");
  const std::string text(line.substr(first, last - first + 1));

  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  bool neg = false;
  std::string_view body = lower;
  if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
    neg = body[0] == '-';
    body.remove_prefix(1);
  }
  if (body == "nan" || (body.starts_with("nan(") && body.ends_with(")"))) return Outcome::nan(neg);
  if (body == "inf" || body == "infinity") return Outcome::inf(neg);

  // Numbers must start with a digit or '.' after the optional sign.
  if (body.empty() || !(std::isdigit(static_cast<unsigned char>(body[0])) || body[0] == '.')) {
    throw ParseError(std::string(line));
  }
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) throw ParseError(std::string(line));
  return Outcome::from_value(v, p);
}

std::string_view to_string(DiscrepancyTag t) {
  switch (t) {
    case DiscrepancyTag::NaN_vs_Inf: return "NaN_vs_Inf";
    case DiscrepancyTag::NaN_vs_Zero: return "NaN_vs_Zero";
    case DiscrepancyTag::NaN_vs_Num: return "NaN_vs_Num";
    case DiscrepancyTag::Inf_vs_Zero: return "Inf_vs_Zero";
    case DiscrepancyTag::Inf_vs_Num: return "Inf_vs_Num";
    case DiscrepancyTag::Num_vs_Zero: return "Num_vs_Zero";
    case DiscrepancyTag::Num_vs_Num: return "Num_vs_Num";
    case DiscrepancyTag::Consistent: return "Consistent";
  }
  return "?";
}

DiscrepancyTag discrepancy_tag_from_string(std::string_view s) {
  for (int i = 0; i <= kDiscrepancyClassCount; ++i) {
    const auto t = static_cast<DiscrepancyTag>(i);
    if (to_string(t) == s) return t;
  }
  throw ParseError(std::string(s));
}

DiscrepancyTag class_for_tags(OutcomeTag a, OutcomeTag b) {
  if (a == b) return DiscrepancyTag::Consistent;
  if (static_cast<int>(a) > static_cast<int>(b)) std::swap(a, b);
  using T = OutcomeTag;
  if (a == T::NaN && b == T::Inf) return DiscrepancyTag::NaN_vs_Inf;
  if (a == T::NaN && b == T::Zero) return DiscrepancyTag::NaN_vs_Zero;
  if (a == T::NaN && b == T::Number) return DiscrepancyTag::NaN_vs_Num;
  if (a == T::Inf && b == T::Zero) return DiscrepancyTag::Inf_vs_Zero;
  if (a == T::Inf && b == T::Number) return DiscrepancyTag::Inf_vs_Num;
  return DiscrepancyTag::Num_vs_Zero;
}

DiscrepancyClass compare_outcomes(const Outcome& a, const Outcome& b, const CompareOptions& options) {
  DiscrepancyClass c;
  c.side_a = a.tag;
  c.side_b = b.tag;
  if (a.tag != b.tag) {
    c.tag = class_for_tags(a.tag, b.tag);
    return c;
  }
  if (a.tag != OutcomeTag::Number) {
    c.tag = DiscrepancyTag::Consistent;
    return c;
  }
  bool same = std::bit_cast<std::uint64_t>(a.value) == std::bit_cast<std::uint64_t>(b.value);
  if (!same && options.relative_tolerance > 0.0) {
    const double scale = std::max(std::fabs(a.value), std::fabs(b.value));
    same = std::fabs(a.value - b.value) <= options.relative_tolerance * scale;
  }
  c.tag = same ? DiscrepancyTag::Consistent : DiscrepancyTag::Num_vs_Num;
  return c;
}

}  // namespace fpdiff
