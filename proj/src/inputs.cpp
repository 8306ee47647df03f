#include "fpdiff/inputs.hpp"

#include <cfloat>
#include <cmath>
#include <cstdlib>

#include "fpdiff/error.hpp"

namespace fpdiff {

std::string_view to_string(ValueClass c) {
  switch (c) {
    case ValueClass::PosZero: return "PosZero";
    case ValueClass::NegZero: return "NegZero";
    case ValueClass::Subnormal: return "Subnormal";
    case ValueClass::SmallNormal: return "SmallNormal";
    case ValueClass::LargeNormal: return "LargeNormal";
    case ValueClass::Moderate: return "Moderate";
  }
  return "?";
}

ValueClass value_class_from_string(std::string_view s) {
  for (auto c : kValueClasses) {
    if (to_string(c) == s) return c;
  }
  throw ConfigError("unknown value class '" + std::string(s) + "'");
}

bool in_class(double v, ValueClass c, Precision p) {
  const double a = std::fabs(v);
  const bool fp64 = p == Precision::FP64;
  const double min_normal = fp64 ? DBL_MIN : static_cast<double>(FLT_MIN);
  switch (c) {
    case ValueClass::PosZero: return v == 0.0 && !std::signbit(v);
    case ValueClass::NegZero: return v == 0.0 && std::signbit(v);
    case ValueClass::Subnormal: return a > 0.0 && a < min_normal;
    case ValueClass::SmallNormal: return a >= min_normal && a < (fp64 ? 1e-290 : 1e-30);
    case ValueClass::LargeNormal: return std::isfinite(a) && a > (fp64 ? 1e300 : 1e30);
    case ValueClass::Moderate: return a >= 1e-10 && a <= 1e10;
  }
  return false;
}

ClassWeights default_class_weights() {
  return {{ValueClass::Moderate, 0.2},  {ValueClass::LargeNormal, 0.2}, {ValueClass::SmallNormal, 0.2},
          {ValueClass::Subnormal, 0.2}, {ValueClass::PosZero, 0.1},     {ValueClass::NegZero, 0.1}};
}

std::vector<std::string> InputVector::argv() const {
  std::vector<std::string> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(v.rendered);
  return out;
}

namespace {

double parse_fp(const std::string& text, Precision p) {
  if (p == Precision::FP32) return static_cast<double>(std::strtof(text.c_str(), nullptr));
  return std::strtod(text.c_str(), nullptr);
}

// Decimal exponents that cover each class; samples are filtered by in_class.
IntRange exponent_window(ValueClass c, Precision p) {
  const bool fp64 = p == Precision::FP64;
  switch (c) {
    case ValueClass::Subnormal: return fp64 ? IntRange{-323, -308} : IntRange{-45, -38};
    case ValueClass::SmallNormal: return fp64 ? IntRange{-308, -291} : IntRange{-38, -31};
    case ValueClass::LargeNormal: return fp64 ? IntRange{300, 308} : IntRange{30, 38};
    default: return IntRange{-10, 10};
  }
}

}  // namespace

InputValue sample_value(ValueClass c, Precision p, Rng& rng) {
  InputValue v;
  v.value_class = c;
  if (c == ValueClass::PosZero || c == ValueClass::NegZero) {
    v.rendered = c == ValueClass::PosZero ? "+0.0" : "-0.0";
    v.numeric = c == ValueClass::PosZero ? 0.0 : -0.0;
    return v;
  }
  const IntRange window = exponent_window(c, p);
  Literal lit;
  for (;;) {
    lit.negative = rng.bernoulli(0.5);
    lit.exponent = static_cast<int>(rng.uniform_int(window.lo, window.hi));
    lit.lead_digit = static_cast<int>(rng.uniform_int(1, 9));
    for (char& ch : lit.fraction) ch = static_cast<char>('0' + rng.uniform_int(0, 9));
    v.rendered = lit.render_plain();
    v.numeric = parse_fp(v.rendered, p);
    if (in_class(v.numeric, c, p)) return v;
  }
}

InputValue parse_input_value(const Param& param, std::string_view rendered, Precision p) {
  InputValue v;
  v.param = param.name;
  v.kind = param.kind;
  v.rendered = std::string(rendered);
  if (param.kind == Param::Kind::IntScalar) {
    char* end = nullptr;
    const long n = std::strtol(v.rendered.c_str(), &end, 10);
    if (v.rendered.empty() || *end != '\0') throw ConfigError("malformed integer input '" + v.rendered + "'");
    v.numeric = static_cast<double>(n);
    return v;
  }
  char* end = nullptr;
  (void)std::strtod(v.rendered.c_str(), &end);
  if (v.rendered.empty() || *end != '\0') throw ConfigError("malformed floating-point input '" + v.rendered + "'");
  v.numeric = parse_fp(v.rendered, p);
  for (auto c : kValueClasses) {
    if (in_class(v.numeric, c, p)) {
      v.value_class = c;
      break;
    }
  }
  return v;
}

std::vector<InputVector> generate_input_vectors(const ProgramAst& ast, std::size_t count, std::uint64_t seed,
                                                const ClassWeights& weights, std::optional<IntRange> int_range) {
  std::vector<double> w;
  std::vector<ValueClass> classes;
  for (const auto& [cls, weight] : weights) {
    if (!(weight >= 0.0)) throw ConfigError("class weight for " + std::string(to_string(cls)) + " is negative");
    classes.push_back(cls);
    w.push_back(weight);
  }
  std::vector<InputVector> out;
  if (count == 0) return out;
  double total = 0.0;
  for (double x : w) total += x;
  if (!(total > 0.0)) throw ConfigError("class weights are all zero");

  const IntRange ints = int_range.value_or(IntRange{1, ast.array_length});
  if (ints.lo > ints.hi) throw ConfigError("empty integer input range");

  const std::string test_id = ast_signature(ast);
  Rng rng(derive_seed(seed, test_id));
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    InputVector vec;
    vec.test_id = test_id;
    for (const Param& param : ast.params) {
      InputValue v;
      if (param.kind == Param::Kind::IntScalar) {
        const auto n = rng.uniform_int(ints.lo, ints.hi);
        v.rendered = std::to_string(n);
        v.numeric = static_cast<double>(n);
      } else {
        v = sample_value(classes[rng.weighted_index(w)], ast.precision, rng);
      }
      v.param = param.name;
      v.kind = param.kind;
      vec.values.push_back(std::move(v));
    }
    out.push_back(std::move(vec));
  }
  return out;
}

}  // namespace fpdiff
