#include "fpdiff/oracle.hpp"

#include <cmath>
#include <unordered_map>
#include <vector>

#include "fpdiff/error.hpp"

// This file must be built without floating-point contraction (see CMakeLists).

namespace fpdiff {

namespace {

class HostMath final : public MathBackend {
 public:
  std::string name() const override { return "host-libm"; }

  double call(std::string_view fn, std::span<const double> a) const override {
    if (fn == "cos") return std::cos(a[0]);
    if (fn == "sin") return std::sin(a[0]);
    if (fn == "sqrt") return std::sqrt(a[0]);
    if (fn == "ceil") return std::ceil(a[0]);
    if (fn == "floor") return std::floor(a[0]);
    if (fn == "fabs") return std::fabs(a[0]);
    if (fn == "cosh") return std::cosh(a[0]);
    if (fn == "exp") return std::exp(a[0]);
    if (fn == "log") return std::log(a[0]);
    if (fn == "tanh") return std::tanh(a[0]);
    if (fn == "asin") return std::asin(a[0]);
    if (fn == "acos") return std::acos(a[0]);
    if (fn == "atan") return std::atan(a[0]);
    if (fn == "fmod") return std::fmod(a[0], a[1]);
    if (fn == "pow") return std::pow(a[0], a[1]);
    throw EvalError("math backend has no function '" + std::string(fn) + "'");
  }

  float call(std::string_view fn, std::span<const float> a) const override {
    if (fn == "cos") return ::cosf(a[0]);
    if (fn == "sin") return ::sinf(a[0]);
    if (fn == "sqrt") return ::sqrtf(a[0]);
    if (fn == "ceil") return ::ceilf(a[0]);
    if (fn == "floor") return ::floorf(a[0]);
    if (fn == "fabs") return ::fabsf(a[0]);
    if (fn == "cosh") return ::coshf(a[0]);
    if (fn == "exp") return ::expf(a[0]);
    if (fn == "log") return ::logf(a[0]);
    if (fn == "tanh") return ::tanhf(a[0]);
    if (fn == "asin") return ::asinf(a[0]);
    if (fn == "acos") return ::acosf(a[0]);
    if (fn == "atan") return ::atanf(a[0]);
    if (fn == "fmod") return ::fmodf(a[0], a[1]);
    if (fn == "pow") return ::powf(a[0], a[1]);
    throw EvalError("math backend has no function '" + std::string(fn) + "'");
  }
};

// Store: type of declared variables. Compute: type expressions are evaluated in.
template <typename Store, typename Compute>
class Evaluator {
 public:
  Evaluator(const ProgramAst& ast, const MathBackend& math, Precision literal_precision)
      : ast_(ast), math_(math), literal_precision_(literal_precision) {}

  Store run(const InputVector& input) {
    if (input.values.size() != ast_.params.size()) {
      throw EvalError("input has " + std::to_string(input.values.size()) + " values, program expects " +
                      std::to_string(ast_.params.size()));
    }
    if (ast_.params.empty() || ast_.params[0].kind != Param::Kind::CompAccumulator) {
      throw EvalError("first parameter must be the comp accumulator");
    }
    for (std::size_t i = 0; i < ast_.params.size(); ++i) {
      const Param& p = ast_.params[i];
      const double v = input.values[i].numeric;
      switch (p.kind) {
        case Param::Kind::CompAccumulator: comp_ = static_cast<Store>(v); break;
        case Param::Kind::IntScalar: ints_[p.name] = static_cast<long long>(v); break;
        case Param::Kind::FpScalar: scalars_[p.name] = static_cast<Store>(v); break;
        case Param::Kind::FpArray:
          arrays_[p.name].assign(static_cast<std::size_t>(ast_.array_length), static_cast<Store>(v));
          break;
      }
    }
    block(ast_.body);
    if (!printed_) throw EvalError("program never prints comp");
    return printed_value_;
  }

 private:
  void block(const std::vector<Stmt>& body) {
    for (const Stmt& s : body) statement(s);
  }

  void statement(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::TempDecl: scalars_[s.name] = static_cast<Store>(eval(s.rhs)); return;
      case Stmt::Kind::Accumulate: {
        const Compute rhs = eval(s.rhs);
        const Compute lhs = static_cast<Compute>(comp_);
        Compute r;
        switch (s.accum) {
          case AccumOp::AddAssign: r = lhs + rhs; break;
          case AccumOp::SubAssign: r = lhs - rhs; break;
          default: r = lhs * rhs; break;
        }
        comp_ = static_cast<Store>(r);
        return;
      }
      case Stmt::Kind::ArrayStore: {
        const Compute v = eval(s.rhs);
        element(s.name, s.var) = static_cast<Store>(v);
        return;
      }
      case Stmt::Kind::ForLoop: {
        auto bound = ints_.find(s.name);
        if (bound == ints_.end()) throw EvalError("loop bound '" + s.name + "' is not an integer parameter");
        for (long long i = 0; i < bound->second; ++i) {
          ints_[s.var] = i;
          block(s.body);
        }
        ints_.erase(s.var);
        return;
      }
      case Stmt::Kind::IfBlock: {
        const Compute l = eval(s.lhs);
        const Compute r = eval(s.rhs);
        bool taken = false;
        switch (s.cmp) {
          case CmpOp::Eq: taken = l == r; break;
          case CmpOp::Gt: taken = l > r; break;
          case CmpOp::Lt: taken = l < r; break;
          case CmpOp::Ge: taken = l >= r; break;
          case CmpOp::Le: taken = l <= r; break;
        }
        if (taken) block(s.body);
        return;
      }
      case Stmt::Kind::PrintComp:
        printed_ = true;
        printed_value_ = comp_;
        return;
    }
  }

  Store& element(const std::string& array, const std::string& index_var) {
    auto a = arrays_.find(array);
    if (a == arrays_.end()) throw EvalError("'" + array + "' is not an array parameter");
    auto idx = ints_.find(index_var);
    if (idx == ints_.end()) throw EvalError("unbound index variable '" + index_var + "'");
    if (idx->second < 0 || idx->second >= static_cast<long long>(a->second.size())) {
      throw EvalError("index " + std::to_string(idx->second) + " out of bounds for '" + array + "'");
    }
    return a->second[static_cast<std::size_t>(idx->second)];
  }

  Compute eval(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Literal: return static_cast<Compute>(e.literal.value(literal_precision_));
      case Expr::Kind::CompRef: return static_cast<Compute>(comp_);
      case Expr::Kind::VarRef: {
        if (auto it = scalars_.find(e.name); it != scalars_.end()) return static_cast<Compute>(it->second);
        if (auto it = ints_.find(e.name); it != ints_.end()) return static_cast<Compute>(it->second);
        throw EvalError("unbound variable '" + e.name + "'");
      }
      case Expr::Kind::ArrayRef: return static_cast<Compute>(element(e.name, e.index));
      case Expr::Kind::Paren: return eval(e.args.at(0));
      case Expr::Kind::BinOp: {
        const Compute l = eval(e.args.at(0));
        const Compute r = eval(e.args.at(1));
        switch (e.op) {
          case BinaryOp::Add: return l + r;
          case BinaryOp::Sub: return l - r;
          case BinaryOp::Mul: return l * r;
          case BinaryOp::Div: return l / r;
        }
        throw EvalError("bad binary operator");
      }
      case Expr::Kind::MathCall: {
        const auto fn = find_math_function(e.name);
        if (!fn) throw EvalError("unknown math function '" + e.name + "'");
        if (static_cast<int>(e.args.size()) != fn->arity) {
          throw EvalError("wrong argument count for '" + e.name + "'");
        }
        Compute args[2] = {};
        for (std::size_t i = 0; i < e.args.size(); ++i) args[i] = eval(e.args[i]);
        return math_.call(fn->name, std::span<const Compute>(args, e.args.size()));
      }
    }
    throw EvalError("bad expression node");
  }

  const ProgramAst& ast_;
  const MathBackend& math_;
  Precision literal_precision_;
  Store comp_{};
  bool printed_ = false;
  Store printed_value_{};
  std::unordered_map<std::string, Store> scalars_;
  std::unordered_map<std::string, long long> ints_;
  std::unordered_map<std::string, std::vector<Store>> arrays_;
};

}  // namespace

std::shared_ptr<const MathBackend> host_math_backend() {
  static const auto backend = std::make_shared<const HostMath>();
  return backend;
}

OracleResult interpret(const ProgramAst& ast, const InputVector& input, const EvalOptions& options) {
  if (!options.math) throw EvalError("no math backend configured");
  double comp = 0.0;
  if (ast.precision == Precision::FP64) {
    comp = Evaluator<double, double>(ast, *options.math, Precision::FP64).run(input);
  } else if (options.wide_fp32_intermediates) {
    comp = static_cast<double>(Evaluator<float, double>(ast, *options.math, Precision::FP32).run(input));
  } else {
    comp = static_cast<double>(Evaluator<float, float>(ast, *options.math, Precision::FP32).run(input));
  }
  OracleResult r;
  r.comp = comp;
  r.outcome = Outcome::from_value(comp, ast.precision);
  r.hexfloat = hexfloat(comp);
  return r;
}

}  // namespace fpdiff
