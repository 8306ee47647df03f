#include "fpdiff/program_gen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fpdiff/ast_json.hpp"
#include "fpdiff/error.hpp"

namespace fpdiff {

IntRange representable_exponent_span(Precision p) {
  return p == Precision::FP64 ? IntRange{-323, 308} : IntRange{-45, 38};
}

GenConfig GenConfig::for_precision(Precision p, std::uint64_t seed) {
  GenConfig c;
  c.precision = p;
  c.literal_exponent_range = representable_exponent_span(p);
  c.seed = seed;
  for (const auto& fn : math_catalog()) c.math_fn_set.emplace_back(fn.name);
  return c;
}

void validate(const GenConfig& c) {
  auto fail = [](const std::string& msg) { throw ConfigError("invalid generator config: " + msg); };
  if (c.max_loop_nesting < 0) fail("max_loop_nesting must be non-negative");
  if (c.max_stmts_per_block < 0) fail("max_stmts_per_block must be non-negative");
  if (c.num_fp_params < 0 || c.num_int_params < 0) fail("parameter counts must be non-negative");
  if (c.max_expr_nodes < 1) fail("max_expr_nodes must be at least 1");
  for (double p : {c.array_probability, c.math_call_probability, c.zero_literal_probability}) {
    if (!(p >= 0.0 && p <= 1.0)) fail("probabilities must lie in [0, 1]");
  }
  const IntRange span = representable_exponent_span(c.precision);
  const IntRange& er = c.literal_exponent_range;
  if (er.lo > er.hi || !span.contains(er.lo) || !span.contains(er.hi)) {
    fail("literal_exponent_range [" + std::to_string(er.lo) + ", " + std::to_string(er.hi) +
         "] outside the representable span [" + std::to_string(span.lo) + ", " +
         std::to_string(span.hi) + "] of " + std::string(to_string(c.precision)));
  }
  if (c.loop_bound_range.lo < 1 || c.loop_bound_range.lo > c.loop_bound_range.hi) {
    fail("loop_bound_range must be a non-empty interval of positive integers");
  }
  for (const auto& name : c.math_fn_set) {
    auto fn = find_math_function(name);
    if (!fn || fn->name != name) fail("math function '" + name + "' is not in the catalog");
  }
  if (c.math_fn_set.empty() && c.math_call_probability > 0.0) {
    fail("math_fn_set is empty but math_call_probability is nonzero");
  }
}

Literal sample_literal(const GenConfig& config, Rng& rng) {
  Literal lit;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    lit.negative = rng.bernoulli(0.5);
    lit.exponent = static_cast<int>(
        rng.uniform_int(config.literal_exponent_range.lo, config.literal_exponent_range.hi));
    lit.lead_digit = static_cast<int>(rng.uniform_int(1, 9));
    for (char& c : lit.fraction) c = static_cast<char>('0' + rng.uniform_int(0, 9));
    const double v = lit.value(config.precision);
    if (std::isfinite(v) && v != 0.0) return lit;
  }
  // Only reachable for degenerate ranges at the very edge of the span.
  lit.lead_digit = 1;
  lit.fraction = "0000";
  return lit;
}

namespace {

std::string induction_name(int depth) {
  static constexpr std::string_view letters = "ijklmnpqrs";
  if (depth < static_cast<int>(letters.size())) return std::string(1, letters[depth]);
  return "i_" + std::to_string(depth);
}

class ProgramGenerator {
 public:
  explicit ProgramGenerator(const GenConfig& config) : config_(config), rng_(config.seed) {}

  ProgramAst run() {
    ProgramAst ast;
    ast.precision = config_.precision;
    ast.array_length = config_.loop_bound_range.hi;
    ast.params.push_back({"comp", Param::Kind::CompAccumulator});
    int next_var = 1;
    for (int i = 0; i < config_.num_int_params; ++i) {
      std::string name = "var_" + std::to_string(next_var++);
      int_params_.push_back(name);
      ast.params.push_back({name, Param::Kind::IntScalar});
    }
    for (int i = 0; i < config_.num_fp_params; ++i) {
      std::string name = "var_" + std::to_string(next_var++);
      if (rng_.bernoulli(config_.array_probability)) {
        arrays_.push_back(name);
        ast.params.push_back({name, Param::Kind::FpArray});
      } else {
        fp_scalars_.push_back(name);
        ast.params.push_back({name, Param::Kind::FpScalar});
      }
    }
    ast.body = block(0);
    ast.body.push_back(Stmt::print_comp());
    return ast;
  }

 private:
  std::vector<Stmt> block(int loop_depth) {
    std::vector<Stmt> out;
    if (config_.max_stmts_per_block == 0) return out;
    scopes_.emplace_back();
    const auto count = rng_.uniform_int(1, config_.max_stmts_per_block);
    for (std::int64_t n = 0; n < count; ++n) out.push_back(statement(loop_depth));
    scopes_.pop_back();
    return out;
  }

  Stmt statement(int loop_depth) {
    enum { kTemp, kAccum, kStore, kLoop, kIf };
    const bool in_loop = !loop_vars_.empty();
    double weights[5] = {2.0, 4.0, 0.0, 0.0, 0.0};
    if (in_loop && !arrays_.empty()) weights[kStore] = 2.0;
    if (loop_depth < config_.max_loop_nesting && !int_params_.empty()) weights[kLoop] = 2.0;
    if (if_depth_ == 0 || config_.allow_nested_if) weights[kIf] = 1.0;

    switch (rng_.weighted_index(weights)) {
      case kTemp: {
        Expr init = expression();
        std::string name = "tmp_" + std::to_string(++temp_counter_);
        scopes_.back().push_back(name);
        return Stmt::temp_decl(std::move(name), std::move(init));
      }
      case kStore: {
        std::string array = pick(arrays_);
        std::string index = pick(loop_vars_);
        return Stmt::array_store(std::move(array), std::move(index), expression());
      }
      case kLoop: {
        std::string bound = pick(int_params_);
        std::string var = induction_name(loop_depth);
        loop_vars_.push_back(var);
        std::vector<Stmt> body = block(loop_depth + 1);
        loop_vars_.pop_back();
        return Stmt::for_loop(std::move(bound), std::move(var), std::move(body));
      }
      case kIf: {
        static constexpr CmpOp kCmps[] = {CmpOp::Eq, CmpOp::Gt, CmpOp::Lt, CmpOp::Ge, CmpOp::Le};
        const CmpOp cmp = kCmps[rng_.uniform_int(0, 4)];
        Expr rhs = expression();
        ++if_depth_;
        std::vector<Stmt> body = block(loop_depth);
        --if_depth_;
        return Stmt::if_block(Expr::comp(), cmp, std::move(rhs), std::move(body));
      }
      default: {
        const int n_ops = config_.allow_mul_accumulate ? 3 : 2;
        static constexpr AccumOp kOps[] = {AccumOp::AddAssign, AccumOp::SubAssign, AccumOp::MulAssign};
        const AccumOp op = kOps[rng_.uniform_int(0, n_ops - 1)];
        return Stmt::accumulate(op, expression());
      }
    }
  }

  Expr expression() { return expr(static_cast<int>(rng_.uniform_int(1, config_.max_expr_nodes))); }

  // Builds a tree of at most `budget` nodes.
  Expr expr(int budget) {
    if (budget <= 1) return leaf();
    enum { kLeaf, kBin, kParen, kCall };
    double weights[4] = {1.0, 0.0, 0.0, 0.0};
    if (budget >= 3) weights[kBin] = 4.0;
    if (budget >= 4) weights[kParen] = 1.0;
    const double structural = weights[kLeaf] + weights[kBin] + weights[kParen];
    const auto callable = callable_functions(budget);
    if (!callable.empty() && config_.math_call_probability > 0.0) {
      // Calls take `math_call_probability` of the mass among eligible shapes.
      const double p = std::min(config_.math_call_probability, 0.999);
      weights[kCall] = structural * p / (1.0 - p);
    }
    switch (rng_.weighted_index(weights)) {
      case kBin: return binary(budget);
      case kParen: return Expr::paren(binary(budget - 1));
      case kCall: {
        const std::string& base = callable[rng_.uniform_int(0, callable.size() - 1)];
        const int arity = find_math_function(base)->arity;
        std::vector<Expr> args;
        if (arity == 1) {
          args.push_back(expr(budget - 1));
        } else {
          const int left = static_cast<int>(rng_.uniform_int(1, budget - 2));
          args.push_back(expr(left));
          args.push_back(expr(budget - 1 - left));
        }
        return Expr::call(math_function_name(base, config_.precision), std::move(args));
      }
      default: return leaf();
    }
  }

  Expr binary(int budget) {
    if (budget < 3) return leaf();
    static constexpr BinaryOp kOps[] = {BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div};
    const BinaryOp op = kOps[rng_.uniform_int(0, 3)];
    const int left = static_cast<int>(rng_.uniform_int(1, budget - 2));
    Expr lhs = expr(left);
    Expr rhs = expr(budget - 1 - left);
    return Expr::bin(op, std::move(lhs), std::move(rhs));
  }

  std::vector<std::string> callable_functions(int budget) const {
    std::vector<std::string> out;
    for (const auto& name : config_.math_fn_set) {
      const auto fn = find_math_function(name);
      if (fn && fn->arity + 1 <= budget) out.push_back(name);
    }
    return out;
  }

  Expr leaf() {
    enum { kLit, kVar, kArr, kComp };
    std::vector<std::string> vars = fp_scalars_;
    for (const auto& scope : scopes_) vars.insert(vars.end(), scope.begin(), scope.end());
    double weights[4] = {3.0, vars.empty() ? 0.0 : 4.0,
                         (!loop_vars_.empty() && !arrays_.empty()) ? 2.0 : 0.0, 1.0};
    switch (rng_.weighted_index(weights)) {
      case kVar: return Expr::var(pick(vars));
      case kArr: {
        std::string array = pick(arrays_);
        return Expr::array_ref(std::move(array), pick(loop_vars_));
      }
      case kComp: return Expr::comp();
      default: {
        if (rng_.bernoulli(config_.zero_literal_probability)) {
          Literal zero;
          zero.negative = rng_.bernoulli(0.5);
          zero.lead_digit = 0;
          return Expr::lit(zero);
        }
        return Expr::lit(sample_literal(config_, rng_));
      }
    }
  }

  std::string pick(const std::vector<std::string>& items) {
    return items[static_cast<std::size_t>(rng_.uniform_int(0, static_cast<std::int64_t>(items.size()) - 1))];
  }

  const GenConfig& config_;
  Rng rng_;
  std::vector<std::string> int_params_, fp_scalars_, arrays_;
  std::vector<std::vector<std::string>> scopes_;
  std::vector<std::string> loop_vars_;
  int temp_counter_ = 0;
  int if_depth_ = 0;
};

}  // namespace

ProgramAst generate_program(const GenConfig& config) {
  validate(config);
  return ProgramGenerator(config).run();
}

std::string ast_signature(const ProgramAst& ast) {
  const std::uint64_t h = fnv1a64(ast_to_json(ast).dump());
  char buf[20];
  std::snprintf(buf, sizeof buf, "t%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fpdiff
