#pragma once

// Test-only helpers: an AST validator written against the grammar (not the
// generator), a C tokenizer, and small process/filesystem utilities.

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fpdiff/ast.hpp"
#include "fpdiff/classify.hpp"
#include "fpdiff/program_gen.hpp"

namespace support {

using namespace fpdiff;

struct Limits {
  Precision precision = Precision::FP64;
  int max_loop_nesting = 3;
  int max_stmts_per_block = 4;
  int max_expr_nodes = 6;
  std::set<std::string> math_fns;  // FP64 spellings
  int exp_lo = -323, exp_hi = 308;
  bool allow_mul_accumulate = true;
  bool allow_nested_if = false;

  static Limits of(const GenConfig& c) {
    Limits l;
    l.precision = c.precision;
    l.max_loop_nesting = c.max_loop_nesting;
    l.max_stmts_per_block = c.max_stmts_per_block;
    l.max_expr_nodes = c.max_expr_nodes;
    l.math_fns = {c.math_fn_set.begin(), c.math_fn_set.end()};
    l.exp_lo = c.literal_exponent_range.lo;
    l.exp_hi = c.literal_exponent_range.hi;
    l.allow_mul_accumulate = c.allow_mul_accumulate;
    l.allow_nested_if = c.allow_nested_if;
    return l;
  }
};

class Validator {
 public:
  Validator(const ProgramAst& ast, const Limits& limits) : ast_(ast), lim_(limits) {}

  std::vector<std::string> run() {
    if (ast_.kernel_name != "compute") err("kernel is not named compute");
    if (ast_.params.empty() || ast_.params[0].name != "comp" ||
        ast_.params[0].kind != Param::Kind::CompAccumulator) {
      err("first parameter is not the comp accumulator");
    }
    std::set<std::string> names;
    for (std::size_t i = 0; i < ast_.params.size(); ++i) {
      const Param& p = ast_.params[i];
      if (!names.insert(p.name).second) err("duplicate parameter " + p.name);
      if (i > 0) {
        if (p.kind == Param::Kind::CompAccumulator) err("second accumulator " + p.name);
        if (p.name.rfind("var_", 0) != 0) err("parameter name " + p.name);
      }
      kinds_[p.name] = p.kind;
    }
    if (ast_.body.empty() || ast_.body.back().kind != Stmt::Kind::PrintComp) {
      err("body does not end by printing comp");
      return errors_;
    }
    std::vector<Stmt> top(ast_.body.begin(), ast_.body.end() - 1);
    block(top, 0, false);
    return errors_;
  }

 private:
  void err(const std::string& m) { errors_.push_back(m); }

  bool visible_temp(const std::string& n) const {
    for (const auto& s : temps_) {
      if (s.count(n)) return true;
    }
    return false;
  }
  bool bound_loop_var(const std::string& n) const {
    for (const auto& v : loop_vars_) {
      if (v == n) return true;
    }
    return false;
  }
  bool is_param(const std::string& n, Param::Kind k) const {
    auto it = kinds_.find(n);
    return it != kinds_.end() && it->second == k;
  }

  void block(const std::vector<Stmt>& stmts, int depth, bool in_if) {
    if (static_cast<int>(stmts.size()) > lim_.max_stmts_per_block) err("block too long");
    temps_.emplace_back();
    for (const Stmt& s : stmts) stmt(s, depth, in_if);
    temps_.pop_back();
  }

  void stmt(const Stmt& s, int depth, bool in_if) {
    switch (s.kind) {
      case Stmt::Kind::TempDecl:
        if (s.name.rfind("tmp_", 0) != 0) err("temp name " + s.name);
        if (visible_temp(s.name) || kinds_.count(s.name)) err("temp shadows " + s.name);
        expr(s.rhs);
        temps_.back().insert(s.name);
        return;
      case Stmt::Kind::Accumulate:
        if (s.accum == AccumOp::MulAssign && !lim_.allow_mul_accumulate) err("*= not allowed");
        expr(s.rhs);
        return;
      case Stmt::Kind::ArrayStore:
        if (!is_param(s.name, Param::Kind::FpArray)) err("store to non-array " + s.name);
        if (!bound_loop_var(s.var)) err("store index " + s.var + " not bound");
        expr(s.rhs);
        return;
      case Stmt::Kind::ForLoop:
        if (!is_param(s.name, Param::Kind::IntScalar)) err("loop bound " + s.name + " is not an int param");
        if (bound_loop_var(s.var) || kinds_.count(s.var)) err("induction variable reused " + s.var);
        if (depth + 1 > lim_.max_loop_nesting) err("loop nesting exceeds limit");
        if (s.body.empty()) err("empty loop body");
        loop_vars_.push_back(s.var);
        block(s.body, depth + 1, in_if);
        loop_vars_.pop_back();
        return;
      case Stmt::Kind::IfBlock:
        if (s.lhs.kind != Expr::Kind::CompRef) err("if guard does not test comp");
        if (in_if && !lim_.allow_nested_if) err("nested if");
        if (s.body.empty()) err("empty if body");
        expr(s.rhs);
        block(s.body, depth, true);
        return;
      case Stmt::Kind::PrintComp: err("print before the end of the body"); return;
    }
  }

  static int count(const Expr& e) {
    int n = 1;
    for (const auto& a : e.args) n += count(a);
    return n;
  }

  void expr(const Expr& e) {
    if (count(e) > lim_.max_expr_nodes) err("expression exceeds node budget");
    node(e);
  }

  void node(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Literal: literal(e.literal); break;
      case Expr::Kind::CompRef: break;
      case Expr::Kind::VarRef:
        if (!is_param(e.name, Param::Kind::FpScalar) && !visible_temp(e.name)) err("unbound variable " + e.name);
        break;
      case Expr::Kind::ArrayRef:
        if (!is_param(e.name, Param::Kind::FpArray)) err("indexing non-array " + e.name);
        if (!bound_loop_var(e.index)) err("index " + e.index + " not bound");
        break;
      case Expr::Kind::BinOp:
        if (e.args.size() != 2) err("binary op arity");
        break;
      case Expr::Kind::Paren:
        if (e.args.size() != 1) err("paren arity");
        break;
      case Expr::Kind::MathCall: {
        std::string base = e.name;
        if (lim_.precision == Precision::FP32) {
          if (base.empty() || base.back() != 'f') err("FP32 call without f suffix: " + e.name);
          else base.pop_back();
        }
        static const std::map<std::string, std::size_t> arity{
            {"cos", 1},  {"sin", 1},  {"sqrt", 1}, {"ceil", 1}, {"floor", 1}, {"fabs", 1}, {"cosh", 1}, {"exp", 1},
            {"log", 1},  {"tanh", 1}, {"asin", 1}, {"acos", 1}, {"atan", 1},  {"fmod", 2}, {"pow", 2}};
        auto it = arity.find(base);
        if (it == arity.end()) err("unknown function " + e.name);
        else if (it->second != e.args.size()) err("wrong arity for " + e.name);
        if (!lim_.math_fns.count(base)) err("function outside the configured set: " + e.name);
        break;
      }
    }
    for (const auto& a : e.args) node(a);
  }

  void literal(const Literal& l) {
    if (l.fraction.size() != 4) err("literal fraction length");
    for (char c : l.fraction) {
      if (c < '0' || c > '9') err("literal fraction digit");
    }
    if (l.lead_digit == 0) {
      if (l.fraction != "0000" || l.exponent != 0) err("malformed zero literal");
      return;
    }
    if (l.lead_digit < 1 || l.lead_digit > 9) err("literal lead digit");
    if (l.exponent < lim_.exp_lo || l.exponent > lim_.exp_hi) err("literal exponent out of range");
    const std::string text = std::string(l.negative ? "-" : "+") + char('0' + l.lead_digit) + "." + l.fraction +
                             "E" + std::to_string(l.exponent);
    const double v = lim_.precision == Precision::FP64 ? std::strtod(text.c_str(), nullptr)
                                                       : static_cast<double>(std::strtof(text.c_str(), nullptr));
    if (!std::isfinite(v) || v == 0.0) err("literal " + text + " not representable");
  }

  const ProgramAst& ast_;
  Limits lim_;
  std::map<std::string, Param::Kind> kinds_;
  std::vector<std::set<std::string>> temps_;
  std::vector<std::string> loop_vars_;
  std::vector<std::string> errors_;
};

inline std::vector<std::string> validate_ast(const ProgramAst& ast, const Limits& limits) {
  return Validator(ast, limits).run();
}

// ---------------------------------------------------------------------------
// C tokenizer (comments dropped, string literals kept whole).

inline std::vector<std::string> tokenize(std::string_view s) {
  static const char* const multi[] = {"<<<", ">>>", "+=", "-=", "*=", "/=", "==", ">=", "<=", "!=",
                                      "++",  "--",  "&&", "||", "->", "::", "<<", ">>"};
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (s.compare(i, 2, "/*") == 0) {
      const auto end = s.find("*/", i + 2);
      i = end == std::string_view::npos ? s.size() : end + 2;
    } else if (s.compare(i, 2, "//") == 0) {
      while (i < s.size() && s[i] != '\n') ++i;
    } else if (c == '"' || c == '\'') {
      std::size_t j = i + 1;
      while (j < s.size() && s[j] != c) j += s[j] == '\\' ? 2 : 1;
      out.emplace_back(s.substr(i, j + 1 - i));
      i = j + 1;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.emplace_back(s.substr(i, j - i));
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size()) {
        const char d = s[j];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '.') {
          ++j;
        } else if ((d == '+' || d == '-') && (s[j - 1] == 'E' || s[j - 1] == 'e')) {
          ++j;
        } else {
          break;
        }
      }
      out.emplace_back(s.substr(i, j - i));
      i = j;
    } else {
      std::string tok(1, c);
      for (const char* m : multi) {
        if (s.compare(i, std::char_traits<char>::length(m), m) == 0) {
          tok = m;
          break;
        }
      }
      out.push_back(tok);
      i += tok.size();
    }
  }
  return out;
}

// Tokens of the body of `void compute(...) { ... }`, outer braces excluded.
inline std::vector<std::string> kernel_tokens(std::string_view src) {
  const auto toks = tokenize(src);
  for (std::size_t i = 0; i + 2 < toks.size(); ++i) {
    if (toks[i] != "void" || toks[i + 1] != "compute" || toks[i + 2] != "(") continue;
    std::size_t j = i + 2;
    int depth = 0;
    for (; j < toks.size(); ++j) {
      if (toks[j] == "(") ++depth;
      if (toks[j] == ")" && --depth == 0) break;
    }
    if (++j >= toks.size() || toks[j] != "{") return {};
    std::vector<std::string> body;
    int braces = 1;
    for (++j; j < toks.size(); ++j) {
      if (toks[j] == "{") ++braces;
      if (toks[j] == "}" && --braces == 0) return body;
      body.push_back(toks[j]);
    }
    return {};
  }
  return {};
}

inline std::multiset<std::string> multiset(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

// ---------------------------------------------------------------------------

// Grammar productions seen over a set of programs.
struct ProductionCensus {
  std::set<Stmt::Kind> stmts;
  std::set<AccumOp> accums;
  std::set<CmpOp> cmps;
  std::set<Expr::Kind> exprs;
  std::set<BinaryOp> ops;
  std::set<std::string> fns;
  std::set<Param::Kind> params;
  bool zero_literal = false;

  void add(const ProgramAst& ast) {
    for (const auto& p : ast.params) params.insert(p.kind);
    std::function<void(const Expr&)> ex = [&](const Expr& e) {
      exprs.insert(e.kind);
      if (e.kind == Expr::Kind::BinOp) ops.insert(e.op);
      if (e.kind == Expr::Kind::MathCall) fns.insert(e.name);
      if (e.kind == Expr::Kind::Literal && e.literal.is_zero()) zero_literal = true;
      for (const auto& a : e.args) ex(a);
    };
    std::function<void(const std::vector<Stmt>&)> walk = [&](const std::vector<Stmt>& body) {
      for (const Stmt& s : body) {
        stmts.insert(s.kind);
        if (s.kind == Stmt::Kind::Accumulate) accums.insert(s.accum);
        if (s.kind == Stmt::Kind::IfBlock) {
          cmps.insert(s.cmp);
          ex(s.lhs);
        }
        if (s.kind != Stmt::Kind::ForLoop && s.kind != Stmt::Kind::PrintComp) ex(s.rhs);
        walk(s.body);
      }
    };
    walk(ast.body);
  }

  // Names of production families with unseen members; empty when complete.
  std::vector<std::string> missing() const {
    std::vector<std::string> out;
    if (stmts.size() != 6) out.push_back("statement");
    if (accums.size() != 3) out.push_back("accumulation operator");
    if (cmps.size() != 5) out.push_back("comparison");
    if (exprs.size() != 7) out.push_back("expression");
    if (ops.size() != 4) out.push_back("binary operator");
    if (fns.size() != math_catalog().size()) out.push_back("math function");
    if (params.size() != 4) out.push_back("parameter kind");
    if (!zero_literal) out.push_back("zero literal");
    return out;
  }
};

// Class of an outcome pair, written out from the taxonomy rather than taken
// from the classifier: unordered tag pairs, plus Num_vs_Num for unequal values.
inline std::string expected_class(const Outcome& a, const Outcome& b) {
  static const std::map<std::set<std::string>, std::string> table{
      {{"NaN", "Inf"}, "NaN_vs_Inf"},   {{"NaN", "Zero"}, "NaN_vs_Zero"},  {{"NaN", "Number"}, "NaN_vs_Num"},
      {{"Inf", "Zero"}, "Inf_vs_Zero"}, {{"Inf", "Number"}, "Inf_vs_Num"}, {{"Zero", "Number"}, "Num_vs_Zero"},
  };
  const std::string ta(to_string(a.tag)), tb(to_string(b.tag));
  if (ta != tb) return table.at({ta, tb});
  if (ta == "Number" && a.value != b.value) return "Num_vs_Num";
  return "Consistent";
}

// ---------------------------------------------------------------------------

inline bool have_program(const std::string& name) {
  const std::string cmd = "command -v " + name + " >/dev/null 2>&1";
  return std::system(cmd.c_str()) == 0;
}

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "fpdiff-test-XXXXXX").string();
    if (!::mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace support
