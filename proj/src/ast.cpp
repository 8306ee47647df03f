#include "fpdiff/ast.hpp"

#include <algorithm>
#include <cstdlib>

#include "fpdiff/error.hpp"

namespace fpdiff {

std::string_view to_string(Precision p) { return p == Precision::FP64 ? "fp64" : "fp32"; }

Precision precision_from_string(std::string_view s) {
  if (s == "fp64" || s == "FP64" || s == "double") return Precision::FP64;
  if (s == "fp32" || s == "FP32" || s == "float") return Precision::FP32;
  throw ConfigError("unknown precision '" + std::string(s) + "'");
}

std::string_view fp_type_name(Precision p) { return p == Precision::FP64 ? "double" : "float"; }

const std::vector<MathFunction>& math_catalog() {
  static const std::vector<MathFunction> catalog = {
      {"cos", 1},  {"sin", 1},  {"sqrt", 1}, {"ceil", 1}, {"floor", 1},
      {"fabs", 1}, {"cosh", 1}, {"exp", 1},  {"log", 1},  {"tanh", 1},
      {"asin", 1}, {"acos", 1}, {"atan", 1}, {"fmod", 2}, {"pow", 2},
  };
  return catalog;
}

std::optional<MathFunction> find_math_function(std::string_view name) {
  for (const auto& fn : math_catalog()) {
    if (fn.name == name) return fn;
  }
  if (!name.empty() && name.back() == 'f') {
    name.remove_suffix(1);
    for (const auto& fn : math_catalog()) {
      if (fn.name == name) return fn;
    }
  }
  return std::nullopt;
}

std::string math_function_name(std::string_view base, Precision p) {
  std::string out(base);
  if (p == Precision::FP32) out += 'f';
  return out;
}

// ---------------------------------------------------------------------------

bool Literal::is_zero() const {
  return lead_digit == 0 && std::all_of(fraction.begin(), fraction.end(),
                                        [](char c) { return c == '0'; });
}

std::string Literal::render_plain() const {
  std::string out(1, negative ? '-' : '+');
  if (is_zero()) return out + "0.0";
  out += static_cast<char>('0' + lead_digit);
  out += '.';
  out += fraction;
  out += 'E';
  out += std::to_string(exponent);
  return out;
}

std::string Literal::render(Precision p) const {
  std::string out = render_plain();
  if (p == Precision::FP32) out += 'F';
  return out;
}

double Literal::value(Precision p) const {
  const std::string text = render_plain();
  if (p == Precision::FP32) return static_cast<double>(std::strtof(text.c_str(), nullptr));
  return std::strtod(text.c_str(), nullptr);
}

// ---------------------------------------------------------------------------

std::string_view to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
  }
  return "?";
}

std::string_view to_string(AccumOp op) {
  switch (op) {
    case AccumOp::AddAssign: return "+=";
    case AccumOp::SubAssign: return "-=";
    case AccumOp::MulAssign: return "*=";
  }
  return "?";
}

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Gt: return ">";
    case CmpOp::Lt: return "<";
    case CmpOp::Ge: return ">=";
    case CmpOp::Le: return "<=";
  }
  return "?";
}

BinaryOp binary_op_from_string(std::string_view s) {
  for (auto op : {BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div}) {
    if (to_string(op) == s) return op;
  }
  throw ConfigError("unknown binary operator '" + std::string(s) + "'");
}

AccumOp accum_op_from_string(std::string_view s) {
  for (auto op : {AccumOp::AddAssign, AccumOp::SubAssign, AccumOp::MulAssign}) {
    if (to_string(op) == s) return op;
  }
  throw ConfigError("unknown accumulation operator '" + std::string(s) + "'");
}

CmpOp cmp_op_from_string(std::string_view s) {
  for (auto op : {CmpOp::Eq, CmpOp::Gt, CmpOp::Lt, CmpOp::Ge, CmpOp::Le}) {
    if (to_string(op) == s) return op;
  }
  throw ConfigError("unknown comparison operator '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------

Expr Expr::lit(Literal l) {
  Expr e;
  e.kind = Kind::Literal;
  e.literal = std::move(l);
  return e;
}

Expr Expr::var(std::string n) {
  Expr e;
  e.kind = Kind::VarRef;
  e.name = std::move(n);
  return e;
}

Expr Expr::array_ref(std::string array, std::string index_var) {
  Expr e;
  e.kind = Kind::ArrayRef;
  e.name = std::move(array);
  e.index = std::move(index_var);
  return e;
}

Expr Expr::bin(BinaryOp op, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = Kind::BinOp;
  e.op = op;
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  return e;
}

Expr Expr::paren(Expr inner) {
  Expr e;
  e.kind = Kind::Paren;
  e.args.push_back(std::move(inner));
  return e;
}

Expr Expr::call(std::string fn, std::vector<Expr> args) {
  Expr e;
  e.kind = Kind::MathCall;
  e.name = std::move(fn);
  e.args = std::move(args);
  return e;
}

Expr Expr::comp() { return Expr{}; }

int Expr::node_count() const {
  int n = 1;
  for (const auto& a : args) n += a.node_count();
  return n;
}

std::string_view to_string(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Literal: return "Literal";
    case Expr::Kind::VarRef: return "VarRef";
    case Expr::Kind::ArrayRef: return "ArrayRef";
    case Expr::Kind::BinOp: return "BinOp";
    case Expr::Kind::Paren: return "Paren";
    case Expr::Kind::MathCall: return "MathCall";
    case Expr::Kind::CompRef: return "CompRef";
  }
  return "?";
}

Stmt Stmt::temp_decl(std::string name, Expr init) {
  Stmt s;
  s.kind = Kind::TempDecl;
  s.name = std::move(name);
  s.rhs = std::move(init);
  return s;
}

Stmt Stmt::accumulate(AccumOp op, Expr rhs) {
  Stmt s;
  s.kind = Kind::Accumulate;
  s.accum = op;
  s.rhs = std::move(rhs);
  return s;
}

Stmt Stmt::array_store(std::string array, std::string index_var, Expr rhs) {
  Stmt s;
  s.kind = Kind::ArrayStore;
  s.name = std::move(array);
  s.var = std::move(index_var);
  s.rhs = std::move(rhs);
  return s;
}

Stmt Stmt::for_loop(std::string bound_param, std::string induction_var, std::vector<Stmt> body) {
  Stmt s;
  s.kind = Kind::ForLoop;
  s.name = std::move(bound_param);
  s.var = std::move(induction_var);
  s.body = std::move(body);
  return s;
}

Stmt Stmt::if_block(Expr lhs, CmpOp cmp, Expr rhs, std::vector<Stmt> body) {
  Stmt s;
  s.kind = Kind::IfBlock;
  s.lhs = std::move(lhs);
  s.cmp = cmp;
  s.rhs = std::move(rhs);
  s.body = std::move(body);
  return s;
}

Stmt Stmt::print_comp() { return Stmt{}; }

std::string_view to_string(Stmt::Kind k) {
  switch (k) {
    case Stmt::Kind::TempDecl: return "TempDecl";
    case Stmt::Kind::Accumulate: return "Accumulate";
    case Stmt::Kind::ArrayStore: return "ArrayStore";
    case Stmt::Kind::ForLoop: return "ForLoop";
    case Stmt::Kind::IfBlock: return "IfBlock";
    case Stmt::Kind::PrintComp: return "PrintComp";
  }
  return "?";
}

std::string_view to_string(Param::Kind k) {
  switch (k) {
    case Param::Kind::CompAccumulator: return "CompAccumulator";
    case Param::Kind::IntScalar: return "IntScalar";
    case Param::Kind::FpScalar: return "FpScalar";
    case Param::Kind::FpArray: return "FpArray";
  }
  return "?";
}

Param::Kind param_kind_from_string(std::string_view s) {
  for (auto k : {Param::Kind::CompAccumulator, Param::Kind::IntScalar, Param::Kind::FpScalar,
                 Param::Kind::FpArray}) {
    if (to_string(k) == s) return k;
  }
  throw ConfigError("unknown parameter kind '" + std::string(s) + "'");
}

const Param* ProgramAst::find_param(std::string_view name) const {
  for (const auto& p : params) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

namespace {

bool expr_has_call(const Expr& e) {
  if (e.kind == Expr::Kind::MathCall) return true;
  return std::any_of(e.args.begin(), e.args.end(), expr_has_call);
}

bool stmts_have_call(const std::vector<Stmt>& body) {
  for (const auto& s : body) {
    if (expr_has_call(s.lhs) || expr_has_call(s.rhs) || stmts_have_call(s.body)) return true;
  }
  return false;
}

int stmts_depth(const std::vector<Stmt>& body) {
  int depth = 0;
  for (const auto& s : body) {
    int d = stmts_depth(s.body) + (s.kind == Stmt::Kind::ForLoop ? 1 : 0);
    depth = std::max(depth, d);
  }
  return depth;
}

}  // namespace

bool uses_math_calls(const ProgramAst& ast) { return stmts_have_call(ast.body); }

int loop_depth(const ProgramAst& ast) { return stmts_depth(ast.body); }

}  // namespace fpdiff
