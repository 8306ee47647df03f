#pragma once

// Hand-built ASTs of known kernels, used as fixtures.

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpdiff/ast.hpp"

namespace fixtures {

using namespace fpdiff;

// "+1.3305E12" -> Literal. Zero forms "+0.0" / "-0.0" are accepted too.
inline Literal L(const std::string& text) {
  Literal l;
  l.negative = text.at(0) == '-';
  const std::string body = (text[0] == '+' || text[0] == '-') ? text.substr(1) : text;
  if (body == "0.0") {
    l.lead_digit = 0;
    l.fraction = "0000";
    l.exponent = 0;
    return l;
  }
  const auto e = body.find_first_of("eE");
  if (e == std::string::npos || body.size() < 3 || body[1] != '.') throw std::invalid_argument(text);
  l.lead_digit = body[0] - '0';
  std::string frac = body.substr(2, e - 2);
  frac.resize(4, '0');
  l.fraction = frac;
  l.exponent = std::atoi(body.c_str() + e + 1);
  return l;
}

inline Expr lit(const std::string& text) { return Expr::lit(L(text)); }
inline Expr v(const std::string& name) { return Expr::var(name); }
inline Expr add(Expr a, Expr b) { return Expr::bin(BinaryOp::Add, std::move(a), std::move(b)); }
inline Expr sub(Expr a, Expr b) { return Expr::bin(BinaryOp::Sub, std::move(a), std::move(b)); }
inline Expr mul(Expr a, Expr b) { return Expr::bin(BinaryOp::Mul, std::move(a), std::move(b)); }
inline Expr div(Expr a, Expr b) { return Expr::bin(BinaryOp::Div, std::move(a), std::move(b)); }
inline Expr par(Expr e) { return Expr::paren(std::move(e)); }
inline Expr call(const std::string& fn, std::vector<Expr> args) { return Expr::call(fn, std::move(args)); }

inline std::vector<Param> params(int ints, int fps, const std::vector<std::string>& arrays = {}) {
  std::vector<Param> out{{"comp", Param::Kind::CompAccumulator}};
  int n = 1;
  for (int i = 0; i < ints; ++i, ++n) out.push_back({"var_" + std::to_string(n), Param::Kind::IntScalar});
  for (int i = 0; i < fps; ++i, ++n) {
    std::string name = "var_" + std::to_string(n);
    bool is_array = false;
    for (const auto& a : arrays) is_array = is_array || a == name;
    out.push_back({name, is_array ? Param::Kind::FpArray : Param::Kind::FpScalar});
  }
  return out;
}

// Guarded block with a temporary, three accumulations and a loop.
inline ProgramAst guarded_loop_kernel() {
  ProgramAst p;
  p.params = params(1, 7);
  std::vector<Stmt> guarded{
      Stmt::temp_decl("tmp_1", div(lit("+1.3305E12"), v("var_3"))),
      Stmt::accumulate(AccumOp::AddAssign, mul(lit("-1.7744E-2"), v("tmp_1"))),
      Stmt::accumulate(AccumOp::AddAssign,
                       call("cos", {sub(v("var_4"), mul(lit("+1.4014E2"), par(add(v("var_5"), mul(v("var_6"), v("var_7"))))))})),
      Stmt::for_loop("var_1", "i",
                     {Stmt::accumulate(AccumOp::SubAssign, call("sqrt", {add(v("var_8"), lit("-1.7976E3"))}))}),
  };
  p.body = {Stmt::if_block(Expr::comp(), CmpOp::Eq, add(lit("-1.3857E-36"), v("var_2")), std::move(guarded)),
            Stmt::print_comp()};
  return p;
}

// Subnormal-heavy kernel with an array store and fmod.
inline ProgramAst subnormal_array_kernel() {
  ProgramAst p;
  p.params = params(1, 9, {"var_5"});
  Expr store = sub(div(lit("-0.0"), lit("-1.5942E305")),
                   call("fmod", {par(add(lit("+1.7085E-315"), v("var_6"))),
                                 div(lit("-1.9289E305"),
                                     par(add(add(sub(lit("-1.2924E-311"), lit("+0.0")), v("var_7")),
                                             lit("+1.3278E-316"))))}));
  Expr acc = sub(Expr::array_ref("var_5", "i"),
                 call("fmod", {par(mul(lit("-1.7538E305"),
                                       par(div(v("var_8"), par(sub(div(lit("+0.0"), v("var_9")), lit("+1.3065E-306"))))))),
                               lit("+1.5793E-307")}));
  std::vector<Stmt> loop{Stmt::array_store("var_5", "i", std::move(store)),
                         Stmt::accumulate(AccumOp::AddAssign, std::move(acc)),
                         Stmt::accumulate(AccumOp::AddAssign, add(lit("+1.8753E-306"), v("var_10")))};
  p.body = {Stmt::if_block(Expr::comp(), CmpOp::Ge, par(mul(v("var_2"), par(add(v("var_3"), v("var_4"))))),
                           {Stmt::for_loop("var_1", "i", std::move(loop))}),
            Stmt::print_comp()};
  return p;
}

// A recorded input line for the kernel above (comp first).
inline std::vector<std::string> subnormal_array_input() {
  return {"+0.0",        "5",           "+1.7612E-322", "+1.1649E-307", "-0.0",        "+0.0",
          "+1.5461E-311", "-1.3680E306", "+1.1757E-322", "+1.7130E-319", "+1.6782E-321"};
}

// Single-parameter kernel dividing by ceil of a tiny literal.
inline ProgramAst ceil_divide_kernel() {
  ProgramAst p;
  p.params = params(0, 0);
  p.body = {Stmt::temp_decl("tmp_1", lit("+1.1147E-307")),
            Stmt::accumulate(AccumOp::AddAssign, div(v("tmp_1"), call("ceil", {lit("+1.5955E-125")}))),
            Stmt::print_comp()};
  return p;
}

// cosh / fabs kernel with a loop and a trailing guard.
inline ProgramAst cosh_guard_kernel() {
  ProgramAst p;
  p.params = params(1, 7);
  p.body = {
      Stmt::temp_decl("tmp_1", par(sub(lit("-1.8007E-323"),
                                       call("cosh", {add(div(v("var_2"), lit("-1.7569E192")),
                                                         par(add(div(lit("-1.9894E-307"), lit("+1.7323E-313")),
                                                                 v("var_3"))))})))),
      Stmt::accumulate(AccumOp::AddAssign, add(v("tmp_1"), call("fabs", {sub(lit("+1.5726E-307"), v("var_4"))}))),
      Stmt::for_loop("var_1", "i", {Stmt::accumulate(AccumOp::AddAssign, par(div(lit("+1.9903E306"), v("var_5"))))}),
      Stmt::if_block(Expr::comp(), CmpOp::Ge,
                     par(sub(lit("-1.4205E305"), par(mul(lit("-1.4055E-312"), par(add(v("var_6"), div(lit("-1.7892E214"), v("var_7")))))))),
                     {Stmt::accumulate(AccumOp::AddAssign, mul(lit("+1.3803E305"), v("var_8")))}),
      Stmt::print_comp(),
  };
  return p;
}

}  // namespace fixtures
