#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fpdiff {

enum class Precision { FP64, FP32 };

std::string_view to_string(Precision p);
Precision precision_from_string(std::string_view s);

/// Scalar type keyword for the precision ("double" / "float").
std::string_view fp_type_name(Precision p);

// ---------------------------------------------------------------------------
// Math-function catalog
// ---------------------------------------------------------------------------

struct MathFunction {
  std::string_view name;  // FP64 spelling, e.g. "cos"
  int arity;
};

/// Every math function the generator may emit, FP64 spelling.
const std::vector<MathFunction>& math_catalog();

/// Catalog entry for an FP64 or FP32 spelling ("cos" or "cosf").
std::optional<MathFunction> find_math_function(std::string_view name);

/// Spelling of a catalog function for the given precision.
std::string math_function_name(std::string_view base, Precision p);

// ---------------------------------------------------------------------------
// Literal
// ---------------------------------------------------------------------------

/// A decimal literal `[+-]d.ddddE[+-]n`. A literal whose digits are all zero
/// renders in the compact `+0.0` form.
struct Literal {
  bool negative = false;
  int lead_digit = 1;          // 0..9
  std::string fraction = "0000";  // exactly four decimal digits
  int exponent = 0;

  bool is_zero() const;
  /// Source rendering; FP32 literals carry a trailing `F`.
  std::string render(Precision p) const;
  /// Rendering without the FP32 suffix, as accepted by strtod/strtof.
  std::string render_plain() const;
  /// Value of the literal correctly rounded to the precision (returned widened).
  double value(Precision p) const;

  friend bool operator==(const Literal&, const Literal&) = default;
};

// ---------------------------------------------------------------------------
// Expressions and statements
// ---------------------------------------------------------------------------

enum class BinaryOp { Add, Sub, Mul, Div };
enum class AccumOp { AddAssign, SubAssign, MulAssign };
enum class CmpOp { Eq, Gt, Lt, Ge, Le };

std::string_view to_string(BinaryOp op);
std::string_view to_string(AccumOp op);
std::string_view to_string(CmpOp op);
BinaryOp binary_op_from_string(std::string_view s);
AccumOp accum_op_from_string(std::string_view s);
CmpOp cmp_op_from_string(std::string_view s);

struct Expr {
  enum class Kind { Literal, VarRef, ArrayRef, BinOp, Paren, MathCall, CompRef };

  Kind kind = Kind::CompRef;
  Literal literal;          // Literal
  std::string name;         // VarRef: variable; ArrayRef: array; MathCall: function
  std::string index;        // ArrayRef: induction variable
  BinaryOp op = BinaryOp::Add;
  std::vector<Expr> args;   // BinOp: {lhs, rhs}; Paren: {inner}; MathCall: arguments

  static Expr lit(Literal l);
  static Expr var(std::string n);
  static Expr array_ref(std::string array, std::string index_var);
  static Expr bin(BinaryOp op, Expr lhs, Expr rhs);
  static Expr paren(Expr inner);
  static Expr call(std::string fn, std::vector<Expr> args);
  static Expr comp();

  /// Number of nodes in the tree rooted here.
  int node_count() const;

  friend bool operator==(const Expr&, const Expr&) = default;
};

std::string_view to_string(Expr::Kind k);

struct Stmt {
  enum class Kind { TempDecl, Accumulate, ArrayStore, ForLoop, IfBlock, PrintComp };

  Kind kind = Kind::PrintComp;
  std::string name;   // TempDecl: temp; ArrayStore: array; ForLoop: bound parameter
  std::string var;    // ArrayStore: index variable; ForLoop: induction variable
  AccumOp accum = AccumOp::AddAssign;
  CmpOp cmp = CmpOp::Eq;
  Expr lhs;           // IfBlock left operand
  Expr rhs;           // TempDecl init, Accumulate/ArrayStore value, IfBlock right operand
  std::vector<Stmt> body;

  static Stmt temp_decl(std::string name, Expr init);
  static Stmt accumulate(AccumOp op, Expr rhs);
  static Stmt array_store(std::string array, std::string index_var, Expr rhs);
  static Stmt for_loop(std::string bound_param, std::string induction_var,
                       std::vector<Stmt> body);
  static Stmt if_block(Expr lhs, CmpOp cmp, Expr rhs, std::vector<Stmt> body);
  static Stmt print_comp();

  friend bool operator==(const Stmt&, const Stmt&) = default;
};

std::string_view to_string(Stmt::Kind k);

struct Param {
  enum class Kind { CompAccumulator, IntScalar, FpScalar, FpArray };
  std::string name;
  Kind kind = Kind::FpScalar;

  friend bool operator==(const Param&, const Param&) = default;
};

std::string_view to_string(Param::Kind k);
Param::Kind param_kind_from_string(std::string_view s);

struct ProgramAst {
  std::string kernel_name = "compute";
  std::vector<Param> params;
  std::vector<Stmt> body;
  Precision precision = Precision::FP64;
  /// Element count of every FpArray parameter.
  int array_length = 10;

  const Param* find_param(std::string_view name) const;

  friend bool operator==(const ProgramAst&, const ProgramAst&) = default;
};

/// True if any MathCall occurs anywhere in the program.
bool uses_math_calls(const ProgramAst& ast);

/// Maximum ForLoop nesting depth of the program (0 for straight-line code).
int loop_depth(const ProgramAst& ast);

}  // namespace fpdiff
