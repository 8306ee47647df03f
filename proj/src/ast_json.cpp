#include "fpdiff/ast_json.hpp"

#include "fpdiff/error.hpp"

namespace fpdiff {

using nlohmann::json;

namespace {

json literal_to_json(const Literal& l) {
  std::string mantissa(1, static_cast<char>('0' + l.lead_digit));
  mantissa += '.';
  mantissa += l.fraction;
  return json{{"sign", l.negative ? "-" : "+"}, {"mantissa", mantissa}, {"exponent", l.exponent}};
}

Literal literal_from_json(const json& j) {
  Literal l;
  l.negative = j.at("sign").get<std::string>() == "-";
  const auto mantissa = j.at("mantissa").get<std::string>();
  if (mantissa.size() != 6 || mantissa[1] != '.') {
    throw ConfigError("malformed literal mantissa '" + mantissa + "'");
  }
  l.lead_digit = mantissa[0] - '0';
  l.fraction = mantissa.substr(2);
  l.exponent = j.at("exponent").get<int>();
  return l;
}

json expr_to_json(const Expr& e) {
  json j{{"kind", to_string(e.kind)}};
  switch (e.kind) {
    case Expr::Kind::Literal: j["literal"] = literal_to_json(e.literal); break;
    case Expr::Kind::VarRef: j["name"] = e.name; break;
    case Expr::Kind::ArrayRef:
      j["array_name"] = e.name;
      j["index_var"] = e.index;
      break;
    case Expr::Kind::BinOp:
      j["op"] = to_string(e.op);
      j["lhs"] = expr_to_json(e.args.at(0));
      j["rhs"] = expr_to_json(e.args.at(1));
      break;
    case Expr::Kind::Paren: j["inner"] = expr_to_json(e.args.at(0)); break;
    case Expr::Kind::MathCall: {
      j["fn_name"] = e.name;
      json args = json::array();
      for (const auto& a : e.args) args.push_back(expr_to_json(a));
      j["args"] = std::move(args);
      break;
    }
    case Expr::Kind::CompRef: break;
  }
  return j;
}

Expr expr_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "Literal") return Expr::lit(literal_from_json(j.at("literal")));
  if (kind == "VarRef") return Expr::var(j.at("name").get<std::string>());
  if (kind == "ArrayRef") {
    return Expr::array_ref(j.at("array_name").get<std::string>(), j.at("index_var").get<std::string>());
  }
  if (kind == "BinOp") {
    return Expr::bin(binary_op_from_string(j.at("op").get<std::string>()),
                     expr_from_json(j.at("lhs")), expr_from_json(j.at("rhs")));
  }
  if (kind == "Paren") return Expr::paren(expr_from_json(j.at("inner")));
  if (kind == "MathCall") {
    std::vector<Expr> args;
    for (const auto& a : j.at("args")) args.push_back(expr_from_json(a));
    return Expr::call(j.at("fn_name").get<std::string>(), std::move(args));
  }
  if (kind == "CompRef") return Expr::comp();
  throw ConfigError("unknown expression kind '" + kind + "'");
}

json stmts_to_json(const std::vector<Stmt>& body);

json stmt_to_json(const Stmt& s) {
  json j{{"kind", to_string(s.kind)}};
  switch (s.kind) {
    case Stmt::Kind::TempDecl:
      j["name"] = s.name;
      j["init"] = expr_to_json(s.rhs);
      break;
    case Stmt::Kind::Accumulate:
      j["op"] = to_string(s.accum);
      j["rhs"] = expr_to_json(s.rhs);
      break;
    case Stmt::Kind::ArrayStore:
      j["array_name"] = s.name;
      j["index_var"] = s.var;
      j["rhs"] = expr_to_json(s.rhs);
      break;
    case Stmt::Kind::ForLoop:
      j["bound_param"] = s.name;
      j["induction_var"] = s.var;
      j["body"] = stmts_to_json(s.body);
      break;
    case Stmt::Kind::IfBlock:
      j["lhs"] = expr_to_json(s.lhs);
      j["cmp"] = to_string(s.cmp);
      j["rhs"] = expr_to_json(s.rhs);
      j["body"] = stmts_to_json(s.body);
      break;
    case Stmt::Kind::PrintComp: break;
  }
  return j;
}

json stmts_to_json(const std::vector<Stmt>& body) {
  json arr = json::array();
  for (const auto& s : body) arr.push_back(stmt_to_json(s));
  return arr;
}

std::vector<Stmt> stmts_from_json(const json& j);

Stmt stmt_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "TempDecl") return Stmt::temp_decl(j.at("name").get<std::string>(), expr_from_json(j.at("init")));
  if (kind == "Accumulate") {
    return Stmt::accumulate(accum_op_from_string(j.at("op").get<std::string>()), expr_from_json(j.at("rhs")));
  }
  if (kind == "ArrayStore") {
    return Stmt::array_store(j.at("array_name").get<std::string>(), j.at("index_var").get<std::string>(),
                             expr_from_json(j.at("rhs")));
  }
  if (kind == "ForLoop") {
    return Stmt::for_loop(j.at("bound_param").get<std::string>(), j.at("induction_var").get<std::string>(),
                          stmts_from_json(j.at("body")));
  }
  if (kind == "IfBlock") {
    return Stmt::if_block(expr_from_json(j.at("lhs")), cmp_op_from_string(j.at("cmp").get<std::string>()),
                          expr_from_json(j.at("rhs")), stmts_from_json(j.at("body")));
  }
  if (kind == "PrintComp") return Stmt::print_comp();
  throw ConfigError("unknown statement kind '" + kind + "'");
}

std::vector<Stmt> stmts_from_json(const json& j) {
  std::vector<Stmt> out;
  for (const auto& s : j) out.push_back(stmt_from_json(s));
  return out;
}

}  // namespace

json ast_to_json(const ProgramAst& ast) {
  json params = json::array();
  for (const auto& p : ast.params) params.push_back({{"name", p.name}, {"kind", to_string(p.kind)}});
  return json{{"kernel_name", ast.kernel_name},
              {"precision", to_string(ast.precision)},
              {"array_length", ast.array_length},
              {"params", std::move(params)},
              {"body", stmts_to_json(ast.body)}};
}

ProgramAst ast_from_json(const json& j) {
  try {
    ProgramAst ast;
    ast.kernel_name = j.at("kernel_name").get<std::string>();
    ast.precision = precision_from_string(j.at("precision").get<std::string>());
    ast.array_length = j.at("array_length").get<int>();
    for (const auto& p : j.at("params")) {
      ast.params.push_back({p.at("name").get<std::string>(), param_kind_from_string(p.at("kind").get<std::string>())});
    }
    ast.body = stmts_from_json(j.at("body"));
    return ast;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed program JSON: ") + e.what());
  }
}

json config_to_json(const GenConfig& c) {
  return json{{"precision", to_string(c.precision)},
              {"max_loop_nesting", c.max_loop_nesting},
              {"max_stmts_per_block", c.max_stmts_per_block},
              {"num_fp_params", c.num_fp_params},
              {"num_int_params", c.num_int_params},
              {"array_probability", c.array_probability},
              {"math_fn_set", c.math_fn_set},
              {"literal_exponent_range", {c.literal_exponent_range.lo, c.literal_exponent_range.hi}},
              {"loop_bound_range", {c.loop_bound_range.lo, c.loop_bound_range.hi}},
              {"seed", c.seed},
              {"max_expr_nodes", c.max_expr_nodes},
              {"math_call_probability", c.math_call_probability},
              {"zero_literal_probability", c.zero_literal_probability},
              {"allow_mul_accumulate", c.allow_mul_accumulate},
              {"allow_nested_if", c.allow_nested_if}};
}

GenConfig config_from_json(const json& j) {
  try {
    GenConfig c = GenConfig::for_precision(precision_from_string(j.at("precision").get<std::string>()));
    c.max_loop_nesting = j.value("max_loop_nesting", c.max_loop_nesting);
    c.max_stmts_per_block = j.value("max_stmts_per_block", c.max_stmts_per_block);
    c.num_fp_params = j.value("num_fp_params", c.num_fp_params);
    c.num_int_params = j.value("num_int_params", c.num_int_params);
    c.array_probability = j.value("array_probability", c.array_probability);
    c.math_fn_set = j.value("math_fn_set", c.math_fn_set);
    if (j.contains("literal_exponent_range")) {
      const auto& r = j.at("literal_exponent_range");
      c.literal_exponent_range = {r.at(0).get<int>(), r.at(1).get<int>()};
    }
    if (j.contains("loop_bound_range")) {
      const auto& r = j.at("loop_bound_range");
      c.loop_bound_range = {r.at(0).get<int>(), r.at(1).get<int>()};
    }
    c.seed = j.value("seed", c.seed);
    c.max_expr_nodes = j.value("max_expr_nodes", c.max_expr_nodes);
    c.math_call_probability = j.value("math_call_probability", c.math_call_probability);
    c.zero_literal_probability = j.value("zero_literal_probability", c.zero_literal_probability);
    c.allow_mul_accumulate = j.value("allow_mul_accumulate", c.allow_mul_accumulate);
    c.allow_nested_if = j.value("allow_nested_if", c.allow_nested_if);
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed generator config: ") + e.what());
  }
}

}  // namespace fpdiff
