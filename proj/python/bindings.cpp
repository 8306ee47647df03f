#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "fpdiff/ast_json.hpp"
#include "fpdiff/campaign.hpp"
#include "fpdiff/classify.hpp"
#include "fpdiff/emit.hpp"
#include "fpdiff/error.hpp"
#include "fpdiff/harness.hpp"
#include "fpdiff/inputs.hpp"
#include "fpdiff/oracle.hpp"
#include "fpdiff/program_gen.hpp"

namespace py = pybind11;
using namespace fpdiff;
using nlohmann::json;

namespace {

ProgramAst ast_from_text(const std::string& text) {
  try {
    return ast_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed AST JSON: ") + e.what());
  }
}

InputVector input_from_args(const ProgramAst& ast, const std::vector<std::string>& args) {
  if (args.size() != ast.params.size()) {
    throw ConfigError("expected " + std::to_string(ast.params.size()) + " arguments, got " +
                      std::to_string(args.size()));
  }
  InputVector in;
  in.test_id = ast_signature(ast);
  for (std::size_t i = 0; i < args.size(); ++i) in.values.push_back(parse_input_value(ast.params[i], args[i], ast.precision));
  return in;
}

const CompilerSpec& registry_entry(const std::vector<CompilerSpec>& reg, const std::string& id) {
  for (const auto& s : reg) {
    if (s.id == id) return s;
  }
  throw ConfigError("no compiler '" + id + "' in the registry");
}

}  // namespace

PYBIND11_MODULE(_fpdiff, m) {
  m.doc() = "Differential floating-point testing: generator, emitters, oracle, classifier and reports.";
  py::register_exception<Error>(m, "FpdiffError");

  py::class_<Outcome>(m, "Outcome")
      .def_property_readonly("tag", [](const Outcome& o) { return std::string(to_string(o.tag)); })
      .def_readonly("negative", &Outcome::negative)
      .def_readonly("value", &Outcome::value)
      .def_readonly("subnormal", &Outcome::subnormal)
      .def_static("from_string", [](const std::string& s) { return outcome_from_string(s); })
      .def("__str__", [](const Outcome& o) { return to_string(o); })
      .def("__repr__", [](const Outcome& o) { return "Outcome(" + to_string(o) + ")"; })
      .def("__eq__", [](const Outcome& a, const Outcome& b) { return a == b; });

  m.def(
      "parse_outcome",
      [](const std::string& line, const std::string& precision) {
        return parse_outcome(line, precision_from_string(precision));
      },
      py::arg("line"), py::arg("precision") = "fp64");
  m.def(
      "compare_outcomes",
      [](const Outcome& a, const Outcome& b, double tolerance) {
        return std::string(to_string(compare_outcomes(a, b, {tolerance}).tag));
      },
      py::arg("a"), py::arg("b"), py::arg("tolerance") = 0.0, "Discrepancy class name of the pair.");
  m.def("smallest_normal", [](const std::string& p) { return smallest_normal(precision_from_string(p)); });
  m.def("hexfloat", &hexfloat);
  m.def("format_percentage", &format_percentage, py::arg("discrepancies"), py::arg("runs"));

  m.def(
      "default_config",
      [](const std::string& precision, std::uint64_t seed) {
        return config_to_json(GenConfig::for_precision(precision_from_string(precision), seed)).dump();
      },
      py::arg("precision") = "fp64", py::arg("seed") = 0);
  m.def(
      "generate_program",
      [](const std::string& config) {
        try {
          return ast_to_json(generate_program(config_from_json(json::parse(config)))).dump();
        } catch (const json::exception& e) {
          throw ConfigError(std::string("malformed generator config: ") + e.what());
        }
      },
      py::arg("config"), "AST JSON of the program the config describes.");
  m.def("ast_signature", [](const std::string& ast) { return ast_signature(ast_from_text(ast)); });
  m.def("emit_source", [](const std::string& ast, const std::string& dialect) {
    return emit_source(ast_from_text(ast), dialect_from_string(dialect)).source_text;
  });
  m.def(
      "hipify_lite",
      [](const std::string& source, std::optional<std::string> tool) {
        HipifyOptions opts;
        if (tool) opts.tool = *tool;
        return hipify_lite(source, opts);
      },
      py::arg("source"), py::arg("tool") = std::nullopt);
  m.def(
      "generate_inputs",
      [](const std::string& ast, std::size_t count, std::uint64_t seed) {
        std::vector<std::vector<std::string>> out;
        for (const auto& v : generate_input_vectors(ast_from_text(ast), count, seed)) out.push_back(v.argv());
        return out;
      },
      py::arg("ast"), py::arg("count"), py::arg("seed") = 0);
  m.def(
      "interpret",
      [](const std::string& ast_text, const std::vector<std::string>& args, bool wide_fp32) {
        const ProgramAst ast = ast_from_text(ast_text);
        EvalOptions opts;
        opts.wide_fp32_intermediates = wide_fp32;
        const OracleResult r = interpret(ast, input_from_args(ast, args), opts);
        return py::make_tuple(r.hexfloat, r.outcome);
      },
      py::arg("ast"), py::arg("args"), py::arg("wide_fp32_intermediates") = false,
      "(hexfloat, Outcome) of the strict IEEE evaluation.");

  m.def("default_registry", [] { return registry_to_json(default_registry()).dump(); });
  m.def(
      "build_command",
      [](const std::string& compiler, const std::string& level, const std::string& src, const std::string& out,
         std::optional<std::string> registry) {
        std::vector<CompilerSpec> reg = default_registry();
        if (registry) {
          const json j = json::parse(*registry, nullptr, false);
          if (j.is_discarded()) throw ConfigError("malformed compiler registry JSON");
          reg = registry_from_json(j);
        }
        return build_command(registry_entry(reg, compiler), opt_level_from_string(level), src, out);
      },
      py::arg("compiler"), py::arg("level"), py::arg("src"), py::arg("out"), py::arg("registry") = std::nullopt);

  m.def(
      "merge",
      [](const std::string& a, const std::string& b, std::optional<std::string> cross_level,
         std::optional<std::string> compiler_a, std::optional<std::string> compiler_b, double tolerance) {
        MergeOptions opts;
        opts.compiler_a = compiler_a;
        opts.compiler_b = compiler_b;
        opts.compare.relative_tolerance = tolerance;
        if (cross_level) {
          const auto colon = cross_level->find(':');
          if (colon == std::string::npos) throw ConfigError("cross_level expects 'LEVEL_A:LEVEL_B'");
          opts.cross_levels = std::pair{opt_level_from_string(cross_level->substr(0, colon)),
                                        opt_level_from_string(cross_level->substr(colon + 1))};
        }
        return merge_result_to_json(merge_platforms(parse_metadata(a), parse_metadata(b), opts)).dump();
      },
      py::arg("a"), py::arg("b"), py::arg("cross_level") = std::nullopt, py::arg("compiler_a") = std::nullopt,
      py::arg("compiler_b") = std::nullopt, py::arg("tolerance") = 0.0,
      "Comparison JSON from two metadata documents.");
  m.def(
      "report",
      [](const std::string& comparisons, const std::string& format) {
        MergeResult r;
        try {
          r = merge_result_from_json(json::parse(comparisons));
        } catch (const json::exception& e) {
          throw ConfigError(std::string("malformed comparison JSON: ") + e.what());
        }
        const Report rep = build_report(r);
        if (format == "text") return render_report_text(rep);
        if (format == "json") return report_to_json(rep).dump();
        throw ConfigError("format must be 'text' or 'json'");
      },
      py::arg("comparisons"), py::arg("format") = "json");
}
