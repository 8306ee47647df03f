#pragma once

#include <nlohmann/json.hpp>

#include "fpdiff/ast.hpp"
#include "fpdiff/program_gen.hpp"

namespace fpdiff {

/// Canonical JSON form of a program, used for replay and for the signature.
nlohmann::json ast_to_json(const ProgramAst& ast);
ProgramAst ast_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const GenConfig& config);
GenConfig config_from_json(const nlohmann::json& j);

}  // namespace fpdiff
