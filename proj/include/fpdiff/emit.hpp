#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fpdiff/ast.hpp"

namespace fpdiff {

enum class Dialect { CUDA, HIP, PortableC };

std::string_view to_string(Dialect d);  // "cuda", "hip", "c"
Dialect dialect_from_string(std::string_view s);
std::string_view file_extension(Dialect d);  // ".cu", ".hip", ".c"

struct SourceBundle {
  std::string test_id;
  Dialect dialect = Dialect::PortableC;
  std::string source_text;
  Precision precision = Precision::FP64;

  /// `<test_id><ext>`
  std::string file_name() const;
};

/// Source text of one expression, with the parentheses C precedence requires.
std::string render_expr(const Expr& e, Precision p);

/// Renders the kernel plus a main() harness. The test id is ast_signature(ast).
SourceBundle emit_source(const ProgramAst& ast, Dialect dialect);

/// Text of the body of the `compute` kernel (between its outer braces).
/// Returns nullopt if no kernel definition is found.
std::optional<std::string> kernel_body(std::string_view source);

struct HipifyOptions {
  /// External translator (e.g. hipify-perl). When set, it is invoked on a
  /// temporary copy of the source and its stdout is returned verbatim.
  std::optional<std::string> tool;
};

/// Rewrites CUDA sources produced by emit_source into HIP: runtime header,
/// memory-management calls and `<<<...>>>` launches. Kernel text is copied
/// unchanged. Throws UnsupportedConstructError for CUDA features outside the
/// generated subset.
std::string hipify_lite(std::string_view cuda_source, const HipifyOptions& options = {});

}  // namespace fpdiff
