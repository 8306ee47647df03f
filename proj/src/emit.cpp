#include "fpdiff/emit.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>

#include "fpdiff/error.hpp"
#include "fpdiff/process.hpp"
#include "fpdiff/program_gen.hpp"

namespace fpdiff {

std::string_view to_string(Dialect d) {
  switch (d) {
    case Dialect::CUDA: return "cuda";
    case Dialect::HIP: return "hip";
    case Dialect::PortableC: return "c";
  }
  throw DialectError("unknown dialect tag " + std::to_string(static_cast<int>(d)));
}

Dialect dialect_from_string(std::string_view s) {
  if (s == "cuda" || s == "CUDA") return Dialect::CUDA;
  if (s == "hip" || s == "HIP") return Dialect::HIP;
  if (s == "c" || s == "C" || s == "portable-c" || s == "PortableC") return Dialect::PortableC;
  throw DialectError("unknown dialect '" + std::string(s) + "'");
}

std::string_view file_extension(Dialect d) {
  switch (d) {
    case Dialect::CUDA: return ".cu";
    case Dialect::HIP: return ".hip";
    case Dialect::PortableC: return ".c";
  }
  throw DialectError("unknown dialect tag " + std::to_string(static_cast<int>(d)));
}

std::string SourceBundle::file_name() const { return test_id + std::string(file_extension(dialect)); }

namespace {

int precedence(BinaryOp op) { return op == BinaryOp::Add || op == BinaryOp::Sub ? 1 : 2; }

void render_into(const Expr& e, Precision p, std::string& out) {
  switch (e.kind) {
    case Expr::Kind::Literal: out += e.literal.render(p); return;
    case Expr::Kind::VarRef: out += e.name; return;
    case Expr::Kind::CompRef: out += "comp"; return;
    case Expr::Kind::ArrayRef:
      out += e.name;
      out += '[';
      out += e.index;
      out += ']';
      return;
    case Expr::Kind::Paren:
      out += '(';
      render_into(e.args.at(0), p, out);
      out += ')';
      return;
    case Expr::Kind::MathCall:
      out += e.name;
      out += '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        render_into(e.args[i], p, out);
      }
      out += ')';
      return;
    case Expr::Kind::BinOp: {
      const Expr& lhs = e.args.at(0);
      const Expr& rhs = e.args.at(1);
      // Left-associative: a right operand of equal precedence needs grouping.
      const bool wrap_l = lhs.kind == Expr::Kind::BinOp && precedence(lhs.op) < precedence(e.op);
      const bool wrap_r = rhs.kind == Expr::Kind::BinOp && precedence(rhs.op) <= precedence(e.op);
      if (wrap_l) out += '(';
      render_into(lhs, p, out);
      if (wrap_l) out += ')';
      out += ' ';
      out += to_string(e.op);
      out += ' ';
      if (wrap_r) out += '(';
      render_into(rhs, p, out);
      if (wrap_r) out += ')';
      return;
    }
  }
}

class SourceWriter {
 public:
  SourceWriter(const ProgramAst& ast, Dialect dialect) : ast_(ast), dialect_(dialect) {}

  std::string run() {
    header();
    kernel();
    main_function();
    return std::move(out_);
  }

 private:
  std::string_view fp() const { return fp_type_name(ast_.precision); }
  bool device() const { return dialect_ != Dialect::PortableC; }

  void line(int indent, std::string_view text) {
    out_.append(static_cast<std::size_t>(indent) * 2, ' ');
    out_ += text;
    out_ += '\n';
  }

  void header() {
    line(0, "/* fpdiff test " + ast_signature(ast_) + " (" + std::string(to_string(ast_.precision)) + ") */");
    line(0, "#include <stdio.h>");
    line(0, "#include <stdlib.h>");
    line(0, "#include <math.h>");
    if (dialect_ == Dialect::CUDA) line(0, "#include <cuda_runtime.h>");
    if (dialect_ == Dialect::HIP) line(0, "#include <hip/hip_runtime.h>");
    line(0, "");
  }

  void kernel() {
    if (device()) line(0, "__global__");
    std::string sig = "void " + ast_.kernel_name + "(";
    for (std::size_t i = 0; i < ast_.params.size(); ++i) {
      const Param& p = ast_.params[i];
      if (i) sig += ", ";
      switch (p.kind) {
        case Param::Kind::IntScalar: sig += "int "; break;
        case Param::Kind::FpArray: sig += std::string(fp()) + "* "; break;
        default: sig += std::string(fp()) + " "; break;
      }
      sig += p.name;
    }
    sig += ") {";
    line(0, sig);
    statements(ast_.body, 1);
    line(0, "}");
    line(0, "");
  }

  std::string expr(const Expr& e) const { return render_expr(e, ast_.precision); }

  void statements(const std::vector<Stmt>& body, int indent) {
    for (const Stmt& s : body) {
      switch (s.kind) {
        case Stmt::Kind::TempDecl:
          line(indent, std::string(fp()) + " " + s.name + " = " + expr(s.rhs) + ";");
          break;
        case Stmt::Kind::Accumulate:
          line(indent, "comp " + std::string(to_string(s.accum)) + " " + expr(s.rhs) + ";");
          break;
        case Stmt::Kind::ArrayStore:
          line(indent, s.name + "[" + s.var + "] = " + expr(s.rhs) + ";");
          break;
        case Stmt::Kind::ForLoop:
          line(indent, "for (int " + s.var + " = 0; " + s.var + " < " + s.name + "; ++" + s.var + ") {");
          statements(s.body, indent + 1);
          line(indent, "}");
          break;
        case Stmt::Kind::IfBlock:
          line(indent, "if (" + expr(s.lhs) + " " + std::string(to_string(s.cmp)) + " " + expr(s.rhs) + ") {");
          statements(s.body, indent + 1);
          line(indent, "}");
          break;
        case Stmt::Kind::PrintComp:
          line(indent, "printf(\"%a\\n\", comp);");
          break;
      }
    }
  }

  void main_function() {
    const std::string parse = ast_.precision == Precision::FP64 ? "strtod" : "strtof";
    const std::string len = std::to_string(ast_.array_length);
    const std::string bytes = len + " * sizeof(" + std::string(fp()) + ")";

    line(0, "int main(int argc, char** argv) {");
    line(1, "if (argc != " + std::to_string(ast_.params.size() + 1) + ") {");
    line(2, "fprintf(stderr, \"expected " + std::to_string(ast_.params.size()) + " arguments\\n\");");
    line(2, "return 1;");
    line(1, "}");

    std::vector<std::string> call_args;
    for (std::size_t i = 0; i < ast_.params.size(); ++i) {
      const Param& p = ast_.params[i];
      const std::string arg = "argv[" + std::to_string(i + 1) + "]";
      switch (p.kind) {
        case Param::Kind::IntScalar:
          line(1, "int " + p.name + " = atoi(" + arg + ");");
          call_args.push_back(p.name);
          break;
        case Param::Kind::FpArray: {
          const std::string host = "host_" + p.name;
          line(1, std::string(fp()) + " " + host + "[" + len + "];");
          line(1, "for (int n = 0; n < " + len + "; ++n) " + host + "[n] = " + parse + "(" + arg + ", NULL);");
          if (device()) {
            const std::string api = dialect_ == Dialect::CUDA ? "cuda" : "hip";
            line(1, std::string(fp()) + "* " + p.name + " = NULL;");
            line(1, api + "Malloc((void**)&" + p.name + ", " + bytes + ");");
            line(1, api + "Memcpy(" + p.name + ", " + host + ", " + bytes + ", " + api + "MemcpyHostToDevice);");
            call_args.push_back(p.name);
          } else {
            call_args.push_back(host);
          }
          break;
        }
        default:
          line(1, std::string(fp()) + " " + p.name + " = " + parse + "(" + arg + ", NULL);");
          call_args.push_back(p.name);
          break;
      }
    }

    std::string args;
    for (std::size_t i = 0; i < call_args.size(); ++i) {
      if (i) args += ", ";
      args += call_args[i];
    }
    switch (dialect_) {
      case Dialect::CUDA:
        line(1, ast_.kernel_name + "<<<1, 1>>>(" + args + ");");
        line(1, "cudaDeviceSynchronize();");
        break;
      case Dialect::HIP:
        line(1, "hipLaunchKernelGGL(" + ast_.kernel_name + ", dim3(1), dim3(1), 0, 0" +
                    (args.empty() ? "" : ", " + args) + ");");
        line(1, "hipDeviceSynchronize();");
        break;
      case Dialect::PortableC:
        line(1, ast_.kernel_name + "(" + args + ");");
        break;
    }
    if (device()) {
      const std::string api = dialect_ == Dialect::CUDA ? "cuda" : "hip";
      for (const Param& p : ast_.params) {
        if (p.kind == Param::Kind::FpArray) line(1, api + "Free(" + p.name + ");");
      }
    }
    line(1, "return 0;");
    line(0, "}");
  }

  const ProgramAst& ast_;
  Dialect dialect_;
  std::string out_;
};

}  // namespace

std::string render_expr(const Expr& e, Precision p) {
  std::string out;
  render_into(e, p, out);
  return out;
}

SourceBundle emit_source(const ProgramAst& ast, Dialect dialect) {
  (void)file_extension(dialect);  // rejects unknown tags
  SourceBundle bundle;
  bundle.test_id = ast_signature(ast);
  bundle.dialect = dialect;
  bundle.precision = ast.precision;
  bundle.source_text = SourceWriter(ast, dialect).run();
  return bundle;
}

std::optional<std::string> kernel_body(std::string_view source) {
  const auto sig = source.find("void compute(");
  if (sig == std::string_view::npos) return std::nullopt;
  const auto open = source.find('{', sig);
  if (open == std::string_view::npos) return std::nullopt;
  int depth = 0;
  for (std::size_t i = open; i < source.size(); ++i) {
    if (source[i] == '{') ++depth;
    if (source[i] == '}' && --depth == 0) return std::string(source.substr(open + 1, i - open - 1));
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// CUDA -> HIP
// ---------------------------------------------------------------------------

namespace {

std::string hipify_external(std::string_view source, const std::string& tool) {
  char path[] = "/tmp/fpdiff-hipify-XXXXXX.cu";
  const int fd = ::mkstemps(path, 3);
  if (fd < 0) throw Error("cannot create temporary file for hipify");
  ::close(fd);
  {
    std::ofstream f(path, std::ios::binary);
    f << source;
  }
  ProcessResult r;
  try {
    r = run_process({tool, path}, std::chrono::seconds(120));
  } catch (...) {
    std::filesystem::remove(path);
    throw;
  }
  std::filesystem::remove(path);
  if (r.timed_out || r.exit_status != 0) {
    throw Error("hipify tool '" + tool + "' failed: " + r.err);
  }
  return r.out;
}

// Splits a launch argument list at top-level commas.
std::vector<std::string> split_top_level(std::string_view text) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : text) {
    if (c == '(' || c == '[' || c == '<') ++depth;
    if (c == ')' || c == ']' || c == '>') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
      continue;
    }
    cur += c;
  }
  parts.push_back(cur);
  for (auto& p : parts) {
    const auto b = p.find_first_not_of(" \t\n");
    const auto e = p.find_last_not_of(" \t\n");
    p = b == std::string::npos ? "" : p.substr(b, e - b + 1);
  }
  return parts;
}

std::string rewrite_launches(const std::string& src) {
  static const std::regex launch(R"(([A-Za-z_]\w*)\s*<<<([^<>;]*)>>>\s*\()");
  std::string out;
  auto begin = src.cbegin();
  std::smatch m;
  while (std::regex_search(begin, src.cend(), m, launch)) {
    out.append(begin, m[0].first);
    const auto config = split_top_level(m[2].str());
    if (config.size() < 2 || config.size() > 4) throw UnsupportedConstructError("<<<" + m[2].str() + ">>>");
    const std::string shared = config.size() > 2 ? config[2] : "0";
    const std::string stream = config.size() > 3 ? config[3] : "0";
    out += "hipLaunchKernelGGL(" + m[1].str() + ", dim3(" + config[0] + "), dim3(" + config[1] + "), " +
           shared + ", " + stream;
    begin = m[0].second;
    // An empty argument list closes immediately.
    auto next = begin;
    while (next != src.cend() && (*next == ' ' || *next == '\t')) ++next;
    if (next == src.cend() || *next != ')') out += ", ";
  }
  out.append(begin, src.cend());
  return out;
}

}  // namespace

std::string hipify_lite(std::string_view cuda_source, const HipifyOptions& options) {
  if (options.tool) return hipify_external(cuda_source, *options.tool);

  static const std::vector<std::string> unsupported = {
      "threadIdx", "blockIdx", "blockDim", "gridDim", "__shared__", "__constant__",
      "__syncthreads", "texture<", "surface<", "#include <cuda.h>"};
  std::string src(cuda_source);
  for (const auto& construct : unsupported) {
    if (src.find(construct) != std::string::npos) throw UnsupportedConstructError(construct);
  }

  static const std::regex runtime_header(R"(#include\s*[<"]cuda_runtime(_api)?\.h[>"])");
  src = std::regex_replace(src, runtime_header, "#include <hip/hip_runtime.h>");

  static const std::vector<std::pair<std::string, std::string>> renames = {
      {"cudaMalloc", "hipMalloc"},
      {"cudaMemcpy", "hipMemcpy"},
      {"cudaMemcpyHostToDevice", "hipMemcpyHostToDevice"},
      {"cudaMemcpyDeviceToHost", "hipMemcpyDeviceToHost"},
      {"cudaFree", "hipFree"},
      {"cudaDeviceSynchronize", "hipDeviceSynchronize"},
      {"cudaGetLastError", "hipGetLastError"},
      {"cudaError_t", "hipError_t"},
      {"cudaSuccess", "hipSuccess"},
  };
  static const std::regex cuda_ident(R"(\bcuda[A-Za-z0-9_]*)");
  std::string renamed;
  auto begin = src.cbegin();
  std::smatch m;
  while (std::regex_search(begin, src.cend(), m, cuda_ident)) {
    renamed.append(begin, m[0].first);
    const std::string ident = m[0].str();
    auto it = std::find_if(renames.begin(), renames.end(), [&](const auto& r) { return r.first == ident; });
    if (it == renames.end()) throw UnsupportedConstructError(ident);
    renamed += it->second;
    begin = m[0].second;
  }
  renamed.append(begin, src.cend());

  std::string out = rewrite_launches(renamed);
  if (out.find("<<<") != std::string::npos) throw UnsupportedConstructError("<<<");
  return out;
}

}  // namespace fpdiff
