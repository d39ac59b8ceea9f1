// Copyright 2026 The dexlift Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dexlift/cli/cli.h"

#include <CLI11.hpp>

#include <chrono>
#include <iomanip>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "dexlift/analyses/analyses.h"
#include "dexlift/dex/dex_file.h"
#include "dexlift/error.h"
#include "dexlift/ir/text.h"
#include "dexlift/isa/instruction.h"
#include "dexlift/isa/opcodes.h"
#include "dexlift/lift/lifter.h"
#include "dexlift/passes/passes.h"

namespace dexlift::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kUnsupportedOpcode:
    case ErrorCode::kUnknownOpcode:
      return kExitUnsupported;
    case ErrorCode::kTypeConflict:
    case ErrorCode::kUntypable:
    case ErrorCode::kConflictingEvidence:
    case ErrorCode::kNonZeroNull:
      return kExitTyping;
    default:
      return kExitParse;
  }
}

// Lower nonzero codes are more severe.
void merge(int& status, int code) {
  if (code != kExitOk && (status == kExitOk || code < status)) status = code;
}

std::string hex4(uint32_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(4) << std::setfill('0') << v;
  return s.str();
}

struct Timings {
  std::map<std::string, Clock::duration> phases;
  void add(const std::string& phase, Clock::duration d) { phases[phase] += d; }
  void print(std::ostream& err) const {
    for (const char* p : {"parse", "lift", "type", "optimize"}) {
      const auto it = phases.find(p);
      const double ms = it == phases.end() ? 0.0 : std::chrono::duration<double, std::milli>(it->second).count();
      err << "timing " << p << " " << std::fixed << std::setprecision(3) << ms << " ms\n";
    }
  }
};

struct Selector {
  std::string cls;
  std::string name;

  bool matches(const dex::MethodRef& m) const {
    if (m.name != name) return false;
    if (cls == m.owner) return true;
    const std::string dotted = dex::descriptor_to_class_name(m.owner);
    if (cls == dotted) return true;
    const auto dot = dotted.rfind('.');
    return dot != std::string::npos && cls == dotted.substr(dot + 1);
  }
};

std::optional<Selector> parse_selector(const std::string& text) {
  const auto dot = text.rfind('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == text.size()) return std::nullopt;
  return Selector{text.substr(0, dot), text.substr(dot + 1)};
}

struct Method {
  const dex::ClassDef* cls;
  const dex::MethodDef* def;
  const dex::MethodRef* ref;
};

std::vector<Method> methods_of(const dex::DexFile& dex) {
  std::vector<Method> out;
  for (const auto& c : dex.class_defs()) {
    for (const auto* list : {&c.direct_methods, &c.virtual_methods}) {
      for (const auto& m : *list) out.push_back({&c, &m, &dex::resolve_method(dex, m.method_idx)});
    }
  }
  return out;
}

class Driver {
 public:
  Driver(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int status = kExitOk;
  Timings timings;

  std::optional<dex::DexFile> load(const std::string& path) {
    const auto start = Clock::now();
    try {
      dex::DexFile dex = dex::read_dex_file(path);
      timings.add("parse", Clock::now() - start);
      return dex;
    } catch (const Error& e) {
      report(e, path);
      return std::nullopt;
    }
  }

  // Lifts and types one method; nullopt (with the failure recorded) on error.
  std::optional<ir::Body> lift(const dex::DexFile& dex, const Method& m, bool optimize) {
    const dex::CodeItem* code = dex::method_code(dex, *m.def);
    if (code == nullptr) return std::nullopt;
    try {
      auto start = Clock::now();
      ir::Body body = lift::lift_method(dex, *m.def, *code);
      timings.add("lift", Clock::now() - start);
      passes::PipelineOptions opts;
      opts.optimize = optimize;
      const passes::PipelineReport report = passes::run_pipeline(body, opts);
      for (const auto& st : report.stages) {
        const bool cleanup = st.stage == "eliminate-nops" || st.stage == "remove-unused-locals";
        timings.add(cleanup ? "optimize" : "type", st.elapsed);
        for (const auto& v : st.violations) {
          err_ << "error: " << m.ref->to_string() << ": validator after " << st.stage << ": " << v << "\n";
          merge(status, kExitParse);
        }
      }
      return body;
    } catch (const Error& e) {
      report(e, m.ref->to_string());
      return std::nullopt;
    }
  }

  void report(const Error& e, const std::string& where) {
    err_ << "error: " << (e.method.empty() ? where : e.method) << ": " << error_code_name(e.code());
    if (e.opcode) err_ << " opcode 0x" << std::hex << std::setw(2) << std::setfill('0') << int{*e.opcode};
    if (e.address) err_ << " at 0x" << std::hex << std::setw(4) << std::setfill('0') << *e.address;
    err_ << std::dec << std::setfill(' ') << ": " << e.what() << "\n";
    merge(status, exit_code_for(e));
  }

  bool write_file(const fs::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f) {
      err_ << "error: cannot write " << path.string() << "\n";
      merge(status, kExitParse);
      return false;
    }
    out_ << path.string() << "\n";
    return true;
  }

  void disasm(const dex::DexFile& dex) {
    const isa::PoolResolver resolver = [&](isa::PoolKind kind, uint32_t idx) -> std::string {
      switch (kind) {
        case isa::PoolKind::kString: return "\"" + dex::resolve_string(dex, idx) + "\"";
        case isa::PoolKind::kType: return dex::resolve_type(dex, idx);
        case isa::PoolKind::kField: return dex::resolve_field(dex, idx).to_string();
        case isa::PoolKind::kMethod: return dex::resolve_method(dex, idx).to_string();
        default: return "?";
      }
    };
    for (const Method& m : methods_of(dex)) {
      const dex::CodeItem* code = dex::method_code(dex, *m.def);
      out_ << "method " << m.ref->to_string();
      if (code == nullptr) {
        out_ << " (no code)\n\n";
        continue;
      }
      out_ << " registers=" << code->registers_size << " ins=" << code->ins_size << " outs=" << code->outs_size
           << "\n";
      try {
        const auto start = Clock::now();
        const std::vector<isa::Instruction> insns = isa::decode_stream(code->insns);
        timings.add("lift", Clock::now() - start);
        out_ << isa::disassemble(insns, resolver);
        for (const auto& t : code->tries) {
          for (const auto& h : t.handlers) {
            out_ << "catch " << h.exception_type.value_or("*") << " " << hex4(t.start_address) << ".."
                 << hex4(t.start_address + t.instruction_count) << " -> " << hex4(h.address) << "\n";
          }
        }
      } catch (const Error& e) {
        report(e, m.ref->to_string());
      }
      out_ << "\n";
    }
  }

  void lift_all(const dex::DexFile& dex, const fs::path& dir, bool optimize, const std::optional<Selector>& sel) {
    std::map<std::string, std::string> files;  // class descriptor -> text, in class order below
    std::vector<std::string> order;
    if (!sel) {
      for (const auto& c : dex.class_defs()) order.push_back(c.this_type);
    }
    for (const Method& m : methods_of(dex)) {
      if (sel && !sel->matches(*m.ref)) continue;
      if (sel && !files.count(m.cls->this_type)) order.push_back(m.cls->this_type);
      std::string& text = files[m.cls->this_type];
      std::optional<ir::Body> body = lift(dex, m, optimize);
      if (!body) continue;
      if (!text.empty()) text += "\n";
      text += ir::emit_text(*body);
    }
    if (sel && order.empty()) {
      err_ << "error: no method matches " << sel->cls << "." << sel->name << "\n";
      merge(status, kExitUsage);
      return;
    }
    for (const std::string& cls : order) {
      write_file(dir / (dex::descriptor_to_class_name(cls) + ".ir"), files[cls]);
    }
  }

  void cfg(const dex::DexFile& dex, const fs::path& dir, const Selector& sel, bool exceptional) {
    bool found = false;
    for (const Method& m : methods_of(dex)) {
      if (!sel.matches(*m.ref)) continue;
      found = true;
      std::optional<ir::Body> body = lift(dex, m, true);
      if (!body) continue;
      write_file(dir / analyses::cfg_file_name(body->signature), analyses::cfg_to_dot(*body, exceptional));
    }
    if (!found) {
      err_ << "error: no method matches " << sel.cls << "." << sel.name << "\n";
      merge(status, kExitUsage);
    }
  }

  void callgraph(const dex::DexFile& dex, const fs::path& dir) {
    std::vector<ir::Body> bodies;
    for (const Method& m : methods_of(dex)) {
      std::optional<ir::Body> body = lift(dex, m, true);
      if (body) bodies.push_back(std::move(*body));
    }
    std::vector<const ir::Body*> ptrs;
    for (const auto& b : bodies) ptrs.push_back(&b);
    const analyses::CallGraph cg = analyses::build_call_graph(dex, ptrs);
    write_file(dir / analyses::kCallGraphFileName, analyses::callgraph_to_dot(cg));
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lifts Dalvik bytecode to a typed three-address IR.", "dexlift"};
  app.require_subcommand(1);
  bool timings = false;
  app.add_flag("--timings", timings, "Print per-phase wall-clock durations");

  std::string file;
  std::string out_dir = ".";
  std::string method;
  bool no_opt = false;
  bool exceptional = false;

  CLI::App* disasm = app.add_subcommand("disasm", "Disassemble every method");
  disasm->add_option("file", file, "Input .dex file")->required();

  CLI::App* lift = app.add_subcommand("lift", "Write one IR file per class");
  lift->add_option("file", file, "Input .dex file")->required();
  lift->add_option("--out", out_dir, "Output directory");
  lift->add_flag("--no-opt", no_opt, "Type only; skip the cleanup passes");
  lift->add_option("--method", method, "Only this method (Class.name)");

  CLI::App* cfg = app.add_subcommand("cfg", "Write the control flow graph of a method as DOT");
  cfg->add_option("file", file, "Input .dex file")->required();
  cfg->add_option("--method", method, "Method (Class.name)")->required();
  cfg->add_option("--out", out_dir, "Output directory");
  cfg->add_flag("--exceptional-edges", exceptional, "Include edges into exception handlers");

  CLI::App* callgraph = app.add_subcommand("callgraph", "Write the call graph as DOT");
  callgraph->add_option("file", file, "Input .dex file")->required();
  callgraph->add_option("--out", out_dir, "Output directory");

  for (CLI::App* sub : {disasm, lift, cfg, callgraph}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::optional<Selector> selector;
  if (!method.empty()) {
    selector = parse_selector(method);
    if (!selector) {
      err << "error: --method expects Class.name, got " << method << "\n";
      return kExitUsage;
    }
  }

  Driver driver(out, err);
  std::optional<dex::DexFile> dex = driver.load(file);
  if (dex) {
    if (disasm->parsed()) {
      driver.disasm(*dex);
    } else if (lift->parsed()) {
      driver.lift_all(*dex, out_dir, !no_opt, selector);
    } else if (cfg->parsed()) {
      driver.cfg(*dex, out_dir, *selector, exceptional);
    } else {
      driver.callgraph(*dex, out_dir);
    }
  }
  if (timings) driver.timings.print(err);
  return driver.status;
}

}  // namespace dexlift::cli
