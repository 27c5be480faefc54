// xdt command line: check, eval, kind, norm. Links the C API only.
#include "xdt/xdt.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheck = 1;
constexpr int kExitFuel = 2;
constexpr int kExitStuck = 3;
constexpr int kExitUsage = 64;

bool g_json = false;

void reportError() {
  if (g_json) {
    nlohmann::json j{{"code", xdt_last_error_code()},
                     {"message", xdt_last_error_message()},
                     {"line", xdt_last_error_line()},
                     {"col", xdt_last_error_col()}};
    std::cerr << j.dump() << "\n";
  } else {
    std::cerr << "error";
    if (xdt_last_error_line() > 0)
      std::cerr << " at " << xdt_last_error_line() << ":" << xdt_last_error_col();
    std::cerr << " [" << xdt_last_error_code() << "]: " << xdt_last_error_message() << "\n";
  }
}

int exitFor(xdt_status s) {
  switch (s) {
    case XDT_OK: return kExitOk;
    case XDT_ERR_FUEL: return kExitFuel;
    case XDT_ERR_STUCK: return kExitStuck;
    case XDT_ERR_USAGE: return kExitUsage;
    default: return kExitCheck;
  }
}

xdt_program* load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    return nullptr;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  return xdt_program_load(text.c_str());
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"xdt - a toolchain for a calculus of extensible data types"};
  app.require_subcommand(1);

  std::string path, typeName;
  long fuel = 1'000'000;
  bool trace = false, oracle = false;

  CLI::App* cmdCheck = app.add_subcommand("check", "type-check a program");
  cmdCheck->add_option("file", path)->required();
  cmdCheck->add_flag("--json", g_json, "machine-readable diagnostics");

  CLI::App* cmdEval = app.add_subcommand("eval", "evaluate main");
  cmdEval->add_option("file", path)->required();
  cmdEval->add_flag("--trace", trace, "print one line per reduction step");
  cmdEval->add_flag("--oracle", oracle, "compare against the definitional interpreter");
  cmdEval->add_option("--fuel", fuel, "step budget")->check(CLI::PositiveNumber);
  cmdEval->add_flag("--json", g_json);

  CLI::App* cmdKind = app.add_subcommand("kind", "print the kind of a declared type");
  cmdKind->add_option("file", path)->required();
  cmdKind->add_option("type", typeName)->required();
  cmdKind->add_flag("--json", g_json);

  CLI::App* cmdNorm = app.add_subcommand("norm", "print the normal form of a declared type");
  cmdNorm->add_option("file", path)->required();
  cmdNorm->add_option("type", typeName)->required();
  cmdNorm->add_flag("--json", g_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  xdt_program* prog = load(path);
  if (!prog) {
    if (xdt_last_status() != XDT_OK) {
      reportError();
      return exitFor(xdt_last_status());
    }
    return kExitUsage;
  }

  int rc = kExitOk;
  if (cmdCheck->parsed()) {
    int n = xdt_decl_count(prog);
    for (int i = 0; i < n; i++) {
      char* s = xdt_decl_scheme(prog, i);
      std::cout << "OK " << xdt_decl_name(prog, i) << " : " << s << "\n";
      xdt_string_free(s);
    }
  } else if (cmdKind->parsed() || cmdNorm->parsed()) {
    char* s = cmdKind->parsed() ? xdt_kind_of(prog, typeName.c_str())
                                : xdt_norm_of(prog, typeName.c_str());
    if (!s) {
      reportError();
      rc = exitFor(xdt_last_status());
    } else {
      std::cout << s << "\n";
      xdt_string_free(s);
    }
  } else if (cmdEval->parsed()) {
    if (oracle) {
      xdt_oracle_result* r = xdt_oracle(prog, fuel);
      if (!r) {
        reportError();
        rc = exitFor(xdt_last_status());
      } else {
        std::cout << "machine: " << r->machine_observation << "\n";
        std::cout << "oracle:  " << r->oracle_observation << "\n";
        std::cout << (r->agree ? "AGREE" : "DISAGREE") << "\n";
        rc = r->agree ? kExitOk : kExitCheck;
        xdt_oracle_result_free(r);
      }
    } else {
      xdt_trace_fn tf = nullptr;
      if (trace)
        tf = [](const char* rule, const char* term, void*) {
          std::cout << "rule=" << rule << "  " << term << "\n";
        };
      xdt_eval_result* r = xdt_eval(prog, fuel, tf, nullptr);
      if (!r) {
        reportError();
        rc = exitFor(xdt_last_status());
      } else {
        if (r->status == XDT_OK) {
          std::cout << r->value << "\n";
          if (r->observation) std::cout << "observation: " << r->observation << "\n";
        } else {
          reportError();
        }
        rc = exitFor(r->status);
        xdt_eval_result_free(r);
      }
    }
  }

  xdt_program_free(prog);
  return rc;
}
