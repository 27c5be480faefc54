// Exercises the shared-library C interface end to end.
#include "xdt/xdt.h"

#include <cassert>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

static int failures = 0;

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      std::fprintf(stderr, "FAILED %s:%d: %s\n", __FILE__, __LINE__, #cond); \
      failures++;                                                     \
    }                                                                 \
  } while (0)

static std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int main() {
  std::string nat = slurp(std::string(XDT_CORPUS_DIR) + "/nat.xdt");

  // load + decls
  xdt_program* p = xdt_program_load(nat.c_str());
  CHECK(p != nullptr);
  CHECK(xdt_last_status() == XDT_OK);
  CHECK(xdt_decl_count(p) == 5);
  CHECK(std::string(xdt_decl_name(p, 0)) == "zero");
  char* s = xdt_decl_scheme(p, 0);
  CHECK(std::string(s) == "mu(\\X:*. 1 + X)");
  xdt_string_free(s);

  // kind / norm queries
  char* k = xdt_kind_of(p, "NatF");
  CHECK(k && std::string(k) == "* -> *");
  xdt_string_free(k);
  char* bad = xdt_kind_of(p, "Missing");
  CHECK(bad == nullptr);
  CHECK(xdt_last_status() == XDT_ERR_USAGE);
  char* n = xdt_norm_of(p, "Nat");
  CHECK(n && std::string(n) == "mu(\\X:*. 1 + X)");
  xdt_string_free(n);

  // evaluation with a trace callback
  std::vector<std::string> rules;
  auto trace = [](const char* rule, const char* term, void* user) {
    (void)term;
    static_cast<std::vector<std::string>*>(user)->push_back(rule);
  };
  xdt_eval_result* r = xdt_eval(p, 100000, trace, &rules);
  CHECK(r != nullptr);
  CHECK(r->status == XDT_OK);
  CHECK(r->steps > 0);
  CHECK((long)rules.size() == r->steps);
  CHECK(r->observation != nullptr);
  CHECK(std::string(r->observation) ==
        "mu(inr(mu(inr(mu(inr(mu(inr(mu(inr(mu(inl(unit))))))))))))");
  xdt_eval_result_free(r);

  // fuel exhaustion surfaces as a status
  xdt_eval_result* r2 = xdt_eval(p, 3, nullptr, nullptr);
  CHECK(r2 && r2->status == XDT_ERR_FUEL);
  xdt_eval_result_free(r2);

  // oracle comparison
  xdt_oracle_result* o = xdt_oracle(p, 100000);
  CHECK(o != nullptr);
  CHECK(o->agree == 1);
  CHECK(std::string(o->machine_observation) == std::string(o->oracle_observation));
  xdt_oracle_result_free(o);
  xdt_program_free(p);

  // diagnostics carry positions
  xdt_program* badProg = xdt_program_load("let x : 1 = (\\y. y;\n");
  CHECK(badProg == nullptr);
  CHECK(xdt_last_status() == XDT_ERR_PARSE);
  CHECK(xdt_last_error_line() == 1);
  CHECK(xdt_last_error_col() > 1);
  CHECK(std::strlen(xdt_last_error_message()) > 0);

  xdt_program* illTyped = xdt_program_load("let x : 1 => 1 = tt;\n");
  CHECK(illTyped == nullptr);
  CHECK(xdt_last_status() == XDT_ERR_CHECK);
  CHECK(std::string(xdt_last_error_code()) == "type-mismatch");

  if (failures == 0) std::puts("test_capi: all checks passed");
  return failures == 0 ? 0 : 1;
}
