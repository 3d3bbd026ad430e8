#include "stablecubes.h"

#include <cstring>
#include <string>
#include <vector>

#include "scube/pipeline.hpp"

using namespace scube;

struct scube_instance {
  GeneratedInstance g;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

int fail(int code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

}  // namespace

extern "C" {

int scube_abi_version(void) { return 1; }

const char* scube_last_error(void) { return g_last_error.c_str(); }

int scube_instance_generate(uint64_t seed, scube_instance** out) {
  if (!out) return fail(SCUBE_USAGE, "null output pointer");
  try {
    auto* h = new scube_instance{generate_instance(seed)};
    *out = h;
    g_last_error.clear();
    return SCUBE_OK;
  } catch (const SpecError& e) {
    return fail(SCUBE_ERROR, e.what());
  }
}

int scube_instance_from_json(const char* text, scube_instance** out) {
  if (!text || !out) return fail(SCUBE_USAGE, "null argument");
  try {
    auto* h = new scube_instance{instance_from_json_string(text)};
    *out = h;
    g_last_error.clear();
    return SCUBE_OK;
  } catch (const SpecError& e) {
    return fail(SCUBE_ERROR, e.what());
  }
}

int scube_instance_to_json(const scube_instance* in, char** out_json) {
  if (!in || !out_json) return fail(SCUBE_USAGE, "null argument");
  *out_json = dup_string(instance_to_json_string(in->g));
  g_last_error.clear();
  return SCUBE_OK;
}

int scube_instance_validate(const scube_instance* in, char** out_report) {
  if (!in) return fail(SCUBE_USAGE, "null instance");
  Report r = validate_instance(in->g.inst);
  if (out_report) {
    std::string rep = "{\"pass\": ";
    rep += r.ok() ? "true" : "false";
    if (!r.ok()) rep += ", \"first_failure\": \"" + r.first_failure() + "\"";
    rep += "}\n";
    *out_report = dup_string(rep);
  }
  g_last_error.clear();
  return r.ok() ? SCUBE_OK : SCUBE_CHECK_FAILED;
}

int scube_instance_bicomb(const scube_instance* in, uint64_t seed,
                          char** out_report) {
  if (!in) return fail(SCUBE_USAGE, "null instance");
  try {
    Point a2, b2;
    GeneratedInstance g = in->g;
    perturb_pair(g, seed, a2, b2);
    FellowTravelReport ft = fellow_traveling(g.inst, g.a, g.b, a2, b2);
    bool ok = ft.report.ok() && ft.diagram.report.ok();
    if (out_report) {
      std::string rep = "{\"pass\": ";
      rep += ok ? "true" : "false";
      rep += ", \"sup\": " + std::to_string(ft.sup);
      rep += ", \"B0\": " + std::to_string(ft.B0);
      rep += ", \"Sigma\": " + std::to_string(ft.diagram.Sigma) + "}\n";
      *out_report = dup_string(rep);
    }
    g_last_error.clear();
    return ok ? SCUBE_OK : SCUBE_CHECK_FAILED;
  } catch (const SpecError& e) {
    return fail(SCUBE_ERROR, e.what());
  }
}

int scube_run_command(int argc, const char* const* argv, char** out_json) {
  std::vector<std::string> args;
  for (int i = 0; i < argc; ++i) args.push_back(argv[i] ? argv[i] : "");
  std::string out;
  int code = run_command(args, out);
  if (out_json) *out_json = dup_string(out);
  if (code == 2) g_last_error = "usage error";
  else g_last_error.clear();
  return code;
}

void scube_instance_free(scube_instance* in) { delete in; }

void scube_string_free(char* s) { delete[] s; }

}  // extern "C"
