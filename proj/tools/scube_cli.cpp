#include <cstdio>

#include "stablecubes.h"

// thin argv passthrough; all behavior lives behind the C API
int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr,
                 "usage: scube <gen|validate|dual|nr-path|verify stable-moves|"
                 "stable-interval|decompose|hfi|trim|bicomb|audit> "
                 "[--seed N] [--out FILE] [--json] ...\n");
    return 2;
  }
  char* out = nullptr;
  int code = scube_run_command(argc - 1, (const char* const*)(argv + 1), &out);
  if (out) {
    std::fputs(out, stdout);
    scube_string_free(out);
  }
  if (code == 2) std::fprintf(stderr, "error: %s\n", scube_last_error());
  return code;
}
