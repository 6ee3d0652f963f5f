// Acceptance gate: runs one verification suite per invocation and prints a
// single pass/fail line per criterion (plus per-check details on stderr).
#include <algorithm>
#include <cstdio>
#include <cstring>
#include <string>
#include <thread>

#include "crtspace/verify.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <suite-name>\n");
    return 2;
  }
  const std::string suite = argv[1];
  const int threads =
      static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  try {
    const crtspace::SuiteResult res = crtspace::run_suite(suite, threads);
    for (const auto& c : res.checks)
      std::fprintf(stderr, "  [%s] %s: %s\n", c.passed ? "ok" : "FAIL",
                   c.name.c_str(), c.detail.c_str());
    std::printf("%s acceptance %s\n", res.passed ? "PASS" : "FAIL",
                suite.c_str());
    return res.passed ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error running suite %s: %s\n", suite.c_str(), e.what());
    std::printf("FAIL acceptance %s\n", suite.c_str());
    return 1;
  }
}
