// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include "curved2body/verify.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <iostream>
#include <string>

int main() {
  using namespace curved2body;
  bool all = true;
  run_criteria({}, [&](const CriterionResult& r) {
    all = all && r.pass;
    std::cout << r.id << (r.pass ? " PASS " : " FAIL ") << r.title << ": " << r.detail << std::endl;
  });

  // 12: the CLI wraps 1-11 and must exit 0
  const std::string cmd = std::string("\"") + CURVED2BODY_CLI + "\" verify >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  const bool ok = code == 0;
  all = all && ok;
  std::cout << kCriterionCount + 1 << (ok ? " PASS " : " FAIL ") << "verify exits 0: exit code " << code << std::endl;
  return all ? 0 : 1;
}
