// One line per primary criterion; exit status is the number of failures.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "dival/acceptance.hpp"

int main() {
  unsigned threads = 1;
  if (const char* env = std::getenv("DIVAL_THREADS")) threads = unsigned(std::max(1, std::atoi(env)));
  int failures = 0;
  for (const auto& c : dival::acceptance::primary_criteria()) {
    auto r = dival::acceptance::run(c, threads);
    std::printf("%s %-24s %7.2fs  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                r.detail.c_str());
    std::fflush(stdout);
    failures += !r.passed;
  }
  std::printf("%d of %zu criteria failed\n", failures,
              dival::acceptance::primary_criteria().size());
  return failures == 0 ? 0 : 1;
}
