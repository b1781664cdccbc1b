#include <iostream>

#include "widom/suites.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> names(argv + 1, argv + argc);
  if (names.empty()) names = widom::suite_names();
  int failed = 0;
  for (const auto& name : names) {
    const auto r = widom::run_suite(name);
    std::cout << widom::format_check(r) << std::endl;
    failed += r.pass ? 0 : 1;
  }
  std::cout << (names.size() - failed) << " of " << names.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
