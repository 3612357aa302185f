// One line per acceptance criterion; nonzero exit if any fails.
#include <iostream>

#include "corrlab/acceptance.hpp"

int main() {
  int failed = 0;
  const int total = static_cast<int>(corrlab::acceptance_criteria().size());
  for (int id = 1; id <= total; ++id) {
    auto r = corrlab::run_criterion(id);
    std::cout << corrlab::format_criterion(r) << std::endl;
    if (!r.pass) ++failed;
  }
  std::cout << (total - failed) << " of " << total << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
