#include <iostream>
#include <thread>

#include "rwrp/acceptance.hpp"

int main() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 4;
  const auto summary = rwrp::run_acceptance(1, static_cast<int>(hw), std::cout);
  return summary.failed == 0 ? 0 : 1;
}
