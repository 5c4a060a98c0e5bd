#include <iostream>

#include "cdk/acceptance.hpp"

int main() {
  const int failures = cdk::acceptance::run_and_report(std::cout);
  if (failures != 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
