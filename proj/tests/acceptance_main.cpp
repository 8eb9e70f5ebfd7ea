// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <iostream>

#include "ptfourwell/acceptance/acceptance.hpp"

int main() {
  const auto results = ptfw::acceptance::run_suite(std::cout);
  return ptfw::acceptance::suite_status(results);
}
