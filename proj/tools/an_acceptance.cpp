#include "acceptance.hpp"

#include <iostream>

int main() {
  bool ok = true;
  zhu::acceptance::run_all([&](const zhu::acceptance::Criterion& c) {
    std::cout << zhu::acceptance::summary_line(c) << std::endl;
    for (const auto& f : c.failures) std::cout << "      " << f << "\n";
    for (const auto& d : c.divergences) std::cout << "      divergence " << d << "\n";
    ok = ok && c.pass;
  });
  return ok ? 0 : 1;
}
