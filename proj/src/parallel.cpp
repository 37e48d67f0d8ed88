#include "zhu/parallel.hpp"

#include <cstdlib>
#include <string>

namespace zhu {

unsigned thread_budget() {
  if (const char* env = std::getenv("AN_THREADS")) {
    try {
      const long k = std::stol(env);
      if (k > 0) return static_cast<unsigned>(k);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

}  // namespace zhu
