#include "qlh/parallel.hpp"

#include <cstdlib>
#include <string>

namespace qlh {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QLH_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (...) {
    }
  }
  return 1;
}

}  // namespace qlh
