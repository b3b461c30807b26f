#include "tcsim/parallel.hpp"

namespace tcsim {

int default_workers() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace tcsim
