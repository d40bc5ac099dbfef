#include "panosplat/parallel.h"

#include <algorithm>
#include <atomic>
#include <thread>

namespace panosplat {
namespace {

int default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::atomic<int>& workers() {
  static std::atomic<int> n{default_workers()};
  return n;
}

}  // namespace

int worker_count() { return workers().load(std::memory_order_relaxed); }

void set_worker_count(int n) { workers().store(std::max(1, n), std::memory_order_relaxed); }

}  // namespace panosplat
