#include "rydvmc/threads.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>

namespace rydvmc {

namespace {

std::atomic<int> g_max_threads{0};

int default_threads() {
  if (const char* env = std::getenv("RYDVMC_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (...) {
      // fall through to hardware default
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

int max_threads() {
  const int n = g_max_threads.load(std::memory_order_relaxed);
  return n >= 1 ? n : default_threads();
}

void set_max_threads(int n) { g_max_threads.store(n, std::memory_order_relaxed); }

}  // namespace rydvmc
