#include "pauli2d/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace pauli2d {

namespace {
std::atomic<int> g_max_threads{1};
}

void set_max_threads(int n) {
  if (n <= 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  g_max_threads = n;
}

int max_threads() { return g_max_threads; }

void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& body) {
  std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(max_threads()),
                                         std::max<std::size_t>(count / 64, 1));
  if (nt <= 1) {
    body(0, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt - 1);
  std::size_t chunk = (count + nt - 1) / nt;
  for (std::size_t t = 1; t < nt; ++t) {
    std::size_t b = t * chunk, e = std::min(count, b + chunk);
    if (b < e) pool.emplace_back(body, b, e);
  }
  body(0, std::min(count, chunk));
  for (auto& th : pool) th.join();
}

}  // namespace pauli2d
