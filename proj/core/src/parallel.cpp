#include "galmod/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace galmod {

unsigned thread_count() {
  if (const char *env = std::getenv("GALMOD_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0)
        return static_cast<unsigned>(std::min(v, 256L));
    } catch (const std::exception &) {
      // fall through to the hardware default
    }
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

void parallel_chunks(std::uint64_t total,
                     const std::function<void(std::uint64_t, std::uint64_t, unsigned)> &body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(thread_count(), std::max<std::uint64_t>(total / 4096, 1)));
  if (workers <= 1) {
    body(0, total, 0);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  const std::uint64_t chunk = (total + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = std::min(total, chunk * w);
    const std::uint64_t end = std::min(total, begin + chunk);
    threads.emplace_back([&, begin, end, w] {
      try {
        body(begin, end, w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto &t : threads)
    t.join();
  for (auto &e : errors)
    if (e)
      std::rethrow_exception(e);
}

} // namespace galmod
