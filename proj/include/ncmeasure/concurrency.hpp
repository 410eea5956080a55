#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <future>
#include <string>
#include <thread>
#include <vector>

namespace ncm {

/// Worker cap from NCMEASURE_THREADS; 0 or unset means hardware concurrency.
inline unsigned thread_cap() {
  unsigned cap = 0;
  if (const char* env = std::getenv("NCMEASURE_THREADS")) {
    try {
      cap = static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      cap = 0;
    }
  }
  if (cap == 0) cap = std::max(1u, std::thread::hardware_concurrency());
  return cap;
}

/// Evaluates fn(0..count-1), at most thread_cap() at a time. Results keep
/// their index order; the first exception (by index) is rethrown.
template <class Fn>
auto parallel_map(std::size_t count, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using R = decltype(fn(std::size_t{}));
  std::vector<R> out;
  out.reserve(count);
  const std::size_t cap = thread_cap();
  if (cap <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) out.push_back(fn(i));
    return out;
  }
  for (std::size_t begin = 0; begin < count; begin += cap) {
    const std::size_t end = std::min(count, begin + cap);
    std::vector<std::future<R>> batch;
    for (std::size_t i = begin; i < end; ++i) batch.push_back(std::async(std::launch::async, fn, i));
    for (auto& f : batch) out.push_back(f.get());
  }
  return out;
}

}  // namespace ncm
