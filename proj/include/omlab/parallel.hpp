// Copyright 2026 The omlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Worker-count policy, range splitting and per-trial seed derivation.

#ifndef OMLAB_PARALLEL_HPP_
#define OMLAB_PARALLEL_HPP_

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace omlab {

// OMLAB_THREADS caps the worker count; unset or invalid means one worker per
// hardware thread.
inline int thread_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("OMLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min<long>(v, 1024));
  }
  return hw;
}

// Calls fn(lo, hi, worker) on disjoint contiguous chunks of [begin, end).
// Chunk boundaries depend only on the range and worker count. The first
// exception thrown by any worker is rethrown.
template <class Fn>
void parallel_for(std::uint64_t begin, std::uint64_t end, int workers, Fn&& fn) {
  if (end <= begin) return;
  const std::uint64_t total = end - begin;
  const int w = static_cast<int>(std::max<std::uint64_t>(
      1, std::min<std::uint64_t>(static_cast<std::uint64_t>(std::max(workers, 1)), total)));
  if (w == 1) {
    fn(begin, end, 0);
    return;
  }
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (int i = 0; i < w; ++i) {
    const std::uint64_t lo = begin + total * i / w;
    const std::uint64_t hi = begin + total * (i + 1) / w;
    pool.emplace_back([&, lo, hi, i] {
      try {
        fn(lo, hi, i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed of trial `index` under `master`; independent of scheduling.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

}  // namespace omlab

#endif  // OMLAB_PARALLEL_HPP_
