#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace lapgraph {

/// Runs fn(chunk) for every chunk in [0, chunks) on at most `threads` workers
/// and returns the results in chunk order, so merges are schedule-independent.
template <class Result, class Fn>
std::vector<Result> parallel_chunks(std::size_t chunks, unsigned threads, Fn&& fn) {
  std::vector<Result> results(chunks);
  unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) results[c] = fn(c);
    return results;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t c = w; c < chunks; c += workers) results[c] = fn(c);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace lapgraph
