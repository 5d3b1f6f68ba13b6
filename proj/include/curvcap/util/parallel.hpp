#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace curvcap {

// Worker count from CURVCAP_THREADS, falling back to the hardware count.
// Results never depend on it: work is split into a fixed task list and
// every reduction combines task outputs in task order.
std::size_t worker_count();

// Runs task(i) for i in [0, n_tasks). Each task must write only its own slot.
void parallel_for(std::size_t n_tasks, const std::function<void(std::size_t)>& task);

inline constexpr std::size_t kSumChunk = 1024;

// Chunked pairwise summation: sequential within 1024-element chunks, then a
// balanced tree over chunk sums.
double pairwise_sum(std::span<const double> values);

template <class F>
double pairwise_sum_of(std::size_t n, F&& term) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = term(i);
  return pairwise_sum(v);
}

}  // namespace curvcap
