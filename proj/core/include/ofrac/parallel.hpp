#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ofrac {

/// Worker count used by the library's parallel loops (default 1).
void set_thread_count(int threads);
int thread_count();

/// Calls f(i) for i in [0, n) across the configured workers. f must only
/// write state owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

/// Evaluates f(i) for i in [0, n) across the configured workers and returns
/// the results in index order. Callers reduce the vector sequentially so the
/// result does not depend on the worker count.
std::vector<double> parallel_map(std::size_t n,
                                 const std::function<double(std::size_t)>& f);

}  // namespace ofrac
