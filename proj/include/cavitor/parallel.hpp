#pragma once

#include <cstddef>
#include <functional>

namespace cavitor {

/// Worker cap: min(hardware_concurrency, CAVITOR_THREADS if set). At least 1.
int worker_count();

/// Runs fn(begin, end) over disjoint chunks of [0, n). Deterministic: chunk
/// boundaries depend only on n and the worker cap, and chunks never share
/// output elements, so results are bit-identical across thread counts as long
/// as fn writes only to its own index range.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace cavitor
