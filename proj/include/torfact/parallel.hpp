#pragma once

#include <cstddef>
#include <functional>

namespace torfact {

/// Worker count from TORFACT_WORKERS (default 1, clamped to [1, 64]).
std::size_t worker_count();

/// Runs body(i) for i in [0, count). Work items are independent; results
/// that need reduction are written per item and combined by the caller in
/// index order, so output never depends on the worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace torfact
