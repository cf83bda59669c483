#pragma once

#include <functional>

namespace novikov {

/// Worker count for parallel maps: the NOVIKOV_THREADS environment variable,
/// clamped to at least 1. Unset means sequential execution.
int worker_count();

/// Applies body(i) for i in [begin, end). Outputs must be independent per
/// index; iteration order is unspecified when more than one worker is active.
void parallel_for(int begin, int end, const std::function<void(int)>& body);

}  // namespace novikov
