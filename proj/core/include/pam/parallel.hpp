#ifndef PAM_PARALLEL_HPP
#define PAM_PARALLEL_HPP

#include <functional>

namespace pam {

// Resolve a worker-count config value: 0 means hardware concurrency,
// clamped to [1, count].
int resolve_workers(int requested, int count);

// Run fn(i) for i in [0, count) on `workers` threads. Callers that need
// deterministic results write into per-index slots and reduce in index
// order afterwards; nothing about scheduling leaks into outputs.
// Exceptions from fn are captured and rethrown on the calling thread.
void parallel_for(int count, int workers, const std::function<void(int)>& fn);

}  // namespace pam

#endif
