#ifndef FVBEM_PARALLEL_HPP_
#define FVBEM_PARALLEL_HPP_

#include <functional>

namespace fvbem {

/// Worker count used by the dense assembly loops (default 1).
void set_num_threads(int threads);
int num_threads();

/// Calls body(i) for i in [0, n). Iterations must write disjoint data; with
/// one thread the loop runs in order on the calling thread.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace fvbem

#endif  // FVBEM_PARALLEL_HPP_
