#pragma once

#include <cstddef>
#include <cstdint>

namespace rspp {

/// Execution policy for the trial/epoch kernels. Serial is the reference
/// path; OpenMp runs the same body with `#pragma omp parallel for`. Both
/// must produce identical results: bodies write to disjoint preallocated
/// slots, seeds are derived per index, and reductions happen serially
/// afterwards.
enum class Execution { Serial, OpenMp };

template <typename Body>
void parallel_for(std::size_t count, Execution exec, Body&& body) {
    if (exec == Execution::OpenMp) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
            body(static_cast<std::size_t>(i));
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) body(i);
    }
}

}  // namespace rspp
