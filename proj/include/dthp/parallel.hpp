#pragma once

#include <cstddef>

namespace dthp {

// Worker count to use; 0 selects the available hardware parallelism.
std::size_t resolve_workers(std::size_t requested);

} // namespace dthp
