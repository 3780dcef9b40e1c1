#include "dthp/parallel.hpp"

#include <algorithm>
#include <thread>

namespace dthp {

std::size_t resolve_workers(std::size_t requested) {
    if (requested > 0) {
        return requested;
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

} // namespace dthp
