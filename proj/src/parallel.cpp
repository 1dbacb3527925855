#include "jcdeco/parallel.hpp"

namespace jcdeco {

std::size_t& parallel_thread_count() {
    static std::size_t count = 0;
    return count;
}

}  // namespace jcdeco
