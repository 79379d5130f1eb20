#include "ldao/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ldao {

int worker_count() {
    const char* env = std::getenv("LDAO_THREADS");
    long requested = 0;
    if (env != nullptr && *env != '\0') {
        char* end = nullptr;
        requested = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || requested < 0) requested = 0;
    }
    if (requested > 0) return static_cast<int>(requested);
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  int threads) {
    if (n == 0) return;
    int workers = threads > 0 ? threads : worker_count();
    if (static_cast<std::size_t>(workers) > n) workers = static_cast<int>(n);

    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto body = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();

    if (first_error) std::rethrow_exception(first_error);
}

} // namespace ldao
