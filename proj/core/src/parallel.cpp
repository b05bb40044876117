#include "thzgeo/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace thzgeo {

namespace {

thread_local bool in_worker = false;

}  // namespace

int worker_count() {
    if (const char* env = std::getenv("THZGEO_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
    if (n == 0) return;
    const std::size_t workers =
        in_worker ? 1 : std::min<std::size_t>(static_cast<std::size_t>(worker_count()), n);
    if (workers <= 1) {
        body(0, n);
        return;
    }
    // More chunks than workers so uneven chunk costs balance out.
    const std::size_t chunks = std::min(n, workers * 8);
    std::size_t next = 0;
    std::mutex mu;
    std::exception_ptr error;
    auto run = [&] {
        in_worker = true;
        while (true) {
            std::size_t k;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (next == chunks || error) break;
                k = next++;
            }
            try {
                body(k * n / chunks, (k + 1) * n / chunks);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!error) error = std::current_exception();
            }
        }
        in_worker = false;
    };
    std::vector<std::thread> threads;
    for (std::size_t t = 1; t < workers; ++t) threads.emplace_back(run);
    run();
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

double pairwise_sum(const double* values, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += values[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values, half) + pairwise_sum(values + half, n - half);
}

}  // namespace thzgeo
