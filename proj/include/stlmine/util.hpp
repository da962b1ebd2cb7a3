#pragma once

#include <charconv>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace stlmine {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Shortest decimal representation that round-trips through parsing.
inline std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// splitmix64 finalizer; used to derive independent seeds from a master seed.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Per-task seed derivation. Tasks seeded this way are independent of the
/// order in which they run, so parallel and serial execution agree.
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    return mix_seed(mix_seed(master ^ (a * 0x9e3779b97f4a7c15ULL)) ^ b);
}

/// Runs fn(i) for i in [0, n). Results must be written by index; the order of
/// execution is unspecified but the partition of work is deterministic.
inline void parallel_for(int n, const std::function<void(int)>& fn, int max_threads = 0) {
    if (n <= 0) return;
    unsigned hw = std::thread::hardware_concurrency();
    int nthreads = max_threads > 0 ? max_threads : (hw > 0 ? static_cast<int>(hw) : 1);
    nthreads = std::min(nthreads, n);
    if (nthreads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) {
        pool.emplace_back([&, t] {
            for (int i = t; i < n; i += nthreads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace stlmine
