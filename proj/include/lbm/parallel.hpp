/// @file parallel.hpp
/// @brief Fork-join thread pool used by the per-region data-parallel phases.
///
/// Every solver phase is a map over disjoint node ranges, so the pool only
/// needs a blocking parallel_for. Chunking is fixed (contiguous ranges per
/// worker); results never depend on the worker count because phases write
/// disjoint slots.
#pragma once

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace lbm {

class ThreadPool {
public:
    /// threads == 0 picks std::thread::hardware_concurrency().
    explicit ThreadPool(unsigned threads = 0);
    ~ThreadPool();

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    unsigned size() const { return static_cast<unsigned>(workers_.size()) + 1; }

    /// Runs fn(begin, end) over a partition of [0, n) and blocks until done.
    void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

    /// Worker-count override honoured by the CLI (LBM_THREADS).
    static unsigned env_thread_override();

private:
    struct Slot {
        std::mutex m;
        std::condition_variable cv;
        const std::function<void(std::size_t, std::size_t)>* fn = nullptr;
        std::size_t begin = 0, end = 0;
        bool has_work = false;
        bool done = false;
        bool quit = false;
    };

    void worker_loop(Slot* slot);

    std::vector<std::unique_ptr<Slot>> slots_;
    std::vector<std::thread> workers_;
};

}  // namespace lbm
