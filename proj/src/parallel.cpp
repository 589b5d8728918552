#include "lbm/parallel.hpp"

#include <cstdlib>
#include <memory>

namespace lbm {

ThreadPool::ThreadPool(unsigned threads) {
    if (threads == 0) {
        threads = env_thread_override();
        if (threads == 0) threads = std::thread::hardware_concurrency();
        if (threads == 0) threads = 1;
    }
    // The calling thread works too, so spawn threads-1 workers.
    for (unsigned i = 0; i + 1 < threads; ++i) {
        slots_.push_back(std::make_unique<Slot>());
        workers_.emplace_back(&ThreadPool::worker_loop, this, slots_.back().get());
    }
}

ThreadPool::~ThreadPool() {
    for (auto& s : slots_) {
        std::lock_guard<std::mutex> lk(s->m);
        s->quit = true;
        s->cv.notify_all();
    }
    for (auto& w : workers_) w.join();
}

void ThreadPool::worker_loop(Slot* slot) {
    for (;;) {
        std::unique_lock<std::mutex> lk(slot->m);
        slot->cv.wait(lk, [&] { return slot->has_work || slot->quit; });
        if (slot->quit) return;
        auto fn = slot->fn;
        auto b = slot->begin;
        auto e = slot->end;
        lk.unlock();
        (*fn)(b, e);
        lk.lock();
        slot->has_work = false;
        slot->done = true;
        slot->cv.notify_all();
    }
}

void ThreadPool::parallel_for(std::size_t n,
                              const std::function<void(std::size_t, std::size_t)>& fn) {
    const std::size_t t = size();
    if (t == 1 || n < 2) {
        if (n > 0) fn(0, n);
        return;
    }
    const std::size_t chunk = (n + t - 1) / t;
    std::size_t begin = chunk;  // chunk 0 runs on the calling thread
    std::size_t used = 0;
    for (auto& s : slots_) {
        if (begin >= n) break;
        std::size_t end = std::min(begin + chunk, n);
        {
            std::lock_guard<std::mutex> lk(s->m);
            s->fn = &fn;
            s->begin = begin;
            s->end = end;
            s->has_work = true;
            s->done = false;
            s->cv.notify_all();
        }
        begin = end;
        ++used;
    }
    fn(0, std::min(chunk, n));
    for (std::size_t i = 0; i < used; ++i) {
        auto& s = slots_[i];
        std::unique_lock<std::mutex> lk(s->m);
        s->cv.wait(lk, [&] { return s->done; });
    }
}

unsigned ThreadPool::env_thread_override() {
    const char* v = std::getenv("LBM_THREADS");
    if (!v) return 0;
    long n = std::strtol(v, nullptr, 10);
    return n > 0 ? static_cast<unsigned>(n) : 0;
}

}  // namespace lbm
