#include "cst/parallel.hpp"

#include <algorithm>

namespace cst {

WorkerPool::WorkerPool(std::size_t parts) {
    for (std::size_t p = 1; p < std::max<std::size_t>(parts, 1); ++p)
        workers_.emplace_back([this, p] { loop(p); });
}

WorkerPool::~WorkerPool() {
    {
        std::lock_guard lock(mu_);
        stop_ = true;
    }
    start_.notify_all();
    for (auto& t : workers_)
        t.join();
}

void WorkerPool::loop(std::size_t part) {
    std::size_t seen = 0;
    while (true) {
        const std::function<void(std::size_t)>* task;
        {
            std::unique_lock lock(mu_);
            start_.wait(lock, [&] { return stop_ || generation_ != seen; });
            if (stop_)
                return;
            seen = generation_;
            task = task_;
        }
        (*task)(part);
        {
            std::lock_guard lock(mu_);
            if (--pending_ == 0)
                done_.notify_one();
        }
    }
}

void WorkerPool::run(const std::function<void(std::size_t)>& task) {
    if (workers_.empty()) {
        task(0);
        return;
    }
    {
        std::lock_guard lock(mu_);
        task_ = &task;
        pending_ = workers_.size();
        ++generation_;
    }
    start_.notify_all();
    task(0);
    std::unique_lock lock(mu_);
    done_.wait(lock, [&] { return pending_ == 0; });
}

std::size_t resolve_threads(std::size_t requested) {
    if (requested > 0)
        return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace cst
