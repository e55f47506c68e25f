#pragma once

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace cst {

/// Fixed set of threads that run one task split into size() parts. The caller
/// thread takes part 0. Intended for many short rounds, e.g. one per
/// iteration of a fixed-point loop.
class WorkerPool {
public:
    explicit WorkerPool(std::size_t parts);
    ~WorkerPool();
    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    std::size_t size() const noexcept { return workers_.size() + 1; }

    /// Calls task(part) for every part in [0, size()) and waits for all of them.
    void run(const std::function<void(std::size_t)>& task);

private:
    void loop(std::size_t part);

    std::vector<std::thread> workers_;
    std::mutex mu_;
    std::condition_variable start_, done_;
    const std::function<void(std::size_t)>* task_ = nullptr;
    std::size_t generation_ = 0;
    std::size_t pending_ = 0;
    bool stop_ = false;
};

/// `requested` or, for 0, the hardware concurrency (at least 1).
std::size_t resolve_threads(std::size_t requested);

} // namespace cst
