#pragma once

#include <memory>
#include <span>
#include <vector>

#include "cst/finance.hpp"
#include "cst/network.hpp"
#include "cst/parallel.hpp"
#include "cst/production.hpp"

namespace cst {

struct ContagionOptions {
    /// Stop once no production level moves by epsilon or more in one step.
    double epsilon = 1e-6;
    std::size_t max_iterations = 10000;
    /// Customers producing less buy proportionally less from their suppliers.
    bool demand_channel = true;
    /// Record the per-iteration max change of h.
    bool trace = false;
    /// Workers per iteration; 0 uses every core. Results do not depend on it.
    std::size_t threads = 1;
};

struct ContagionResult {
    std::vector<double> h;          ///< final production levels h(T)
    std::size_t iterations = 0;
    double total_loss = 0.0;        ///< sales-weighted 1 - h(T)
    double direct_loss = 0.0;       ///< sales-weighted 1 - h(t1)
    double indirect_loss = 0.0;     ///< total - direct
    std::vector<double> trace;      ///< max |h(t) - h(t+1)| per iteration
};

/// Synchronous shock propagation on the supply network.
///
/// Each step every firm moves to
///     h_i <- min(supply_i(h), demand_i(h), h_i)
/// where supply_i is the calibrated production function evaluated at the
/// suppliers' current levels and demand_i = sum_j W_ij h_j / s_out_i.
/// Firms starting at 0 stay at 0; firms without sales keep their level.
///
/// Only firms adjacent to a change in the previous step are re-evaluated,
/// which is exactly equivalent to a full sweep because the unshocked network
/// is a fixed point and the update depends on neighbours only. One
/// Propagator can run many shocks on the same network.
class Propagator {
public:
    Propagator(const SupplyNetwork& net, const ProductionParams& params, ContagionOptions opts = {});
    ~Propagator();

    ContagionResult run(std::span<const double> h_init);

    /// Total loss when exactly the firms in `failed` are shut down. Cost is
    /// proportional to the cascade size, not to the network size.
    double loss_for_failures(std::span<const FirmId> failed);

private:
    template <class OnChange>
    std::size_t iterate(std::vector<FirmId>& frontier, std::vector<double>* trace, OnChange&& on_change);
    void enqueue_neighbours(FirmId i, std::vector<FirmId>& next);
    double evaluate(FirmId i) const;
    double weighted_loss(std::span<const double> h) const;

    const SupplyNetwork& net_;
    const ProductionParams& params_;
    ContagionOptions opts_;
    std::vector<double> h_;
    std::vector<std::uint8_t> pinned_;
    std::vector<std::uint8_t> inert_;
    std::vector<FirmId> active_;  ///< firms with sales, ascending
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
    std::vector<double> scratch_;
    std::unique_ptr<WorkerPool> pool_;
    static constexpr std::size_t parallel_threshold = 4096;
};

/// Convenience wrapper around Propagator::run.
ContagionResult propagate(const SupplyNetwork& net, const ProductionParams& params, std::span<const double> h_init,
                          const ContagionOptions& opts = {});

/// Economic systemic risk index: total output loss caused by the failure of
/// each firm alone. `firms` empty means every firm; otherwise the result is
/// aligned with `firms`.
std::vector<double> esri(const SupplyNetwork& net, const ProductionParams& params, const ContagionOptions& opts = {},
                         std::span<const FirmId> firms = {});

/// Financial systemic risk index: system-wide bank equity loss after the
/// failure of each firm alone, its contagion and balance-sheet translation
/// (no carbon costs).
std::vector<double> fsri(const SupplyNetwork& net, const ProductionParams& params, const FirmBook& book,
                         const BankRegister& banks, const ContagionOptions& opts = {},
                         std::span<const FirmId> firms = {});

} // namespace cst
