#pragma once

#include <span>
#include <vector>

#include "cst/emissions.hpp"
#include "cst/network.hpp"

namespace cst {

/// Market share of each firm within its four-digit sector class (by sales).
struct MarketShares {
    std::vector<double> mu;
};

MarketShares market_shares(const SupplyNetwork& net);

/// c(0) = price * emissions.
std::vector<double> initial_costs(const EmissionVector& emissions, double price);

struct PassThroughOptions {
    /// Stop once this fraction of the initial costs is retained somewhere.
    double coverage = 0.999999;
    /// 0 selects the default cap max(10 n, 1000).
    std::size_t max_iterations = 0;
};

struct PassThroughResult {
    std::vector<double> retained;       ///< gamma(T)
    std::size_t iterations = 0;         ///< T
    double initial_total = 0.0;         ///< sum c(0)
    double retained_total = 0.0;        ///< sum gamma(T)
    double residual = 0.0;              ///< sum c(0) - sum gamma(T), still in transit
    std::vector<double> circulating;    ///< sum c(t) for t = 0..T
};

/// Market-share cost pass-through. Each firm keeps (1 - mu_i) of the cost it
/// receives and passes mu_i on to its customers in proportion to sales:
///
///   c_i(t+1) = sum_j mu_j W_ji / s_out_j c_j(t),   gamma_i(t+1) = gamma_i(t) + (1 - mu_i) c_i(t+1)
///
/// Firms without sales cannot pass costs on. Throws ConvergenceError when the
/// iteration cap is reached first, e.g. on closed cycles of monopolists.
PassThroughResult pass_through(const SupplyNetwork& net, const MarketShares& shares,
                               std::span<const double> initial, const PassThroughOptions& opts = {});

} // namespace cst
