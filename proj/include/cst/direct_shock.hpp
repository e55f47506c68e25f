#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cst/emissions.hpp"
#include "cst/network.hpp"
#include "cst/pass_through.hpp"

namespace cst {

/// Binary per-firm default indicator.
using DefaultIndicator = std::vector<std::uint8_t>;

struct DefaultVector {
    DefaultIndicator direct;
    DefaultIndicator indirect;
};

std::size_t count(const DefaultIndicator& chi);

/// A default-eligible firm defaults directly when its carbon cost is positive
/// and at least its net profit (P_i <= gamma_i).
DefaultIndicator direct_defaults(const FirmBook& book, std::span<const double> costs);

/// Direct defaults at `price` when costs scale linearly with the price;
/// `unit_costs` are the costs at a price of 1. P_i <= price * unit_i is
/// decided on the exact product, so a firm defaults at every price at or
/// above its breakeven P_i / unit_i and at none below.
DefaultIndicator direct_defaults_at_price(const FirmBook& book, std::span<const double> unit_costs, double price);

/// Sales share of the defaulted firms in total network sales; 0 for an empty network.
double direct_output_loss(const SupplyNetwork& net, const DefaultIndicator& chi);

struct DirectSweepPoint {
    double price = 0.0;
    double direct_output_loss = 0.0;
    std::size_t direct_defaults = 0;
};

struct DirectSweepOptions {
    bool pass_through = false;
    PassThroughOptions pass_through_opts;
};

/// Direct defaults and output loss at each price of an ascending grid.
std::vector<DirectSweepPoint> price_sweep(const SupplyNetwork& net, const FirmBook& book,
                                          const EmissionVector& emissions, std::span<const double> prices,
                                          const DirectSweepOptions& opts = {});

/// Carbon cost per firm at a price of 1. Pass-through is linear in the
/// initial costs, so costs at any price are this vector times the price.
std::vector<double> unit_carbon_costs(const SupplyNetwork& net, const MarketShares& shares,
                                      const EmissionVector& emissions, bool with_pass_through,
                                      const PassThroughOptions& opts = {});

/// Carbon cost per firm at `price`, with or without pass-through.
std::vector<double> carbon_costs(const SupplyNetwork& net, const MarketShares& shares,
                                 const EmissionVector& emissions, double price, bool with_pass_through,
                                 const PassThroughOptions& opts = {});

} // namespace cst
