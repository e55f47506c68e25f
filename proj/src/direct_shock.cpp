#include "cst/direct_shock.hpp"

#include <algorithm>
#include <cmath>

namespace cst {

std::size_t count(const DefaultIndicator& chi) {
    return static_cast<std::size_t>(std::count(chi.begin(), chi.end(), std::uint8_t{1}));
}

DefaultIndicator direct_defaults(const FirmBook& book, std::span<const double> costs) {
    if (costs.size() != book.size())
        throw InputError("direct_defaults: cost vector size does not match the firm book");
    DefaultIndicator chi(book.size(), 0);
    for (FirmId i = 0; i < book.size(); ++i) {
        const auto& f = book[i];
        chi[i] = f.default_eligible() && costs[i] > 0.0 && f.net_profit <= costs[i];
    }
    return chi;
}

DefaultIndicator direct_defaults_at_price(const FirmBook& book, std::span<const double> unit_costs, double price) {
    if (unit_costs.size() != book.size())
        throw InputError("direct_defaults_at_price: cost vector size does not match the firm book");
    if (!(price >= 0.0) || !std::isfinite(price))
        throw ConfigError("carbon price must be non-negative");
    DefaultIndicator chi(book.size(), 0);
    if (price == 0.0)
        return chi;
    for (FirmId i = 0; i < book.size(); ++i) {
        const auto& f = book[i];
        // fma rounds once, so its sign is the sign of the exact difference.
        chi[i] = f.default_eligible() && unit_costs[i] > 0.0 && std::fma(price, unit_costs[i], -f.net_profit) >= 0.0;
    }
    return chi;
}

double direct_output_loss(const SupplyNetwork& net, const DefaultIndicator& chi) {
    const double total = net.total_value();
    if (!(total > 0.0))
        return 0.0;
    double lost = 0.0;
    for (FirmId i = 0; i < net.size(); ++i)
        if (chi[i])
            lost += net.out_strength(i);
    return lost / total;
}

std::vector<double> carbon_costs(const SupplyNetwork& net, const MarketShares& shares,
                                 const EmissionVector& emissions, double price, bool with_pass_through,
                                 const PassThroughOptions& opts) {
    auto c0 = initial_costs(emissions, price);
    if (!with_pass_through)
        return c0;
    return pass_through(net, shares, c0, opts).retained;
}

std::vector<double> unit_carbon_costs(const SupplyNetwork& net, const MarketShares& shares,
                                      const EmissionVector& emissions, bool with_pass_through,
                                      const PassThroughOptions& opts) {
    return carbon_costs(net, shares, emissions, 1.0, with_pass_through, opts);
}

std::vector<DirectSweepPoint> price_sweep(const SupplyNetwork& net, const FirmBook& book,
                                          const EmissionVector& emissions, std::span<const double> prices,
                                          const DirectSweepOptions& opts) {
    if (!std::is_sorted(prices.begin(), prices.end()))
        throw ConfigError("price grid must be ascending");
    const auto shares = opts.pass_through ? market_shares(net) : MarketShares{};
    std::vector<DirectSweepPoint> out;
    out.reserve(prices.size());
    const auto unit = unit_carbon_costs(net, shares, emissions, opts.pass_through, opts.pass_through_opts);
    for (double price : prices) {
        const auto chi = direct_defaults_at_price(book, unit, price);
        out.push_back({price, direct_output_loss(net, chi), count(chi)});
    }
    return out;
}

} // namespace cst
