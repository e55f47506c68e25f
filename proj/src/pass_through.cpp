#include "cst/pass_through.hpp"

#include <algorithm>
#include <unordered_map>

namespace cst {

MarketShares market_shares(const SupplyNetwork& net) {
    std::unordered_map<std::string, double> sector_sales;
    for (FirmId i = 0; i < net.size(); ++i)
        sector_sales[net.sector(i).class4()] += net.out_strength(i);
    MarketShares ms;
    ms.mu.assign(net.size(), 0.0);
    for (FirmId i = 0; i < net.size(); ++i) {
        const double total = sector_sales[net.sector(i).class4()];
        ms.mu[i] = total > 0.0 ? net.out_strength(i) / total : 0.0;
    }
    return ms;
}

std::vector<double> initial_costs(const EmissionVector& emissions, double price) {
    if (!(price >= 0.0))
        throw ConfigError("carbon price must be non-negative");
    std::vector<double> c(emissions.size());
    for (FirmId i = 0; i < emissions.size(); ++i)
        c[i] = price * emissions[i];
    return c;
}

PassThroughResult pass_through(const SupplyNetwork& net, const MarketShares& shares,
                               std::span<const double> initial, const PassThroughOptions& opts) {
    const std::size_t n = net.size();
    if (initial.size() != n || shares.mu.size() != n)
        throw InputError("pass_through: vector sizes do not match the network");
    if (!(opts.coverage > 0.0 && opts.coverage < 1.0))
        throw ConfigError("pass-through coverage must lie in (0, 1)");
    const std::size_t cap = opts.max_iterations ? opts.max_iterations : std::max<std::size_t>(10 * n, 1000);

    std::vector<double> mu(n);
    for (FirmId i = 0; i < n; ++i) {
        if (!(initial[i] >= 0.0))
            throw InputError("pass_through: initial costs must be non-negative");
        mu[i] = net.out_strength(i) > 0.0 ? std::clamp(shares.mu[i], 0.0, 1.0) : 0.0;
    }

    PassThroughResult res;
    std::vector<double> c(initial.begin(), initial.end());
    res.retained.resize(n);
    double circulating = 0.0;
    for (FirmId i = 0; i < n; ++i) {
        res.retained[i] = (1.0 - mu[i]) * c[i];
        res.initial_total += c[i];
        circulating += c[i];
    }
    res.circulating.push_back(circulating);
    auto retained_sum = [&] {
        double s = 0.0;
        for (double g : res.retained)
            s += g;
        return s;
    };
    res.retained_total = retained_sum();
    const double target = opts.coverage * res.initial_total;

    std::vector<double> outflow(n);
    while (res.retained_total < target) {
        if (res.iterations >= cap)
            throw ConvergenceError("cost pass-through did not converge within " + std::to_string(cap) +
                                       " iterations; undistributed cost " +
                                       format_double(res.initial_total - res.retained_total),
                                   res.initial_total - res.retained_total);
        for (FirmId j = 0; j < n; ++j)
            outflow[j] = mu[j] > 0.0 ? mu[j] * c[j] / net.out_strength(j) : 0.0;
        circulating = 0.0;
        for (FirmId i = 0; i < n; ++i) {
            const auto sup = net.suppliers(i);
            const auto val = net.purchases_from(i);
            double in = 0.0;
            for (std::size_t k = 0; k < sup.size(); ++k)
                in += val[k] * outflow[sup[k]];
            c[i] = in;
            circulating += in;
            res.retained[i] += (1.0 - mu[i]) * in;
        }
        res.circulating.push_back(circulating);
        res.retained_total = retained_sum();
        ++res.iterations;
    }
    res.residual = res.initial_total - res.retained_total;
    return res;
}

} // namespace cst
