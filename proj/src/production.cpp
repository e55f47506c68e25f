#include "cst/production.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "cst/csv.hpp"

namespace cst {

std::string to_string(ProductionFunction fn) {
    return fn == ProductionFunction::GL ? "GL" : "Linear";
}

ProductionFunction parse_production_function(std::string_view s) {
    if (s == "GL" || s == "gl" || s == "pessimistic")
        return ProductionFunction::GL;
    if (s == "Linear" || s == "linear" || s == "L" || s == "optimistic")
        return ProductionFunction::Linear;
    throw ConfigError("unknown production function '" + std::string(s) + "'");
}

void CriticalityTable::set(const SectorCode& buyer, const SectorCode& supplier, bool essential) {
    entries_[{buyer.key(), supplier.key()}] = essential;
}

bool CriticalityTable::essential(const SectorCode& buyer, const SectorCode& supplier) const {
    if (entries_.empty())
        return false;
    const std::size_t bd = buyer.key().size() - 1;
    const std::size_t sd = supplier.key().size() - 1;
    for (std::size_t b = bd + 1; b-- > 0;) {
        const auto bk = buyer.key_prefix(b);
        for (std::size_t s = sd + 1; s-- > 0;) {
            auto it = entries_.find({bk, supplier.key_prefix(s)});
            if (it != entries_.end())
                return it->second;
        }
    }
    return false;
}

CriticalityTable CriticalityTable::load(const std::filesystem::path& path) {
    csv::Reader r(path, {"buyer_sector", "supplier_sector", "essential"});
    CriticalityTable t;
    while (r.next()) {
        const auto flag = r.field(2);
        if (flag != "0" && flag != "1")
            r.fail("essential must be 0 or 1");
        try {
            t.set(SectorCode(r.field(0)), SectorCode(r.field(1)), flag == "1");
        } catch (const InputError& e) {
            r.fail(e.what());
        }
    }
    return t;
}

void CriticalityTable::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write " + path.string());
    out << "buyer_sector,supplier_sector,essential\n";
    for (const auto& [k, v] : entries_)
        out << k.first << ',' << k.second << ',' << (v ? 1 : 0) << '\n';
}

ProductionParams calibrate(const SupplyNetwork& net, const CriticalityTable& criticality,
                           ProductionFunction fn) {
    const std::size_t n = net.size();
    ProductionParams p;
    p.fn_ = fn;
    p.firms_.resize(n);
    p.s_out_.assign(net.out_strengths().begin(), net.out_strengths().end());

    std::unordered_map<std::string, std::uint32_t> key_index;
    std::vector<std::uint32_t> firm_sector(n);
    {
        std::vector<std::string> keys;
        for (const auto& s : net.sectors())
            keys.push_back(s.class4());
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        for (std::uint32_t k = 0; k < keys.size(); ++k)
            key_index.emplace(keys[k], k);
        p.sector_keys_ = std::move(keys);
        for (FirmId i = 0; i < n; ++i)
            firm_sector[i] = key_index.at(net.sector(i).class4());
    }

    std::unordered_map<std::uint64_t, bool> essential_cache;
    auto is_essential = [&](FirmId buyer, FirmId supplier) {
        if (fn == ProductionFunction::Linear)
            return false;
        const std::uint64_t key = (std::uint64_t{firm_sector[buyer]} << 32) | firm_sector[supplier];
        auto it = essential_cache.find(key);
        if (it != essential_cache.end())
            return it->second;
        const bool e = criticality.essential(net.sector(buyer), net.sector(supplier));
        essential_cache.emplace(key, e);
        return e;
    };

    p.group_supplier_.reserve(net.edge_count());
    p.group_value_.reserve(net.edge_count());
    p.ne_supplier_.reserve(net.edge_count());
    p.ne_value_.reserve(net.edge_count());
    p.ne_off_.assign(1, 0);
    p.ess_off_.assign(1, 0);
    std::vector<std::size_t> order;
    for (FirmId i = 0; i < n; ++i) {
        auto& fp = p.firms_[i];
        const double s_out = net.out_strength(i);
        const double s_in = net.in_strength(i);
        fp.inert = !(s_out > 0.0);
        fp.beta = std::max(0.0, s_out - s_in);
        fp.floor_share = fp.inert ? 1.0 : fp.beta / s_out;

        const auto sup = net.suppliers(i);
        const auto val = net.purchases_from(i);
        order.resize(sup.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return firm_sector[sup[a]] < firm_sector[sup[b]];
        });

        fp.group_begin = p.groups_.size();
        for (std::size_t k = 0; k < order.size();) {
            const std::uint32_t sec = firm_sector[sup[order[k]]];
            ProductionParams::InputGroup g{sec, is_essential(i, sup[order[k]]), 0.0, 0.0,
                                           p.group_supplier_.size(), 0};
            for (; k < order.size() && firm_sector[sup[order[k]]] == sec; ++k) {
                p.group_supplier_.push_back(sup[order[k]]);
                p.group_value_.push_back(val[order[k]]);
                g.baseline += val[order[k]];
            }
            g.edge_end = p.group_supplier_.size();
            if (g.essential) {
                fp.has_essential = true;
                g.alpha = fp.inert ? 0.0 : g.baseline / s_out;
            }
            p.groups_.push_back(g);
        }
        fp.group_end = p.groups_.size();

        // Flat copies for evaluation: non-essential edges in one run, summed
        // in the same order as during evaluation so the baseline ratio is exact.
        for (std::size_t gi = fp.group_begin; gi < fp.group_end; ++gi) {
            const auto& g = p.groups_[gi];
            if (g.essential) {
                p.ess_groups_.push_back(static_cast<std::uint32_t>(gi));
                continue;
            }
            for (std::size_t e = g.edge_begin; e < g.edge_end; ++e) {
                p.ne_supplier_.push_back(p.group_supplier_[e]);
                p.ne_value_.push_back(p.group_value_[e]);
                fp.ne_baseline += p.group_value_[e];
            }
        }
        p.ne_off_.push_back(p.ne_supplier_.size());
        p.ess_off_.push_back(p.ess_groups_.size());
        if (fp.ne_baseline > 0.0 && !fp.inert)
            fp.alpha_ne = fp.ne_baseline / (s_out - fp.beta);
    }
    return p;
}

double ProductionParams::input_sum(FirmId i, std::span<const double> h, double& leontief) const {
    for (std::size_t k = ess_off_[i]; k < ess_off_[i + 1]; ++k) {
        const auto& g = groups_[ess_groups_[k]];
        double cur = 0.0;
        for (std::size_t e = g.edge_begin; e < g.edge_end; ++e)
            cur += group_value_[e] * h[group_supplier_[e]];
        leontief = std::min(leontief, cur / g.baseline);
    }
    double ne = 0.0;
    for (std::size_t e = ne_off_[i]; e < ne_off_[i + 1]; ++e)
        ne += ne_value_[e] * h[ne_supplier_[e]];
    return ne;
}

double ProductionParams::output(FirmId i, std::span<const double> h) const {
    const auto& fp = firms_[i];
    if (fp.inert)
        return 0.0;
    constexpr double inf = std::numeric_limits<double>::infinity();
    double ratio = inf;
    const double ne = input_sum(i, h, ratio);
    const double leontief = ratio == inf ? inf : ratio * s_out_[i];
    double linear = inf;
    if (fp.ne_baseline > 0.0)
        linear = fp.beta + ne / fp.alpha_ne;
    else if (!fp.has_essential)
        linear = fp.beta;
    return std::min(leontief, linear);
}

double ProductionParams::supply_level(FirmId i, std::span<const double> h) const {
    const auto& fp = firms_[i];
    if (fp.inert)
        return 1.0;
    constexpr double inf = std::numeric_limits<double>::infinity();
    // Normalised form of output()/s_out. Written as ratios to the baseline
    // volumes so that unshocked inputs give exactly 1.
    double leontief = inf;
    const double ne = input_sum(i, h, leontief);
    double linear = inf;
    if (fp.ne_baseline > 0.0)
        linear = 1.0 - (1.0 - fp.floor_share) * (1.0 - ne / fp.ne_baseline);
    else if (!fp.has_essential)
        linear = 1.0;
    return std::clamp(std::min(leontief, linear), 0.0, 1.0);
}

} // namespace cst
