#include "cst/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "cst/csv.hpp"

namespace cst {

SupplyNetwork SupplyNetwork::from_edges(std::vector<SectorCode> sectors, std::vector<Edge> edges) {
    const std::size_t n = sectors.size();
    for (const auto& e : edges) {
        if (e.supplier >= n || e.buyer >= n)
            throw InputError("edge " + std::to_string(e.supplier) + "->" + std::to_string(e.buyer) +
                             " references an unknown firm (n=" + std::to_string(n) + ")");
        if (e.supplier == e.buyer)
            throw InputError("self-loop on firm " + std::to_string(e.supplier));
        if (!(e.value > 0.0) || !std::isfinite(e.value))
            throw InputError("edge " + std::to_string(e.supplier) + "->" + std::to_string(e.buyer) +
                             " has non-positive value");
    }
    std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.supplier != b.supplier ? a.supplier < b.supplier : a.buyer < b.buyer;
    });

    SupplyNetwork net;
    net.sectors_ = std::move(sectors);
    net.out_off_.assign(n + 1, 0);
    net.out_buyer_.reserve(edges.size());
    net.out_value_.reserve(edges.size());
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const auto& e = edges[k];
        if (!net.out_buyer_.empty() && k > 0 && edges[k - 1].supplier == e.supplier &&
            edges[k - 1].buyer == e.buyer) {
            net.out_value_.back() += e.value;
            continue;
        }
        net.out_buyer_.push_back(e.buyer);
        net.out_value_.push_back(e.value);
        ++net.out_off_[e.supplier + 1];
    }
    std::partial_sum(net.out_off_.begin(), net.out_off_.end(), net.out_off_.begin());

    // Transpose into buyer-major rows; within a row suppliers stay ascending.
    net.in_off_.assign(n + 1, 0);
    for (FirmId b : net.out_buyer_)
        ++net.in_off_[b + 1];
    std::partial_sum(net.in_off_.begin(), net.in_off_.end(), net.in_off_.begin());
    net.in_supplier_.resize(net.out_buyer_.size());
    net.in_value_.resize(net.out_buyer_.size());
    std::vector<std::size_t> cursor(net.in_off_.begin(), net.in_off_.end() - 1);
    for (FirmId s = 0; s < n; ++s) {
        for (std::size_t k = net.out_off_[s]; k < net.out_off_[s + 1]; ++k) {
            const std::size_t pos = cursor[net.out_buyer_[k]]++;
            net.in_supplier_[pos] = s;
            net.in_value_[pos] = net.out_value_[k];
        }
    }

    net.s_out_.assign(n, 0.0);
    net.s_in_.assign(n, 0.0);
    for (FirmId i = 0; i < n; ++i) {
        for (double v : net.sales_to(i))
            net.s_out_[i] += v;
        for (double v : net.purchases_from(i))
            net.s_in_[i] += v;
        net.total_ += net.s_out_[i];
    }
    return net;
}

std::vector<Edge> SupplyNetwork::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (FirmId s = 0; s < size(); ++s)
        for (std::size_t k = out_off_[s]; k < out_off_[s + 1]; ++k)
            out.push_back({s, out_buyer_[k], out_value_[k]});
    return out;
}

SupplyNetwork SupplyNetwork::scaled(double factor) const {
    auto e = edges();
    for (auto& x : e)
        x.value *= factor;
    return from_edges(sectors_, std::move(e));
}

LoadedNetwork load_network(const std::filesystem::path& firms_file,
                           const std::filesystem::path& edges_file) {
    csv::Reader firms(firms_file, {"firm_id", "sector", "revenue", "material_costs", "operating_profit",
                                   "net_profit", "equity", "liquidity", "retained_earnings"});
    struct Row {
        std::uint64_t id;
        SectorCode sector;
        FirmRecord rec;
    };
    std::vector<Row> rows;
    while (firms.next()) {
        Row row;
        row.id = firms.index(0);
        try {
            row.sector = SectorCode(firms.field(1));
        } catch (const InputError& e) {
            firms.fail(e.what());
        }
        auto& r = row.rec;
        r.revenue = firms.number(2);
        r.material_costs = firms.number(3);
        r.operating_profit = firms.number(4);
        r.net_profit = firms.number(5);
        r.equity = firms.number(6);
        r.liquidity = firms.number(7);
        r.retained_earnings = firms.number(8);
        r.other_income = r.operating_profit - r.revenue + r.material_costs;
        rows.push_back(std::move(row));
    }

    const std::size_t n = rows.size();
    std::vector<SectorCode> sectors(n);
    FirmBook book;
    book.firms.resize(n);
    std::vector<char> seen(n, 0);
    for (const auto& row : rows) {
        if (row.id >= n)
            throw InputError(firms_file.string() + ": firm id " + std::to_string(row.id) +
                             " outside contiguous range 0.." + std::to_string(n - 1));
        if (seen[row.id])
            throw InputError(firms_file.string() + ": duplicate firm id " + std::to_string(row.id));
        seen[row.id] = 1;
        sectors[row.id] = row.sector;
        book.firms[row.id] = row.rec;
    }

    // Edges are expected pre-aggregated to annual values. Stability filtering
    // of links over quarters would happen upstream of this reader.
    csv::Reader er(edges_file, {"supplier_id", "buyer_id", "value"});
    std::vector<Edge> edges;
    while (er.next()) {
        const auto s = er.index(0);
        const auto b = er.index(1);
        const double v = er.number(2);
        if (s >= n || b >= n)
            er.fail("dangling firm id");
        if (s == b)
            er.fail("self-loop");
        if (!(v > 0.0))
            er.fail("edge value must be positive");
        edges.push_back({static_cast<FirmId>(s), static_cast<FirmId>(b), v});
    }
    return {SupplyNetwork::from_edges(std::move(sectors), std::move(edges)), std::move(book)};
}

void write_firms_csv(const std::filesystem::path& path, const SupplyNetwork& net, const FirmBook& book) {
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write " + path.string());
    out << "firm_id,sector,revenue,material_costs,operating_profit,net_profit,equity,liquidity,retained_earnings\n";
    for (FirmId i = 0; i < book.size(); ++i) {
        const auto& r = book[i];
        out << i << ',' << net.sector(i).str() << ',' << format_double(r.revenue) << ','
            << format_double(r.material_costs) << ',' << format_double(r.operating_profit) << ','
            << format_double(r.net_profit) << ',' << format_double(r.equity) << ','
            << format_double(r.liquidity) << ',' << format_double(r.retained_earnings) << '\n';
    }
}

void write_edges_csv(const std::filesystem::path& path, const SupplyNetwork& net) {
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write " + path.string());
    out << "supplier_id,buyer_id,value\n";
    for (const auto& e : net.edges())
        out << e.supplier << ',' << e.buyer << ',' << format_double(e.value) << '\n';
}

ThresholdResult threshold_network(const SupplyNetwork& net, double min_edge_value) {
    if (!(min_edge_value >= 0.0))
        throw ConfigError("edge threshold must be non-negative");
    std::vector<Edge> kept;
    double kept_value = 0.0;
    for (const auto& e : net.edges()) {
        if (e.value >= min_edge_value) {
            kept.push_back(e);
            kept_value += e.value;
        }
    }
    ThresholdResult res;
    res.retained_edges = kept.size();
    res.retained_value_fraction = net.total_value() > 0.0 ? kept_value / net.total_value() : 1.0;
    std::vector<SectorCode> sectors(net.sectors().begin(), net.sectors().end());
    res.network = SupplyNetwork::from_edges(std::move(sectors), std::move(kept));
    return res;
}

} // namespace cst
