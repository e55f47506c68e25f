#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "cst/common.hpp"
#include "cst/sector.hpp"

namespace cst {

/// Supplier -> buyer transaction value (currency per year).
struct Edge {
    FirmId supplier;
    FirmId buyer;
    double value;
};

/// Sparse directed weighted firm-to-firm network W, stored as two CSR views
/// (rows by supplier and rows by buyer). Immutable once constructed.
class SupplyNetwork {
public:
    SupplyNetwork() = default;

    /// Builds a network over `sectors.size()` firms. Duplicate
    /// (supplier, buyer) pairs are summed in input order. Throws InputError
    /// on self-loops, dangling ids and non-positive or non-finite values.
    static SupplyNetwork from_edges(std::vector<SectorCode> sectors, std::vector<Edge> edges);

    std::size_t size() const noexcept { return sectors_.size(); }
    std::size_t edge_count() const noexcept { return out_buyer_.size(); }

    const SectorCode& sector(FirmId i) const { return sectors_[i]; }
    std::span<const SectorCode> sectors() const noexcept { return sectors_; }

    /// Edges sorted by (supplier, buyer).
    std::vector<Edge> edges() const;

    std::span<const FirmId> customers(FirmId i) const {
        return {out_buyer_.data() + out_off_[i], out_buyer_.data() + out_off_[i + 1]};
    }
    std::span<const double> sales_to(FirmId i) const {
        return {out_value_.data() + out_off_[i], out_value_.data() + out_off_[i + 1]};
    }
    std::span<const FirmId> suppliers(FirmId i) const {
        return {in_supplier_.data() + in_off_[i], in_supplier_.data() + in_off_[i + 1]};
    }
    std::span<const double> purchases_from(FirmId i) const {
        return {in_value_.data() + in_off_[i], in_value_.data() + in_off_[i + 1]};
    }

    double out_strength(FirmId i) const { return s_out_[i]; }
    double in_strength(FirmId i) const { return s_in_[i]; }
    std::span<const double> out_strengths() const noexcept { return s_out_; }
    std::span<const double> in_strengths() const noexcept { return s_in_; }

    /// Sum of all edge values.
    double total_value() const noexcept { return total_; }

    /// Same topology with every edge value multiplied by `factor` > 0.
    SupplyNetwork scaled(double factor) const;

private:
    std::vector<SectorCode> sectors_;
    std::vector<std::size_t> out_off_{0};
    std::vector<FirmId> out_buyer_;
    std::vector<double> out_value_;
    std::vector<std::size_t> in_off_{0};
    std::vector<FirmId> in_supplier_;
    std::vector<double> in_value_;
    std::vector<double> s_out_;
    std::vector<double> s_in_;
    double total_ = 0.0;
};

/// Income statement and balance sheet items of one firm (currency).
struct FirmRecord {
    double revenue = 0;
    double material_costs = 0;
    double other_income = 0;
    double operating_profit = 0;
    double net_profit = 0;
    double equity = 0;
    double liquidity = 0;
    double retained_earnings = 0;
    bool has_loan = false;

    /// Firms with any negative revenue, material cost, equity, liquidity,
    /// operating or net profit cannot default; they still carry costs and
    /// propagate shocks.
    bool default_eligible() const noexcept {
        return revenue >= 0 && material_costs >= 0 && equity >= 0 && liquidity >= 0 &&
               operating_profit >= 0 && net_profit >= 0;
    }
};

struct FirmBook {
    std::vector<FirmRecord> firms;

    std::size_t size() const noexcept { return firms.size(); }
    const FirmRecord& operator[](FirmId i) const { return firms[i]; }
    FirmRecord& operator[](FirmId i) { return firms[i]; }
};

struct LoadedNetwork {
    SupplyNetwork network;
    FirmBook book;
};

/// Reads the firms and edges CSV files. Firm ids must cover 0..n-1 exactly
/// once; `other_income` is derived as operating_profit - revenue + material_costs.
LoadedNetwork load_network(const std::filesystem::path& firms_file,
                           const std::filesystem::path& edges_file);

void write_firms_csv(const std::filesystem::path& path, const SupplyNetwork& net, const FirmBook& book);
void write_edges_csv(const std::filesystem::path& path, const SupplyNetwork& net);

struct ThresholdResult {
    SupplyNetwork network;
    /// Fraction of the original total edge value that survived (1 for an empty network).
    double retained_value_fraction = 1.0;
    std::size_t retained_edges = 0;
};

/// Drops every edge with value below `min_edge_value`. Firms that lose all
/// links stay in place as isolated nodes so FirmIds are unchanged.
ThresholdResult threshold_network(const SupplyNetwork& net, double min_edge_value);

} // namespace cst
