#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cst/network.hpp"

namespace cst {

enum class ProductionFunction { GL, Linear };

std::string to_string(ProductionFunction fn);
ProductionFunction parse_production_function(std::string_view s);

/// Which supplier sectors are essential inputs for which buyer sectors.
/// Entries may be given at any level of the code hierarchy; lookups use the
/// most specific match (buyer first, then supplier). Missing pairs are
/// non-essential.
class CriticalityTable {
public:
    void set(const SectorCode& buyer, const SectorCode& supplier, bool essential);
    bool essential(const SectorCode& buyer, const SectorCode& supplier) const;
    std::size_t size() const noexcept { return entries_.size(); }

    /// Entries as (buyer key, supplier key, essential).
    const std::map<std::pair<std::string, std::string>, bool>& entries() const noexcept { return entries_; }

    static CriticalityTable load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

private:
    std::map<std::pair<std::string, std::string>, bool> entries_;
};

/// Calibrated generalized Leontief parameters for every firm:
///
///   x_i = min( min_{k essential} I_ik / alpha_ik ,  beta_i + I_i^ne / alpha_i )
///
/// where I_ik is the input bought from suppliers of class k and I_i^ne the
/// total non-essential input. At baseline x_i equals the out-strength.
/// beta_i = max(0, s_out - s_in); firms with s_out = 0 are inert.
class ProductionParams {
public:
    struct InputGroup {
        std::uint32_t sector;  ///< index into sector_keys()
        bool essential;
        double baseline;       ///< baseline input volume I_ik
        double alpha;          ///< I_ik / s_out for essential groups, 0 otherwise
        std::size_t edge_begin, edge_end;
    };

    struct FirmParams {
        bool inert = false;
        double beta = 0.0;
        double alpha_ne = 0.0;      ///< 0 when the firm has no non-essential input
        double ne_baseline = 0.0;
        double floor_share = 0.0;   ///< beta / s_out
        bool has_essential = false;
        std::size_t group_begin = 0, group_end = 0;
    };

    ProductionFunction function() const noexcept { return fn_; }
    std::size_t size() const noexcept { return firms_.size(); }
    const FirmParams& firm(FirmId i) const { return firms_[i]; }
    std::span<const InputGroup> groups(FirmId i) const {
        return {groups_.data() + firms_[i].group_begin, groups_.data() + firms_[i].group_end};
    }
    const std::vector<std::string>& sector_keys() const noexcept { return sector_keys_; }

    /// Output x_i in currency for production levels h of all firms.
    double output(FirmId i, std::span<const double> h) const;

    /// Supply-feasible production level in [0, 1] for production levels h.
    /// Exactly 1 for every firm when h is all ones.
    double supply_level(FirmId i, std::span<const double> h) const;

    friend ProductionParams calibrate(const SupplyNetwork&, const CriticalityTable&, ProductionFunction);

private:
    ProductionFunction fn_ = ProductionFunction::GL;
    std::vector<FirmParams> firms_;
    std::vector<InputGroup> groups_;
    std::vector<FirmId> group_supplier_;
    std::vector<double> group_value_;
    std::vector<double> s_out_;
    std::vector<std::string> sector_keys_;
    // Evaluation layout: non-essential edges flattened per firm and the
    // indices of each firm's essential groups.
    std::vector<std::size_t> ne_off_;
    std::vector<FirmId> ne_supplier_;
    std::vector<double> ne_value_;
    std::vector<std::size_t> ess_off_;
    std::vector<std::uint32_t> ess_groups_;

    double input_sum(FirmId i, std::span<const double> h, double& leontief) const;
};

/// Calibrates GL parameters (essential inputs from `criticality`) or, for
/// ProductionFunction::Linear, treats every input as non-essential.
ProductionParams calibrate(const SupplyNetwork& net, const CriticalityTable& criticality,
                           ProductionFunction fn = ProductionFunction::GL);

} // namespace cst
