#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cst/network.hpp"

namespace cst {

/// Fuel-distributing sectors and the national combustion totals (tonnes CO2,
/// already net of household use) to be distributed over purchasing firms.
struct FuelSectorConfig {
    std::vector<SectorCode> gas_sectors;
    std::vector<SectorCode> oil_sectors;
    std::vector<SectorCode> excluded_sectors;
    double total_gas_emissions = 0.0;
    double total_oil_emissions = 0.0;

    /// NACE gas/oil distributor classes, finance and fuel agents excluded.
    static FuelSectorConfig standard(double gas_t, double oil_t);

    void validate() const;
    static FuelSectorConfig load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;
};

enum class FuelRole { Consumer, GasDistributor, OilDistributor, Excluded };

struct FuelStrengths {
    std::vector<FuelRole> roles;
    std::vector<double> gas_in;   ///< purchases from gas distributors
    std::vector<double> oil_in;   ///< purchases from oil distributors
    double gas_out = 0.0;         ///< distributor sales outside the fuel sectors
    double oil_out = 0.0;
    bool degenerate_gas = false;  ///< no distributor sales to divide by
    bool degenerate_oil = false;
};

/// Role of each firm. A firm whose code matches both fuel lists is a gas
/// distributor; fuel roles take precedence over exclusion.
std::vector<FuelRole> classify_firms(const SupplyNetwork& net, const FuelSectorConfig& cfg);

FuelStrengths fuel_in_strengths(const SupplyNetwork& net, const FuelSectorConfig& cfg);

/// Estimated tonnes CO2 per firm.
struct EmissionVector {
    std::vector<double> tonnes;

    std::size_t size() const noexcept { return tonnes.size(); }
    double operator[](FirmId i) const { return tonnes[i]; }
    double total() const;
};

struct EmissionEstimate {
    EmissionVector emissions;
    /// Share of distributor sales bought by non-excluded consumers.
    double gas_covered_share = 0.0;
    double oil_covered_share = 0.0;
    /// Emissions that would be attributed to excluded firms; dropped, not redistributed.
    double excluded_emissions = 0.0;
};

/// Distributes the gas and oil totals proportionally to each consumer's
/// purchases from distributors. Distributors and excluded firms get zero.
EmissionEstimate estimate_emissions(const SupplyNetwork& net, const FuelSectorConfig& cfg);

void write_emissions_csv(const std::filesystem::path& path, const EmissionVector& e);
EmissionVector load_emissions_csv(const std::filesystem::path& path, std::size_t n_firms);

/// Carbon-to-profit ratio E_i / P_i (tonnes per currency unit). Undefined
/// for firms with non-positive net profit. 1/CPR is the breakeven price.
std::vector<std::optional<double>> carbon_to_profit(const EmissionVector& e, const FirmBook& book);

enum class CprBucket { Upto10, Upto45, Upto100, Upto500, Upto1000, Above1000, NonEmitter, Undefined };

inline constexpr CprBucket all_cpr_buckets[] = {CprBucket::Upto10,   CprBucket::Upto45,    CprBucket::Upto100,
                                                CprBucket::Upto500,  CprBucket::Upto1000,  CprBucket::Above1000,
                                                CprBucket::NonEmitter, CprBucket::Undefined};

/// Bucket by breakeven price P/E in currency per tonne.
CprBucket cpr_bucket(double emissions, double net_profit);
std::string to_string(CprBucket b);

} // namespace cst
