#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>

#include "cst/dataset.hpp"

namespace cst {

/// Generator settings. Sizes, degrees and emissions use one heavy-tail
/// exponent; financials are drawn so breakeven prices E/P spread over
/// [min_breakeven, max_breakeven] currency per tonne.
struct GeneratorConfig {
    std::size_t n_firms = 1000;
    std::size_t n_banks = 20;
    std::uint64_t seed = 1;
    double emission_tail_exponent = 1.05;
    std::map<char, double> sector_mix = {{'A', 0.04}, {'C', 0.14}, {'F', 0.12}, {'G', 0.25}, {'H', 0.06},
                                         {'I', 0.05}, {'J', 0.05}, {'K', 0.02}, {'L', 0.05}, {'M', 0.12},
                                         {'N', 0.06}, {'S', 0.04}};
    double fuel_seller_fraction = 0.01;
    double loan_coverage = 0.3;
    double essentiality_rate = 0.05;

    double mean_degree = 12.0;
    /// Firms selling only to households, outside the network. They anchor
    /// demand: without them every sale is to another firm.
    double final_demand_fraction = 0.5;
    double emitter_fraction = 0.45;
    double ineligible_fraction = 0.1;
    double min_breakeven = 5.0;
    double max_breakeven = 1e5;
    /// Defaults scale national totals by n_firms.
    std::optional<double> total_gas_emissions_t;
    std::optional<double> total_oil_emissions_t;

    void validate() const;
    static GeneratorConfig from_json(const nlohmann::json& j);
    nlohmann::ordered_json to_json() const;
};

struct GeneratorReport {
    /// Two-sided KS distance between the upper half of the positive sample and
    /// a Pareto tail with the configured exponent anchored at its minimum.
    double out_strength_ks = 0.0;
    double emission_ks = 0.0;
    std::size_t core_size = 0;
    std::size_t emitters = 0;
};

struct GeneratedDataset {
    Dataset data;
    GeneratorReport report;
};

GeneratedDataset generate(const GeneratorConfig& cfg);

/// Two-sided Kolmogorov-Smirnov distance between `sample` (values >= xmin)
/// and the Pareto law P(X > x) = (x / xmin)^-alpha.
double pareto_ks_distance(std::vector<double> sample, double xmin, double alpha);

/// Uniform and heavy-tail draws built on mt19937_64 and basic IEEE
/// arithmetic only, so a seed yields the same numbers on every platform.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : eng_(seed) {}
    std::uint64_t bits() { return eng_(); }
    /// [0, 1)
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// [0, n)
    std::size_t index(std::size_t n);
    /// Pareto with P(X > x) = (x / xmin)^-alpha.
    double pareto(double xmin, double alpha);
    double log_uniform(double lo, double hi);

private:
    std::mt19937_64 eng_;
};

namespace detmath {
double log(double x);
double exp(double x);
double pow(double x, double y);
} // namespace detmath

/// Five firms a..e and two banks, calibrated so that at a price of 45 per
/// tonne without pass-through e defaults directly, a, b and c default
/// through contagion and d survives.
struct ToyFixture {
    Dataset data;
    double price = 45.0;
    static constexpr FirmId a = 0, b = 1, c = 2, d = 3, e = 4;
};

ToyFixture toy_fixture();

/// A network with one systemically important supplier: firm `core` is the
/// only (essential) source of a small input for a cluster of firms holding
/// about 45% of all sales. The core's breakeven price is 25; a few
/// peripheral emitters fail at lower prices.
struct SystemicCoreFixture {
    Dataset data;
    FirmId core = 0;
    double core_breakeven = 25.0;
    std::size_t cluster_size = 0;
};

SystemicCoreFixture systemic_core_fixture(std::uint64_t seed = 7);

} // namespace cst
