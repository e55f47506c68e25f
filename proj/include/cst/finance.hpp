#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cst/direct_shock.hpp"
#include "cst/emissions.hpp"
#include "cst/network.hpp"

namespace cst {

struct Loan {
    FirmId firm;
    BankId bank;
    double principal;
};

/// Banks' CET1 equity and the firm-bank loan matrix B (multiple loans of one
/// firm at one bank are summed). `lgd` is the loss given default kappa.
struct BankRegister {
    std::vector<double> equity;
    std::vector<Loan> loans;  ///< sorted by (firm, bank), one entry per pair
    double lgd = 1.0;

    std::size_t size() const noexcept { return equity.size(); }
    double total_equity() const;

    /// Validates and aggregates raw loans; throws InputError on unknown ids,
    /// non-positive equity or negative principals.
    static BankRegister build(std::vector<double> equity, std::vector<Loan> loans, std::size_t n_firms);
    static BankRegister load(const std::filesystem::path& banks_file, const std::filesystem::path& loans_file,
                             std::size_t n_firms);
    void save(const std::filesystem::path& banks_file, const std::filesystem::path& loans_file) const;
};

/// Sets FirmRecord::has_loan for every borrower.
void mark_borrowers(FirmBook& book, const BankRegister& banks);

/// Projected income statement and balance sheet after contagion and carbon costs.
struct ProjectedBook {
    std::vector<double> profit_reduction;  ///< (1 - h) (r - c)
    std::vector<double> equity;            ///< z + zeta - dp - gamma
    std::vector<double> liquidity;         ///< a - dp - gamma
    std::vector<std::uint8_t> evaluated;   ///< default-eligible firms only
};

/// One-year projection of every default-eligible firm.
ProjectedBook project_books(const FirmBook& book, std::span<const double> h_final, std::span<const double> costs);

/// Insolvent (equity <= 0) or illiquid (liquidity <= 0) evaluated firms that
/// did not already default directly.
DefaultIndicator indirect_defaults(const ProjectedBook& proj, const DefaultIndicator& direct);

struct BankLoss {
    double direct = 0.0;    ///< fraction of own equity
    double indirect = 0.0;
    double total = 0.0;
};

struct LossSplit {
    double direct = 0.0;    ///< fraction of system equity
    double indirect = 0.0;
};

struct LossReport {
    std::vector<BankLoss> banks;
    double system_direct = 0.0;
    double system_indirect = 0.0;
    double system_total = 0.0;
    std::map<std::string, LossSplit> by_sector;      ///< section letter of the defaulted firm
    std::map<std::string, LossSplit> by_cpr_bucket;
};

/// Optional per-firm attributes used for the sector and CPR decompositions.
struct LossAttribution {
    const SupplyNetwork* network = nullptr;
    const FirmBook* book = nullptr;
    const EmissionVector* emissions = nullptr;
};

/// Equity losses per bank, L_k = sum_j chi_j kappa B_jk / e_k, split into
/// direct and indirect defaults, and the equity-weighted system aggregate.
LossReport bank_losses(const BankRegister& banks, const DefaultIndicator& direct, const DefaultIndicator& indirect,
                       const LossAttribution& attribution = {});

nlohmann::ordered_json to_json(const LossReport& r);

} // namespace cst
