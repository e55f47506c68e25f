#include "cst/finance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "cst/csv.hpp"

namespace cst {

double BankRegister::total_equity() const {
    double s = 0.0;
    for (double e : equity)
        s += e;
    return s;
}

BankRegister BankRegister::build(std::vector<double> equity, std::vector<Loan> loans, std::size_t n_firms) {
    for (std::size_t k = 0; k < equity.size(); ++k)
        if (!(equity[k] > 0.0) || !std::isfinite(equity[k]))
            throw InputError("bank " + std::to_string(k) + " has non-positive equity");
    for (const auto& l : loans) {
        if (l.firm >= n_firms)
            throw InputError("loan to unknown firm " + std::to_string(l.firm));
        if (l.bank >= equity.size())
            throw InputError("loan from unknown bank " + std::to_string(l.bank));
        if (!(l.principal >= 0.0) || !std::isfinite(l.principal))
            throw InputError("negative loan principal for firm " + std::to_string(l.firm));
    }
    std::stable_sort(loans.begin(), loans.end(), [](const Loan& a, const Loan& b) {
        return a.firm != b.firm ? a.firm < b.firm : a.bank < b.bank;
    });
    BankRegister r;
    r.equity = std::move(equity);
    for (const auto& l : loans) {
        if (!r.loans.empty() && r.loans.back().firm == l.firm && r.loans.back().bank == l.bank)
            r.loans.back().principal += l.principal;
        else
            r.loans.push_back(l);
    }
    return r;
}

BankRegister BankRegister::load(const std::filesystem::path& banks_file, const std::filesystem::path& loans_file,
                                std::size_t n_firms) {
    csv::Reader br(banks_file, {"bank_id", "equity"});
    std::vector<std::pair<std::uint64_t, double>> rows;
    while (br.next()) {
        rows.emplace_back(br.index(0), br.number(1));
        if (!(rows.back().second > 0.0))
            br.fail("bank equity must be positive");
    }
    std::vector<double> equity(rows.size(), 0.0);
    std::vector<char> seen(rows.size(), 0);
    for (const auto& [id, e] : rows) {
        if (id >= rows.size() || seen[id])
            throw InputError(banks_file.string() + ": bank ids must be unique and cover 0.." +
                             std::to_string(rows.size() - 1));
        seen[id] = 1;
        equity[id] = e;
    }

    csv::Reader lr(loans_file, {"firm_id", "bank_id", "principal"});
    std::vector<Loan> loans;
    while (lr.next()) {
        const auto firm = lr.index(0);
        const auto bank = lr.index(1);
        const double p = lr.number(2);
        if (firm >= n_firms)
            lr.fail("loan to unknown firm id " + std::to_string(firm));
        if (bank >= equity.size())
            lr.fail("loan from unknown bank id " + std::to_string(bank));
        if (p < 0.0)
            lr.fail("negative principal");
        loans.push_back({static_cast<FirmId>(firm), static_cast<BankId>(bank), p});
    }
    return build(std::move(equity), std::move(loans), n_firms);
}

void BankRegister::save(const std::filesystem::path& banks_file, const std::filesystem::path& loans_file) const {
    std::ofstream b(banks_file);
    std::ofstream l(loans_file);
    if (!b || !l)
        throw InputError("cannot write bank files");
    b << "bank_id,equity\n";
    for (BankId k = 0; k < equity.size(); ++k)
        b << k << ',' << format_double(equity[k]) << '\n';
    l << "firm_id,bank_id,principal\n";
    for (const auto& x : loans)
        l << x.firm << ',' << x.bank << ',' << format_double(x.principal) << '\n';
}

void mark_borrowers(FirmBook& book, const BankRegister& banks) {
    for (auto& f : book.firms)
        f.has_loan = false;
    for (const auto& l : banks.loans)
        if (l.principal > 0.0)
            book[l.firm].has_loan = true;
}

ProjectedBook project_books(const FirmBook& book, std::span<const double> h_final, std::span<const double> costs) {
    const std::size_t n = book.size();
    if (h_final.size() != n || costs.size() != n)
        throw InputError("project_books: vector sizes do not match the firm book");
    ProjectedBook p;
    p.profit_reduction.assign(n, 0.0);
    p.equity.assign(n, 0.0);
    p.liquidity.assign(n, 0.0);
    p.evaluated.assign(n, 0);
    for (FirmId i = 0; i < n; ++i) {
        const auto& f = book[i];
        if (!f.default_eligible())
            continue;
        const double dp = (1.0 - h_final[i]) * (f.revenue - f.material_costs);
        p.profit_reduction[i] = dp;
        p.equity[i] = f.equity + f.retained_earnings - dp - costs[i];
        p.liquidity[i] = f.liquidity - dp - costs[i];
        p.evaluated[i] = 1;
    }
    return p;
}

DefaultIndicator indirect_defaults(const ProjectedBook& proj, const DefaultIndicator& direct) {
    DefaultIndicator chi(proj.evaluated.size(), 0);
    for (FirmId i = 0; i < chi.size(); ++i)
        chi[i] = proj.evaluated[i] && !direct[i] && (proj.equity[i] <= 0.0 || proj.liquidity[i] <= 0.0);
    return chi;
}

LossReport bank_losses(const BankRegister& banks, const DefaultIndicator& direct, const DefaultIndicator& indirect,
                       const LossAttribution& attribution) {
    if (!(banks.lgd >= 0.0 && banks.lgd <= 1.0))
        throw ConfigError("loss given default must lie in [0, 1]");
    const std::size_t m = banks.size();
    std::vector<double> dir(m, 0.0), ind(m, 0.0), tot(m, 0.0);
    const double system_equity = banks.total_equity();

    LossReport r;
    for (const auto& l : banks.loans) {
        const bool d = direct.at(l.firm);
        const bool x = indirect.at(l.firm);
        if (!d && !x)
            continue;
        const double w = banks.lgd * l.principal;
        (d ? dir : ind)[l.bank] += w;
        tot[l.bank] += w;

        if (attribution.network) {
            auto& s = r.by_sector[std::string(1, attribution.network->sector(l.firm).section())];
            (d ? s.direct : s.indirect) += w / system_equity;
        }
        if (attribution.book && attribution.emissions) {
            const auto b = cpr_bucket((*attribution.emissions)[l.firm], (*attribution.book)[l.firm].net_profit);
            auto& s = r.by_cpr_bucket[to_string(b)];
            (d ? s.direct : s.indirect) += w / system_equity;
        }
    }

    r.banks.resize(m);
    for (BankId k = 0; k < m; ++k) {
        const double e = banks.equity[k];
        r.banks[k] = {dir[k] / e, ind[k] / e, tot[k] / e};
        const double weight = e / system_equity;
        r.system_direct += weight * r.banks[k].direct;
        r.system_indirect += weight * r.banks[k].indirect;
        r.system_total += weight * r.banks[k].total;
    }
    return r;
}

nlohmann::ordered_json to_json(const LossReport& r) {
    nlohmann::ordered_json j;
    auto banks = nlohmann::ordered_json::array();
    for (BankId k = 0; k < r.banks.size(); ++k)
        banks.push_back({{"bank_id", k},
                         {"direct", r.banks[k].direct},
                         {"indirect", r.banks[k].indirect},
                         {"total", r.banks[k].total}});
    j["banks"] = std::move(banks);
    j["system"] = {{"direct", r.system_direct}, {"indirect", r.system_indirect}, {"total", r.system_total}};
    auto split = [](const std::map<std::string, LossSplit>& m) {
        nlohmann::ordered_json o = nlohmann::ordered_json::object();
        for (const auto& [k, v] : m)
            o[k] = {{"direct", v.direct}, {"indirect", v.indirect}};
        return o;
    };
    j["by_sector"] = split(r.by_sector);
    j["by_cpr_bucket"] = split(r.by_cpr_bucket);
    return j;
}

} // namespace cst
