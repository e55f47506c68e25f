#include "cst/emissions.hpp"

#include <fstream>
#include <json.hpp>

#include "cst/csv.hpp"

namespace cst {

namespace {

bool matches_any(const SectorCode& code, const std::vector<SectorCode>& set) {
    for (const auto& s : set)
        if (code.within(s))
            return true;
    return false;
}

std::vector<SectorCode> codes_from_json(const nlohmann::json& j, const char* key) {
    std::vector<SectorCode> out;
    if (!j.contains(key))
        return out;
    for (const auto& s : j.at(key))
        out.emplace_back(s.get<std::string>());
    return out;
}

} // namespace

FuelSectorConfig FuelSectorConfig::standard(double gas_t, double oil_t) {
    FuelSectorConfig c;
    for (const char* s : {"D35.2.1", "D35.2.2", "D35.2.3"})
        c.gas_sectors.emplace_back(s);
    for (const char* s : {"C19.2.0", "G46.7.1", "G47.3.0"})
        c.oil_sectors.emplace_back(s);
    for (const char* s : {"K", "G46.1.2"})
        c.excluded_sectors.emplace_back(s);
    c.total_gas_emissions = gas_t;
    c.total_oil_emissions = oil_t;
    return c;
}

void FuelSectorConfig::validate() const {
    if (!(total_gas_emissions >= 0.0) || !(total_oil_emissions >= 0.0))
        throw ConfigError("fuel emission totals must be non-negative");
    for (const auto& g : gas_sectors)
        for (const auto& o : oil_sectors)
            if (g == o)
                throw ConfigError("sector " + g.str() + " listed as both gas and oil distributor");
}

FuelSectorConfig FuelSectorConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open " + path.string());
    FuelSectorConfig c;
    try {
        const auto j = nlohmann::json::parse(in);
        c.gas_sectors = codes_from_json(j, "gas_sectors");
        c.oil_sectors = codes_from_json(j, "oil_sectors");
        c.excluded_sectors = codes_from_json(j, "excluded_sectors");
        c.total_gas_emissions = j.at("total_gas_emissions_t").get<double>();
        c.total_oil_emissions = j.at("total_oil_emissions_t").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(path.string() + ": " + e.what());
    }
    c.validate();
    return c;
}

void FuelSectorConfig::save(const std::filesystem::path& path) const {
    nlohmann::ordered_json j;
    auto list = [](const std::vector<SectorCode>& v) {
        auto a = nlohmann::json::array();
        for (const auto& s : v)
            a.push_back(s.str());
        return a;
    };
    j["gas_sectors"] = list(gas_sectors);
    j["oil_sectors"] = list(oil_sectors);
    j["excluded_sectors"] = list(excluded_sectors);
    j["total_gas_emissions_t"] = total_gas_emissions;
    j["total_oil_emissions_t"] = total_oil_emissions;
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

std::vector<FuelRole> classify_firms(const SupplyNetwork& net, const FuelSectorConfig& cfg) {
    std::vector<FuelRole> roles(net.size(), FuelRole::Consumer);
    for (FirmId i = 0; i < net.size(); ++i) {
        const auto& s = net.sector(i);
        if (matches_any(s, cfg.gas_sectors))
            roles[i] = FuelRole::GasDistributor;
        else if (matches_any(s, cfg.oil_sectors))
            roles[i] = FuelRole::OilDistributor;
        else if (matches_any(s, cfg.excluded_sectors))
            roles[i] = FuelRole::Excluded;
    }
    return roles;
}

FuelStrengths fuel_in_strengths(const SupplyNetwork& net, const FuelSectorConfig& cfg) {
    FuelStrengths fs;
    fs.roles = classify_firms(net, cfg);
    fs.gas_in.assign(net.size(), 0.0);
    fs.oil_in.assign(net.size(), 0.0);
    auto is_distributor = [&](FirmId i) {
        return fs.roles[i] == FuelRole::GasDistributor || fs.roles[i] == FuelRole::OilDistributor;
    };
    for (FirmId j = 0; j < net.size(); ++j) {
        const auto role = fs.roles[j];
        if (role != FuelRole::GasDistributor && role != FuelRole::OilDistributor)
            continue;
        auto& in = role == FuelRole::GasDistributor ? fs.gas_in : fs.oil_in;
        double& out = role == FuelRole::GasDistributor ? fs.gas_out : fs.oil_out;
        const auto buyers = net.customers(j);
        const auto values = net.sales_to(j);
        for (std::size_t k = 0; k < buyers.size(); ++k) {
            in[buyers[k]] += values[k];
            // Trade within or between the fuel sectors is not final fuel use.
            if (!is_distributor(buyers[k]))
                out += values[k];
        }
    }
    fs.degenerate_gas = !(fs.gas_out > 0.0);
    fs.degenerate_oil = !(fs.oil_out > 0.0);
    return fs;
}

double EmissionVector::total() const {
    double s = 0.0;
    for (double t : tonnes)
        s += t;
    return s;
}

EmissionEstimate estimate_emissions(const SupplyNetwork& net, const FuelSectorConfig& cfg) {
    cfg.validate();
    const auto fs = fuel_in_strengths(net, cfg);
    EmissionEstimate est;
    est.emissions.tonnes.assign(net.size(), 0.0);
    for (FirmId i = 0; i < net.size(); ++i) {
        const double gas_share = fs.degenerate_gas ? 0.0 : fs.gas_in[i] / fs.gas_out;
        const double oil_share = fs.degenerate_oil ? 0.0 : fs.oil_in[i] / fs.oil_out;
        const double e = gas_share * cfg.total_gas_emissions + oil_share * cfg.total_oil_emissions;
        switch (fs.roles[i]) {
        case FuelRole::Consumer:
            est.emissions.tonnes[i] = e;
            est.gas_covered_share += gas_share;
            est.oil_covered_share += oil_share;
            break;
        case FuelRole::Excluded:
            est.excluded_emissions += e;
            break;
        default:
            break;
        }
    }
    return est;
}

void write_emissions_csv(const std::filesystem::path& path, const EmissionVector& e) {
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write " + path.string());
    out << "firm_id,emissions_t\n";
    for (FirmId i = 0; i < e.size(); ++i)
        out << i << ',' << format_double(e[i]) << '\n';
}

EmissionVector load_emissions_csv(const std::filesystem::path& path, std::size_t n_firms) {
    csv::Reader r(path, {"firm_id", "emissions_t"});
    EmissionVector e;
    e.tonnes.assign(n_firms, 0.0);
    while (r.next()) {
        const auto id = r.index(0);
        if (id >= n_firms)
            r.fail("unknown firm id");
        const double t = r.number(1);
        if (t < 0.0)
            r.fail("negative emissions");
        e.tonnes[id] = t;
    }
    return e;
}

std::vector<std::optional<double>> carbon_to_profit(const EmissionVector& e, const FirmBook& book) {
    std::vector<std::optional<double>> out(e.size());
    for (FirmId i = 0; i < e.size(); ++i) {
        const double p = book[i].net_profit;
        if (p > 0.0)
            out[i] = e[i] / p;
    }
    return out;
}

CprBucket cpr_bucket(double emissions, double net_profit) {
    if (!(net_profit > 0.0))
        return CprBucket::Undefined;
    if (!(emissions > 0.0))
        return CprBucket::NonEmitter;
    const double breakeven = net_profit / emissions;
    if (breakeven <= 10)
        return CprBucket::Upto10;
    if (breakeven <= 45)
        return CprBucket::Upto45;
    if (breakeven <= 100)
        return CprBucket::Upto100;
    if (breakeven <= 500)
        return CprBucket::Upto500;
    if (breakeven <= 1000)
        return CprBucket::Upto1000;
    return CprBucket::Above1000;
}

std::string to_string(CprBucket b) {
    switch (b) {
    case CprBucket::Upto10: return "breakeven<=10";
    case CprBucket::Upto45: return "breakeven<=45";
    case CprBucket::Upto100: return "breakeven<=100";
    case CprBucket::Upto500: return "breakeven<=500";
    case CprBucket::Upto1000: return "breakeven<=1000";
    case CprBucket::Above1000: return "breakeven>1000";
    case CprBucket::NonEmitter: return "non_emitter";
    case CprBucket::Undefined: return "undefined";
    }
    return "undefined";
}

} // namespace cst
