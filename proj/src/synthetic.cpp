#include "cst/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace cst {

namespace detmath {

namespace {
constexpr double ln2 = 0.693147180559945309417232121458176568;
// ln2 split so that k * ln2_hi is exact for |k| < 2^11.
constexpr double ln2_hi = 6.93147180369123816490e-01;
constexpr double ln2_lo = 1.90821492927058770002e-10;
}

// Series evaluations with + - * / only; IEEE-754 makes these bitwise
// reproducible, unlike the platform libm.
double log(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw Error("detmath::log: argument must be positive and finite");
    int e = 0;
    double m = std::frexp(x, &e);
    if (m < 0.70710678118654752440) {
        m *= 2.0;
        --e;
    }
    const double s = (m - 1.0) / (m + 1.0);
    const double s2 = s * s;
    double term = s;
    double sum = 0.0;
    for (int k = 1; k <= 41; k += 2) {
        sum += term / k;
        term *= s2;
    }
    return e * ln2_hi + (e * ln2_lo + 2.0 * sum);
}

double exp(double x) {
    if (x > 709.0)
        throw Error("detmath::exp: overflow");
    if (x < -745.0)
        return 0.0;
    const double k = std::floor(x / ln2 + 0.5);
    const double r = (x - k * ln2_hi) - k * ln2_lo;
    double term = 1.0;
    double sum = 1.0;
    for (int i = 1; i <= 24; ++i) {
        term *= r / i;
        sum += term;
    }
    return std::ldexp(sum, static_cast<int>(k));
}

double pow(double x, double y) {
    return exp(y * log(x));
}

} // namespace detmath

std::size_t DetRng::index(std::size_t n) {
    if (n == 0)
        throw Error("DetRng::index: empty range");
    const unsigned __int128 p = static_cast<unsigned __int128>(eng_()) * n;
    return static_cast<std::size_t>(p >> 64);
}

double DetRng::pareto(double xmin, double alpha) {
    return xmin * detmath::pow(1.0 - uniform(), -1.0 / alpha);
}

double DetRng::log_uniform(double lo, double hi) {
    const double a = detmath::log(lo);
    return detmath::exp(a + (detmath::log(hi) - a) * uniform());
}

namespace {

bool is_fraction(double x) {
    return x >= 0.0 && x <= 1.0;
}

} // namespace

void GeneratorConfig::validate() const {
    if (n_firms < 2)
        throw ConfigError("generator needs at least 2 firms");
    if (n_firms > std::numeric_limits<FirmId>::max() / 2)
        throw ConfigError("too many firms");
    const std::pair<const char*, double> fractions[] = {{"fuel_seller_fraction", fuel_seller_fraction},
                                                        {"loan_coverage", loan_coverage},
                                                        {"essentiality_rate", essentiality_rate},
                                                        {"emitter_fraction", emitter_fraction},
                                                        {"ineligible_fraction", ineligible_fraction},
                                                        {"final_demand_fraction", final_demand_fraction}};
    for (const auto& [name, v] : fractions)
        if (!is_fraction(v))
            throw ConfigError(std::string(name) + " must lie in [0, 1]");
    if (!(emission_tail_exponent > 0.0) || !std::isfinite(emission_tail_exponent))
        throw ConfigError("emission_tail_exponent must be positive");
    if (!(mean_degree >= 1.0) || !std::isfinite(mean_degree))
        throw ConfigError("mean_degree must be at least 1");
    if (!(min_breakeven > 0.0) || !(max_breakeven >= min_breakeven) || !std::isfinite(max_breakeven))
        throw ConfigError("breakeven range must satisfy 0 < min <= max");
    if (n_banks == 0 && loan_coverage > 0.0)
        throw ConfigError("loan_coverage > 0 needs at least one bank");
    double w = 0.0;
    for (const auto& [letter, weight] : sector_mix) {
        if (letter < 'A' || letter > 'U')
            throw ConfigError(std::string("sector_mix: unknown section '") + letter + "'");
        if (!(weight >= 0.0) || !std::isfinite(weight))
            throw ConfigError("sector_mix weights must be non-negative");
        w += weight;
    }
    if (!(w > 0.0))
        throw ConfigError("sector_mix needs a positive weight");
    for (const auto& t : {total_gas_emissions_t, total_oil_emissions_t})
        if (t && (!(*t >= 0.0) || !std::isfinite(*t)))
            throw ConfigError("emission totals must be non-negative");
}

GeneratorConfig GeneratorConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw ConfigError("generator config must be a JSON object");
    GeneratorConfig c;
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "n_firms") c.n_firms = v.get<std::size_t>();
            else if (key == "n_banks") c.n_banks = v.get<std::size_t>();
            else if (key == "seed") c.seed = v.get<std::uint64_t>();
            else if (key == "emission_tail_exponent") c.emission_tail_exponent = v.get<double>();
            else if (key == "fuel_seller_fraction") c.fuel_seller_fraction = v.get<double>();
            else if (key == "loan_coverage") c.loan_coverage = v.get<double>();
            else if (key == "essentiality_rate") c.essentiality_rate = v.get<double>();
            else if (key == "mean_degree") c.mean_degree = v.get<double>();
            else if (key == "final_demand_fraction") c.final_demand_fraction = v.get<double>();
            else if (key == "emitter_fraction") c.emitter_fraction = v.get<double>();
            else if (key == "ineligible_fraction") c.ineligible_fraction = v.get<double>();
            else if (key == "min_breakeven") c.min_breakeven = v.get<double>();
            else if (key == "max_breakeven") c.max_breakeven = v.get<double>();
            else if (key == "total_gas_emissions_t") c.total_gas_emissions_t = v.get<double>();
            else if (key == "total_oil_emissions_t") c.total_oil_emissions_t = v.get<double>();
            else if (key == "sector_mix") {
                c.sector_mix.clear();
                for (const auto& [s, w] : v.items()) {
                    if (s.size() != 1)
                        throw ConfigError("sector_mix keys are single section letters");
                    c.sector_mix[s[0]] = w.get<double>();
                }
            } else
                throw ConfigError("unknown generator setting '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("generator config: ") + e.what());
    }
    c.validate();
    return c;
}

nlohmann::ordered_json GeneratorConfig::to_json() const {
    nlohmann::ordered_json j;
    j["n_firms"] = n_firms;
    j["n_banks"] = n_banks;
    j["seed"] = seed;
    j["emission_tail_exponent"] = emission_tail_exponent;
    nlohmann::ordered_json mix = nlohmann::ordered_json::object();
    for (const auto& [s, w] : sector_mix)
        mix[std::string(1, s)] = w;
    j["sector_mix"] = std::move(mix);
    j["fuel_seller_fraction"] = fuel_seller_fraction;
    j["loan_coverage"] = loan_coverage;
    j["essentiality_rate"] = essentiality_rate;
    j["mean_degree"] = mean_degree;
    j["final_demand_fraction"] = final_demand_fraction;
    j["emitter_fraction"] = emitter_fraction;
    j["ineligible_fraction"] = ineligible_fraction;
    j["min_breakeven"] = min_breakeven;
    j["max_breakeven"] = max_breakeven;
    if (total_gas_emissions_t)
        j["total_gas_emissions_t"] = *total_gas_emissions_t;
    if (total_oil_emissions_t)
        j["total_oil_emissions_t"] = *total_oil_emissions_t;
    return j;
}

double pareto_ks_distance(std::vector<double> sample, double xmin, double alpha) {
    std::erase_if(sample, [&](double x) { return !(x >= xmin); });
    if (sample.empty())
        return 1.0;
    std::sort(sample.begin(), sample.end());
    const double m = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = 1.0 - std::pow(sample[i] / xmin, -alpha);
        d = std::max({d, f - i / m, (i + 1) / m - f});
    }
    return d;
}

namespace {

constexpr double size_scale = 1e5;     // smallest firm, currency per year
constexpr double fuel_scale = 2e3;     // smallest fuel bill
constexpr double national_firms = 410523.0;
constexpr double national_gas_t = 12.5e6;
constexpr double national_oil_t = 13.7e6;

std::string class_code(char section, std::size_t j) {
    const std::size_t division = 10 + j / 9;
    return std::string(1, section) + std::to_string(division) + '.' + std::to_string(1 + (j / 3) % 3) + '.' +
           std::to_string(1 + j % 3);
}

std::vector<std::vector<SectorCode>> sector_classes(const GeneratorConfig& cfg, const FuelSectorConfig& fuel,
                                                    std::vector<char>& letters, std::vector<double>& cum_weight) {
    const std::size_t n_classes = std::clamp<std::size_t>(cfg.n_firms / 40, 8, 600);
    double total = 0.0;
    for (const auto& [s, w] : cfg.sector_mix)
        total += w;
    std::vector<SectorCode> reserved;
    for (const auto* list : {&fuel.gas_sectors, &fuel.oil_sectors, &fuel.excluded_sectors})
        for (const auto& c : *list)
            if (c.key().size() > 1)
                reserved.push_back(c);

    std::vector<std::vector<SectorCode>> classes;
    double acc = 0.0;
    for (const auto& [s, w] : cfg.sector_mix) {
        if (!(w > 0.0))
            continue;
        const auto count = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(w / total * n_classes)));
        std::vector<SectorCode> codes;
        for (std::size_t j = 0; codes.size() < count; ++j) {
            SectorCode code(class_code(s, j));
            if (std::none_of(reserved.begin(), reserved.end(), [&](const SectorCode& r) { return code.within(r); }))
                codes.push_back(code);
        }
        letters.push_back(s);
        acc += w;
        cum_weight.push_back(acc);
        classes.push_back(std::move(codes));
    }
    return classes;
}

/// Index drawn proportionally to the increments of a cumulative weight vector.
std::size_t draw_weighted(DetRng& rng, const std::vector<double>& cum) {
    const double u = rng.uniform() * cum.back();
    const auto it = std::upper_bound(cum.begin(), cum.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
}

std::vector<double> upper_half(std::vector<double> v) {
    std::erase_if(v, [](double x) { return !(x > 0.0); });
    std::sort(v.begin(), v.end(), std::greater<>());
    v.resize((v.size() + 1) / 2);
    return v;
}

} // namespace

GeneratedDataset generate(const GeneratorConfig& cfg) {
    cfg.validate();
    const std::size_t n = cfg.n_firms;
    const double alpha = cfg.emission_tail_exponent;
    DetRng rng(cfg.seed);

    const double scale = n / national_firms;
    FuelSectorConfig fuel = FuelSectorConfig::standard(cfg.total_gas_emissions_t.value_or(national_gas_t * scale),
                                                       cfg.total_oil_emissions_t.value_or(national_oil_t * scale));

    std::vector<char> letters;
    std::vector<double> section_cum;
    const auto classes = sector_classes(cfg, fuel, letters, section_cum);

    // Fuel sellers: a random subset, alternating gas and oil.
    std::size_t n_fuel = 0;
    if (cfg.fuel_seller_fraction > 0.0)
        n_fuel = std::min(n, std::max<std::size_t>(2, static_cast<std::size_t>(
                                                          std::llround(cfg.fuel_seller_fraction * n))));
    std::vector<FirmId> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t k = 0; k < n_fuel; ++k)
        std::swap(perm[k], perm[k + rng.index(n - k)]);
    std::vector<FirmId> gas_sellers, oil_sellers;
    std::vector<std::uint8_t> is_fuel(n, 0);
    for (std::size_t k = 0; k < n_fuel; ++k) {
        is_fuel[perm[k]] = 1;
        (k % 2 == 0 ? gas_sellers : oil_sellers).push_back(perm[k]);
    }
    std::sort(gas_sellers.begin(), gas_sellers.end());
    std::sort(oil_sellers.begin(), oil_sellers.end());

    std::vector<SectorCode> sectors(n);
    std::vector<double> size(n);
    std::vector<std::uint8_t> is_sink(n, 0);
    for (FirmId i = 0; i < n; ++i) {
        size[i] = rng.pareto(size_scale, alpha);
        is_sink[i] = rng.uniform() < cfg.final_demand_fraction && !is_fuel[i];
        if (is_fuel[i]) {
            const auto& list = std::binary_search(gas_sellers.begin(), gas_sellers.end(), i) ? fuel.gas_sectors
                                                                                             : fuel.oil_sectors;
            sectors[i] = list[rng.index(list.size())];
        } else {
            const auto& cls = classes[draw_weighted(rng, section_cum)];
            sectors[i] = cls[rng.index(cls.size())];
        }
    }

    // Generic trade. Out-degree grows with sqrt(size); a buyer receives each
    // edge with probability proportional to its input need, material share
    // times size, so in-strengths follow input needs in expectation.
    std::vector<double> buyer_cum(n);
    double acc = 0.0, sqrt_sum = 0.0;
    std::size_t sellers = 0;
    for (FirmId i = 0; i < n; ++i) {
        acc += rng.uniform(0.3, 0.8) * size[i];
        buyer_cum[i] = acc;
        if (!is_fuel[i] && !is_sink[i]) {
            sqrt_sum += std::sqrt(size[i] / size_scale);
            ++sellers;
        }
    }
    const double mean_sqrt = sellers > 0 ? sqrt_sum / sellers : 1.0;
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(cfg.mean_degree * n * 1.1) + n);
    for (FirmId j = 0; j < n; ++j) {
        if (is_fuel[j] || is_sink[j])
            continue;
        const double g = std::sqrt(size[j] / size_scale) / mean_sqrt;
        const auto d = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(cfg.mean_degree * g)), 1, n - 1);
        const double per_edge = size[j] / d;
        for (std::size_t k = 0; k < d; ++k) {
            FirmId b = static_cast<FirmId>(draw_weighted(rng, buyer_cum));
            for (int attempt = 0; b == j && attempt < 8; ++attempt)
                b = static_cast<FirmId>(draw_weighted(rng, buyer_cum));
            const double v = per_edge * rng.uniform(0.5, 1.5);
            if (b != j)
                edges.push_back({j, b, v});
        }
    }

    // Fuel bills of emitting firms.
    std::vector<double> fuel_sales(n, 0.0);
    GeneratorReport report;
    if (n_fuel > 0) {
        for (FirmId i = 0; i < n; ++i) {
            if (is_fuel[i] || rng.uniform() >= cfg.emitter_fraction)
                continue;
            const double bill = rng.pareto(fuel_scale, alpha);
            const bool gas = oil_sellers.empty() || (!gas_sellers.empty() && rng.uniform() < 0.5);
            const auto& sellers = gas ? gas_sellers : oil_sellers;
            const bool split = rng.uniform() < 0.3;
            const FirmId s1 = sellers[rng.index(sellers.size())];
            const FirmId s2 = sellers[rng.index(sellers.size())];
            if (split) {
                edges.push_back({s1, i, bill * 0.5});
                edges.push_back({s2, i, bill * 0.5});
                fuel_sales[s1] += bill * 0.5;
                fuel_sales[s2] += bill * 0.5;
            } else {
                edges.push_back({s1, i, bill});
                fuel_sales[s1] += bill;
            }
            ++report.emitters;
        }
        // Trade among distributors, which the estimator must leave out.
        std::vector<FirmId> all_fuel(perm.begin(), perm.begin() + n_fuel);
        std::sort(all_fuel.begin(), all_fuel.end());
        if (all_fuel.size() >= 2) {
            for (std::size_t k = 0; k < all_fuel.size(); ++k) {
                std::size_t other = rng.index(all_fuel.size() - 1);
                if (other >= k)
                    ++other;
                edges.push_back({all_fuel[k], all_fuel[other], 0.02 * fuel_sales[all_fuel[k]] + fuel_scale});
            }
        }
    }

    // Strongly connected core: a ring of essential suppliers among the largest firms.
    std::vector<FirmId> candidates;
    for (FirmId i = 0; i < n; ++i)
        if (!is_fuel[i] && !is_sink[i])
            candidates.push_back(i);
    std::stable_sort(candidates.begin(), candidates.end(), [&](FirmId x, FirmId y) { return size[x] > size[y]; });
    std::vector<FirmId> core;
    if (candidates.size() >= 3)
        core.assign(candidates.begin(),
                    candidates.begin() + std::min(candidates.size(), std::clamp<std::size_t>(n / 100, 3, 50)));
    std::set<std::pair<std::string, std::string>> forced;
    for (std::size_t k = 0; k < core.size(); ++k) {
        const FirmId s = core[k];
        const FirmId b = core[(k + 1) % core.size()];
        edges.push_back({s, b, 0.1 * size[s]});
        forced.insert({sectors[b].key(), sectors[s].key()});
    }
    report.core_size = core.size();

    Dataset data;
    data.network = SupplyNetwork::from_edges(sectors, std::move(edges));
    const auto& net = data.network;

    for (FirmId s = 0; s < n; ++s) {
        for (FirmId b : net.customers(s)) {
            const auto key = std::make_pair(sectors[b].key(), sectors[s].key());
            if (data.criticality.entries().count(key))
                continue;
            const bool essential = rng.uniform() < cfg.essentiality_rate;
            data.criticality.set(sectors[b], sectors[s], essential || forced.count(key) > 0);
        }
    }

    const auto emissions = estimate_emissions(net, fuel).emissions;

    // Financials. Every firm consumes the same number of draws.
    data.book.firms.resize(n);
    for (FirmId i = 0; i < n; ++i) {
        double u[10];
        for (double& x : u)
            x = rng.uniform();
        const bool ineligible = u[0] < cfg.ineligible_fraction;
        const double so = net.out_strength(i);
        const double si = net.in_strength(i);
        const double e = emissions[i];
        double profit = 0.0;
        if (e > 0.0) {
            const double lo = detmath::log(cfg.min_breakeven);
            profit = e * detmath::exp(lo + (detmath::log(cfg.max_breakeven) - lo) * u[1]);
        } else {
            profit = 0.03 * std::max(so, size_scale) * (0.5 + u[1]);
        }
        auto& f = data.book[i];
        f.operating_profit = profit * (1.1 + 0.4 * u[2]);
        f.material_costs = si * (1.0 + 0.3 * u[3]);
        f.revenue = std::max(so * (1.0 + 0.5 * u[4]), f.material_costs + f.operating_profit * (1.0 + 0.5 * u[5]));
        const double margin = f.revenue - f.material_costs;
        f.equity = margin * (0.05 + 0.75 * u[6]);
        f.retained_earnings = profit * 0.5 * u[7];
        f.liquidity = margin * (0.05 + 0.75 * u[8]);
        f.net_profit = ineligible ? -profit : profit;
        f.other_income = f.operating_profit - f.revenue + f.material_costs;
    }

    // Banks: Zipf-sized, lending to a fraction of firms.
    std::vector<double> equity(cfg.n_banks, 0.0);
    std::vector<Loan> loans;
    if (cfg.n_banks > 0) {
        std::vector<double> bank_cum(cfg.n_banks);
        double a = 0.0;
        for (std::size_t k = 0; k < cfg.n_banks; ++k) {
            a += 1.0 / (k + 1);
            bank_cum[k] = a;
        }
        std::vector<double> lent(cfg.n_banks, 0.0);
        for (FirmId i = 0; i < n; ++i) {
            if (rng.uniform() >= cfg.loan_coverage)
                continue;
            const int count = rng.uniform() < 0.3 ? 2 : 1;
            for (int c = 0; c < count; ++c) {
                const auto k = static_cast<BankId>(draw_weighted(rng, bank_cum));
                const double p = data.book[i].revenue * rng.uniform(0.05, 0.5);
                loans.push_back({i, k, p});
                lent[k] += p;
            }
        }
        for (std::size_t k = 0; k < cfg.n_banks; ++k) {
            const double u = rng.uniform(0.8, 1.2);
            equity[k] = lent[k] > 0.0 ? lent[k] / 1.85 * u : size_scale * 10.0 * u;
        }
    }
    data.banks = BankRegister::build(std::move(equity), std::move(loans), n);
    mark_borrowers(data.book, data.banks);
    data.fuel = std::move(fuel);

    std::vector<double> strengths;
    for (FirmId i = 0; i < n; ++i)
        if (!is_fuel[i] && !is_sink[i])
            strengths.push_back(net.out_strength(i));
    const auto s_tail = upper_half(std::move(strengths));
    if (!s_tail.empty())
        report.out_strength_ks = pareto_ks_distance(s_tail, s_tail.back(), alpha);
    const auto e_tail = upper_half(emissions.tonnes);
    if (!e_tail.empty())
        report.emission_ks = pareto_ks_distance(e_tail, e_tail.back(), alpha);

    return {std::move(data), report};
}

SystemicCoreFixture systemic_core_fixture(std::uint64_t seed) {
    // 0 = core, 1..K cluster, then the periphery, then final-demand sinks.
    constexpr std::size_t K = 20;
    constexpr std::size_t P = 80;
    constexpr std::size_t S = 10;
    const std::size_t n = 1 + K + P + S;
    DetRng rng(seed);

    const SectorCode core_sector("H52.2.1");
    const SectorCode cluster_sector("C24.1.0");
    const SectorCode periphery_sectors[] = {SectorCode("G46.9.0"), SectorCode("M70.2.2"), SectorCode("F43.2.1"),
                                            SectorCode("N82.1.1")};
    std::vector<SectorCode> sectors(n);
    sectors[0] = core_sector;
    for (std::size_t i = 1; i <= K; ++i)
        sectors[i] = cluster_sector;
    for (std::size_t i = K + 1; i <= K + P; ++i)
        sectors[i] = periphery_sectors[i % 4];
    for (std::size_t i = K + P + 1; i < n; ++i)
        sectors[i] = SectorCode("G47.1.1");
    auto periphery = [&] { return static_cast<FirmId>(K + 1 + rng.index(P)); };
    std::vector<Edge> edges;
    auto to_sinks = [&](FirmId seller, double value) {
        const FirmId s0 = static_cast<FirmId>(K + P + 1 + seller % S);
        const FirmId s1 = static_cast<FirmId>(K + P + 1 + (seller + 1) % S);
        edges.push_back({seller, s0, value / 2});
        edges.push_back({seller, s1, value / 2});
    };

    // Cluster firms sell 300 each: 45 inside the cluster, 20 to the
    // periphery, the rest to final demand. Inputs are 50: 5 from the core,
    // 45 from two cluster peers. The core has no inputs of its own, so only
    // its own default can take it down.
    for (FirmId c = 1; c <= K; ++c) {
        const FirmId next = 1 + c % K;
        const FirmId skip = 1 + (c + 2) % K;
        edges.push_back({c, next, 22.5});
        edges.push_back({c, skip, 22.5});
        for (int k = 0; k < 2; ++k)
            edges.push_back({c, periphery(), 10.0});
        to_sinks(c, 235.0);
        edges.push_back({0, c, 5.0});
    }
    for (FirmId p = K + 1; p <= K + P; ++p) {
        for (int k = 0; k < 3; ++k) {
            FirmId b = periphery();
            if (b == p)
                b = static_cast<FirmId>(K + 1 + (b - K) % P);
            edges.push_back({p, b, rng.uniform(5.0, 15.0)});
        }
        to_sinks(p, 60.0);
    }

    SystemicCoreFixture fx;
    fx.cluster_size = K;
    auto& data = fx.data;
    data.network = SupplyNetwork::from_edges(sectors, std::move(edges));
    data.criticality.set(cluster_sector, core_sector, true);
    data.fuel = FuelSectorConfig::standard(0.0, 0.0);

    const auto& net = data.network;
    EmissionVector e;
    e.tonnes.assign(n, 0.0);
    std::vector<double> breakeven(n, 0.0);
    e.tonnes[0] = 1.0;
    breakeven[0] = fx.core_breakeven;
    const double periphery_breakeven[] = {8.0, 15.0, 45.0, 90.0, 200.0, 600.0};
    for (std::size_t k = 0; k < std::size(periphery_breakeven); ++k) {
        const FirmId p = static_cast<FirmId>(K + 1 + 7 * k);
        e.tonnes[p] = 1.0;
        breakeven[p] = periphery_breakeven[k];
    }
    data.emissions = e;

    data.book.firms.resize(n);
    for (FirmId i = 0; i < n; ++i) {
        auto& f = data.book[i];
        f.material_costs = 1.05 * net.in_strength(i);
        f.revenue = std::max(1.2 * net.out_strength(i), 1.1 * f.material_costs) + 1.0;
        f.net_profit = e.tonnes[i] > 0.0 ? breakeven[i] * e.tonnes[i] : 0.08 * f.revenue;
        f.operating_profit = std::max(f.net_profit, 0.1 * f.revenue);
        f.other_income = f.operating_profit - f.revenue + f.material_costs;
        f.equity = 0.3 * f.revenue;
        f.retained_earnings = 0.02 * f.revenue;
        f.liquidity = 0.2 * f.revenue;
    }
    std::vector<Loan> loans;
    for (FirmId i = 0; i < n; ++i)
        loans.push_back({i, static_cast<BankId>(i % 2), 0.3 * data.book[i].revenue});
    double lent[2] = {0.0, 0.0};
    for (const auto& l : loans)
        lent[l.bank] += l.principal;
    data.banks = BankRegister::build({lent[0] / 1.85, lent[1] / 1.85}, std::move(loans), n);
    mark_borrowers(data.book, data.banks);
    return fx;
}

} // namespace cst
