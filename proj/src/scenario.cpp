#include "cst/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <thread>

namespace cst {

std::vector<double> RunConfig::default_prices() {
    std::vector<double> p;
    for (int k = 1; k <= 100; ++k)
        p.push_back(10.0 * k);
    return p;
}

void RunConfig::validate() const {
    if (data_dir.has_value() == generator.has_value())
        throw ConfigError("run config needs exactly one of data_dir and generator");
    if (generator)
        generator->validate();
    if (prices.empty())
        throw ConfigError("price grid is empty");
    for (std::size_t k = 0; k < prices.size(); ++k) {
        if (!(prices[k] >= 0.0) || !std::isfinite(prices[k]))
            throw ConfigError("prices must be finite and non-negative");
        if (k > 0 && !(prices[k] > prices[k - 1]))
            throw ConfigError("price grid must be strictly ascending");
    }
    if (!(lgd >= 0.0 && lgd <= 1.0))
        throw ConfigError("lgd must lie in [0, 1]");
    if (!(epsilon > 0.0))
        throw ConfigError("epsilon must be positive");
    if (max_iterations == 0)
        throw ConfigError("max_iterations must be positive");
    if (!(coverage > 0.0 && coverage <= 1.0))
        throw ConfigError("coverage must lie in (0, 1]");
    if (!(edge_threshold >= 0.0) || !std::isfinite(edge_threshold))
        throw ConfigError("edge_threshold must be non-negative");
}

Toggle parse_toggle(std::string_view s) {
    if (s == "on") return Toggle::On;
    if (s == "off") return Toggle::Off;
    if (s == "both") return Toggle::Both;
    throw ConfigError("pass_through must be on, off or both, got '" + std::string(s) + "'");
}

FunctionChoice parse_function_choice(std::string_view s) {
    if (s == "both" || s == "Both")
        return FunctionChoice::Both;
    return parse_production_function(s) == ProductionFunction::GL ? FunctionChoice::GL : FunctionChoice::Linear;
}

std::string to_string(Toggle t) {
    switch (t) {
    case Toggle::Off: return "off";
    case Toggle::On: return "on";
    case Toggle::Both: return "both";
    }
    return "?";
}

std::string to_string(FunctionChoice f) {
    switch (f) {
    case FunctionChoice::GL: return "GL";
    case FunctionChoice::Linear: return "Linear";
    case FunctionChoice::Both: return "both";
    }
    return "?";
}

RunConfig RunConfig::from_json(const nlohmann::json& j, const std::filesystem::path& base) {
    if (!j.is_object())
        throw ConfigError("run config must be a JSON object");
    RunConfig c;
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "data_dir") {
                std::filesystem::path p = v.get<std::string>();
                c.data_dir = p.is_relative() && !base.empty() ? base / p : p;
            } else if (key == "generator") c.generator = GeneratorConfig::from_json(v);
            else if (key == "prices") c.prices = v.get<std::vector<double>>();
            else if (key == "pass_through") c.pass_through = parse_toggle(v.get<std::string>());
            else if (key == "fn") c.fn = parse_function_choice(v.get<std::string>());
            else if (key == "lgd") c.lgd = v.get<double>();
            else if (key == "epsilon") c.epsilon = v.get<double>();
            else if (key == "max_iterations") c.max_iterations = v.get<std::size_t>();
            else if (key == "coverage") c.coverage = v.get<double>();
            else if (key == "edge_threshold") c.edge_threshold = v.get<double>();
            else if (key == "demand_channel") c.demand_channel = v.get<bool>();
            else if (key == "threads") c.threads = v.get<std::size_t>();
            else if (key == "dump_costs") c.dump_costs = v.get<bool>();
            else if (key == "output_dir") {
                std::filesystem::path p = v.get<std::string>();
                c.output_dir = p.is_relative() && !base.empty() ? base / p : p;
            } else
                throw ConfigError("unknown run setting '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("run config: ") + e.what());
    }
    return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return from_json(j, path.parent_path());
}

nlohmann::ordered_json RunConfig::to_json() const {
    nlohmann::ordered_json j;
    if (data_dir)
        j["data_dir"] = data_dir->string();
    if (generator)
        j["generator"] = generator->to_json();
    j["prices"] = prices;
    j["pass_through"] = to_string(pass_through);
    j["fn"] = to_string(fn);
    j["lgd"] = lgd;
    j["epsilon"] = epsilon;
    j["max_iterations"] = max_iterations;
    j["coverage"] = coverage;
    j["edge_threshold"] = edge_threshold;
    j["demand_channel"] = demand_channel;
    j["threads"] = threads;
    j["dump_costs"] = dump_costs;
    j["output_dir"] = output_dir.string();
    return j;
}

std::filesystem::path default_output_dir() {
    if (const char* env = std::getenv("CST_OUTPUT_DIR"); env && *env)
        return env;
    return "cst_out";
}

std::string Cell::mode() const {
    return pass_through ? "pass_through" : "no_pass_through";
}

std::string Cell::label() const {
    return "p" + format_double(price) + "_" + mode() + "_" + to_string(fn);
}

std::vector<Cell> expand_grid(const RunConfig& cfg) {
    std::vector<bool> modes;
    if (cfg.pass_through != Toggle::On)
        modes.push_back(false);
    if (cfg.pass_through != Toggle::Off)
        modes.push_back(true);
    std::vector<ProductionFunction> fns;
    if (cfg.fn != FunctionChoice::Linear)
        fns.push_back(ProductionFunction::GL);
    if (cfg.fn != FunctionChoice::GL)
        fns.push_back(ProductionFunction::Linear);
    std::vector<Cell> cells;
    for (double p : cfg.prices)
        for (bool m : modes)
            for (auto fn : fns)
                cells.push_back({p, m, fn});
    return cells;
}

EngineSettings EngineSettings::from(const RunConfig& cfg) {
    EngineSettings s;
    s.lgd = cfg.lgd;
    s.contagion.epsilon = cfg.epsilon;
    s.contagion.max_iterations = cfg.max_iterations;
    s.contagion.demand_channel = cfg.demand_channel;
    s.pass_through.coverage = cfg.coverage;
    s.edge_threshold = cfg.edge_threshold;
    s.keep_costs = cfg.dump_costs;
    return s;
}

StressTest::StressTest(const Dataset& data, EngineSettings settings)
    : data_(data), settings_(settings) {
    const std::size_t n = data.network.size();
    if (data.book.size() != n)
        throw InputError("firm book and network sizes differ");
    if (data.emissions) {
        if (data.emissions->size() != n)
            throw InputError("emission vector and network sizes differ");
        emissions_ = *data.emissions;
    } else {
        emissions_ = estimate_emissions(data.network, data.fuel).emissions;
    }
    if (settings_.edge_threshold > 0.0) {
        auto t = threshold_network(data.network, settings_.edge_threshold);
        net_ = std::move(t.network);
        retained_value_fraction_ = t.retained_value_fraction;
    } else {
        net_ = data.network;
    }
    gl_ = calibrate(net_, data.criticality, ProductionFunction::GL);
    linear_ = calibrate(net_, data.criticality, ProductionFunction::Linear);
    banks_ = data.banks;
    banks_.lgd = settings_.lgd;
    if (!(banks_.lgd >= 0.0 && banks_.lgd <= 1.0))
        throw ConfigError("lgd must lie in [0, 1]");

    unit_direct_ = emissions_.tonnes;
    if (settings_.pass_through_needed) {
        try {
            const auto res = pass_through(net_, market_shares(net_), unit_direct_, settings_.pass_through);
            unit_pass_through_ = res.retained;
            pt_iterations_ = res.iterations;
        } catch (const Error& e) {
            pt_error_ = e.what();
        }
    }
}

const std::vector<double>& StressTest::unit_costs(bool pass_through) const {
    if (!pass_through)
        return unit_direct_;
    if (!pt_error_.empty())
        throw Error("cost pass-through failed: " + pt_error_);
    if (!settings_.pass_through_needed)
        throw Error("cost pass-through was not prepared for this run");
    return unit_pass_through_;
}

CellResult StressTest::run(const Cell& cell) const {
    const std::size_t n = net_.size();
    const auto& unit = unit_costs(cell.pass_through);
    CellResult r;
    r.cell = cell;
    const auto direct = direct_defaults_at_price(data_.book, unit, cell.price);

    std::vector<double> gamma(n);
    for (FirmId i = 0; i < n; ++i) {
        gamma[i] = cell.price * unit[i];
        r.carbon_cost_total += gamma[i];
    }
    std::vector<double> h(n, 1.0);
    for (FirmId i = 0; i < n; ++i)
        if (direct[i])
            h[i] = 0.0;

    Propagator prop(net_, params(cell.fn), settings_.contagion);
    const auto c = prop.run(h);
    const auto proj = project_books(data_.book, c.h, gamma);
    const auto indirect = indirect_defaults(proj, direct);
    r.losses = bank_losses(banks_, direct, indirect, {&net_, &data_.book, &emissions_});

    r.direct_output_loss = c.direct_loss;
    r.total_output_loss = c.total_loss;
    r.direct_bank_loss = r.losses.system_direct;
    r.total_bank_loss = r.losses.system_total;
    r.direct_defaults = count(direct);
    r.indirect_defaults = count(indirect);
    r.contagion_iterations = c.iterations;
    if (settings_.keep_costs)
        r.retained_costs = std::move(gamma);
    r.ok = true;
    return r;
}

std::vector<CellResult> run_cells(const StressTest& engine, const std::vector<Cell>& cells, std::size_t threads) {
    std::vector<CellResult> results(cells.size());
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < cells.size(); k = next++) {
            try {
                results[k] = engine.run(cells[k]);
            } catch (const std::exception& e) {
                results[k] = CellResult{};
                results[k].cell = cells[k];
                results[k].error = e.what();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    return results;
}

std::vector<std::string> dominance_violations(const std::vector<CellResult>& results, double tolerance) {
    std::vector<std::string> out;
    std::map<std::pair<double, bool>, std::pair<const CellResult*, const CellResult*>> rows;
    for (const auto& r : results) {
        if (!r.ok)
            continue;
        const std::string fn = to_string(r.cell.fn);
        if (r.direct_output_loss > r.total_output_loss + tolerance)
            out.push_back(r.cell.label() + ": direct output loss exceeds total");
        if (r.direct_bank_loss > r.total_bank_loss + tolerance)
            out.push_back(r.cell.label() + ": direct bank loss exceeds total");
        auto& slot = rows[{r.cell.price, r.cell.pass_through}];
        (r.cell.fn == ProductionFunction::GL ? slot.first : slot.second) = &r;
    }
    for (const auto& [key, pair] : rows) {
        const auto* gl = pair.first;
        const auto* lin = pair.second;
        if (!gl || !lin)
            continue;
        const std::string where = "p" + format_double(key.first) + "_" + gl->cell.mode();
        if (lin->total_output_loss > gl->total_output_loss + tolerance)
            out.push_back(where + ": Linear output loss " + format_double(lin->total_output_loss) + " exceeds GL " +
                          format_double(gl->total_output_loss));
        if (lin->total_bank_loss > gl->total_bank_loss + tolerance)
            out.push_back(where + ": Linear bank loss " + format_double(lin->total_bank_loss) + " exceeds GL " +
                          format_double(gl->total_bank_loss));
    }
    return out;
}

std::string amplification_field(double direct, double total) {
    if (direct == 0.0)
        return "";
    return format_double(total / direct);
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw Error("cannot write " + p.string());
    return out;
}

nlohmann::ordered_json cell_json(const CellResult& r, const nlohmann::ordered_json& provenance) {
    nlohmann::ordered_json j;
    j["cell"] = {{"price", r.cell.price}, {"mode", r.cell.mode()}, {"fn", to_string(r.cell.fn)}};
    j["status"] = r.ok ? "ok" : "failed";
    if (!r.ok) {
        j["error"] = r.error;
    } else {
        j["output_loss"] = {{"direct", r.direct_output_loss}, {"total", r.total_output_loss}};
        j["defaults"] = {{"direct", r.direct_defaults}, {"indirect", r.indirect_defaults}};
        j["contagion_iterations"] = r.contagion_iterations;
        j["carbon_cost_total"] = r.carbon_cost_total;
        j["bank_losses"] = to_json(r.losses);
    }
    j["provenance"] = provenance;
    return j;
}

} // namespace

void report_curves(const std::vector<CellResult>& results, const std::filesystem::path& dir,
                   const nlohmann::ordered_json& provenance) {
    std::filesystem::create_directories(dir / "cells");
    auto sweep = open_out(dir / "sweep.csv");
    sweep << "price,mode,fn,direct_output_loss,total_output_loss,direct_bank_loss,total_bank_loss,"
             "amplification_output,amplification_bank\n";
    auto direct = open_out(dir / "direct_sweep.csv");
    direct << "price,mode,direct_output_loss,direct_defaults_count\n";
    auto bank = open_out(dir / "bank_sweep.csv");
    bank << "price,system_direct_loss,system_total_loss,fn,pass_through\n";

    std::map<std::pair<double, bool>, bool> direct_written;
    for (const auto& r : results) {
        const auto label = r.cell.label();
        open_out(dir / "cells" / (label + ".json")) << cell_json(r, provenance).dump(2) << '\n';
        if (!r.ok)
            continue;
        const std::string price = format_double(r.cell.price);
        sweep << price << ',' << r.cell.mode() << ',' << to_string(r.cell.fn) << ','
              << format_double(r.direct_output_loss) << ',' << format_double(r.total_output_loss) << ','
              << format_double(r.direct_bank_loss) << ',' << format_double(r.total_bank_loss) << ','
              << amplification_field(r.direct_output_loss, r.total_output_loss) << ','
              << amplification_field(r.direct_bank_loss, r.total_bank_loss) << '\n';
        if (!direct_written[{r.cell.price, r.cell.pass_through}]) {
            direct_written[{r.cell.price, r.cell.pass_through}] = true;
            direct << price << ',' << r.cell.mode() << ',' << format_double(r.direct_output_loss) << ','
                   << r.direct_defaults << '\n';
        }
        bank << price << ',' << format_double(r.direct_bank_loss) << ',' << format_double(r.total_bank_loss) << ','
             << to_string(r.cell.fn) << ',' << (r.cell.pass_through ? "on" : "off") << '\n';
        if (!r.retained_costs.empty()) {
            auto costs = open_out(dir / "cells" / (label + "_costs.csv"));
            costs << "firm_id,retained_cost\n";
            for (FirmId i = 0; i < r.retained_costs.size(); ++i)
                costs << i << ',' << format_double(r.retained_costs[i]) << '\n';
        }
    }
}

SweepOutcome run_sweep(const RunConfig& cfg, const nlohmann::ordered_json& provenance) {
    cfg.validate();
    const auto out_dir = cfg.output_dir.empty() ? default_output_dir() : cfg.output_dir;
    std::filesystem::create_directories(out_dir);
    open_out(out_dir / "config.json") << provenance.dump(2) << '\n';

    Dataset data;
    if (cfg.data_dir) {
        data = load_dataset(*cfg.data_dir);
    } else {
        data = generate(*cfg.generator).data;
        save_dataset(data, out_dir / "data");
    }

    auto settings = EngineSettings::from(cfg);
    settings.pass_through_needed = cfg.pass_through != Toggle::Off;
    const StressTest engine(data, settings);

    SweepOutcome outcome;
    outcome.results = run_cells(engine, expand_grid(cfg), cfg.threads);
    for (const auto& r : outcome.results)
        outcome.failed_cells += !r.ok;
    outcome.violations = dominance_violations(outcome.results);
    report_curves(outcome.results, out_dir, provenance);

    nlohmann::ordered_json summary;
    summary["cells"] = outcome.results.size();
    summary["failed_cells"] = nlohmann::ordered_json::array();
    for (const auto& r : outcome.results)
        if (!r.ok)
            summary["failed_cells"].push_back({{"cell", r.cell.label()}, {"error", r.error}});
    summary["dominance_violations"] = outcome.violations;
    summary["retained_edge_value_fraction"] = engine.retained_value_fraction();
    summary["pass_through_iterations"] = engine.pass_through_iterations();
    summary["total_emissions_t"] = engine.emissions().total();
    summary["provenance"] = provenance;
    open_out(out_dir / "summary.json") << summary.dump(2) << '\n';
    return outcome;
}

} // namespace cst
