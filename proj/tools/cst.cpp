// cst: carbon price stress tests on firm-level supply networks.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cst/contagion.hpp"
#include "cst/scenario.hpp"
#include "cst/synthetic.hpp"

using namespace cst;

namespace {

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("not a number: '" + item + "'");
        }
    }
    return out;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<FirmId> parse_ids(const std::string& s) {
    std::vector<FirmId> ids;
    for (double v : parse_list(s)) {
        if (v < 0 || v != static_cast<double>(static_cast<FirmId>(v)))
            throw ConfigError("not a firm id: " + format_double(v));
        ids.push_back(static_cast<FirmId>(v));
    }
    return ids;
}

struct GenerateArgs {
    std::string out, config;
    GeneratorConfig gen;
};

struct EmissionArgs {
    std::string data, out;
};

struct SweepArgs {
    std::string config, data, pass_through, fn, out;
    std::optional<std::string> prices;
    std::optional<double> lgd, epsilon, coverage, threshold;
    std::optional<std::size_t> threads;
    bool no_demand = false, dump_costs = false;
};

struct EsriArgs {
    std::string data, out, fn = "GL", firms;
    double epsilon = 1e-6;
    double threshold = 0.0;
    bool no_fsri = false;
};

struct ToyArgs {
    std::string out, fn = "GL";
    double price = 45.0;
    bool no_edges = false, pass_through = false;
};

int cmd_generate(const GenerateArgs& a, const CLI::App& sub) {
    GeneratorConfig cfg = a.gen;
    if (!a.config.empty()) {
        std::ifstream in(a.config);
        if (!in)
            throw ConfigError("cannot open " + a.config);
        cfg = GeneratorConfig::from_json(nlohmann::json::parse(in));
        // Flags given on the command line override the file.
        if (sub.count("--firms")) cfg.n_firms = a.gen.n_firms;
        if (sub.count("--banks")) cfg.n_banks = a.gen.n_banks;
        if (sub.count("--seed")) cfg.seed = a.gen.seed;
        if (sub.count("--tail")) cfg.emission_tail_exponent = a.gen.emission_tail_exponent;
        if (sub.count("--fuel-fraction")) cfg.fuel_seller_fraction = a.gen.fuel_seller_fraction;
        if (sub.count("--loan-coverage")) cfg.loan_coverage = a.gen.loan_coverage;
        if (sub.count("--essentiality")) cfg.essentiality_rate = a.gen.essentiality_rate;
        if (sub.count("--mean-degree")) cfg.mean_degree = a.gen.mean_degree;
    }
    const auto g = generate(cfg);
    save_dataset(g.data, a.out);
    std::ofstream(std::filesystem::path(a.out) / "generator.json") << cfg.to_json().dump(2) << '\n';
    nlohmann::ordered_json r;
    r["firms"] = g.data.network.size();
    r["edges"] = g.data.network.edge_count();
    r["banks"] = g.data.banks.size();
    r["emitters"] = g.report.emitters;
    r["core_size"] = g.report.core_size;
    r["out_strength_tail_ks"] = g.report.out_strength_ks;
    r["emission_tail_ks"] = g.report.emission_ks;
    std::cout << r.dump(2) << '\n';
    return 0;
}

int cmd_emissions(const EmissionArgs& a) {
    const auto paths = DatasetPaths::in_directory(a.data);
    auto loaded = load_network(paths.firms, paths.edges);
    const auto fuel = FuelSectorConfig::load(paths.fuel);
    const auto est = estimate_emissions(loaded.network, fuel);
    const std::filesystem::path out = a.out.empty() ? default_output_dir() / "emissions.csv" : std::filesystem::path(a.out);
    if (out.has_parent_path())
        std::filesystem::create_directories(out.parent_path());
    write_emissions_csv(out, est.emissions);
    nlohmann::ordered_json r;
    r["total_emissions_t"] = est.emissions.total();
    r["gas_covered_share"] = est.gas_covered_share;
    r["oil_covered_share"] = est.oil_covered_share;
    r["excluded_emissions_t"] = est.excluded_emissions;
    r["output"] = out.string();
    std::cout << r.dump(2) << '\n';
    return 0;
}

int cmd_sweep(const SweepArgs& a, const std::vector<std::string>& argv) {
    RunConfig cfg;
    nlohmann::ordered_json provenance;
    if (!a.config.empty()) {
        cfg = RunConfig::load(a.config);
        provenance["config_file"] = a.config;
        provenance["config_text"] = read_file(a.config);
    }
    if (!a.data.empty()) {
        cfg.data_dir = a.data;
        cfg.generator.reset();
    }
    if (a.prices) cfg.prices = parse_list(*a.prices);
    if (!a.pass_through.empty()) cfg.pass_through = parse_toggle(a.pass_through);
    if (!a.fn.empty()) cfg.fn = parse_function_choice(a.fn);
    if (a.lgd) cfg.lgd = *a.lgd;
    if (a.epsilon) cfg.epsilon = *a.epsilon;
    if (a.coverage) cfg.coverage = *a.coverage;
    if (a.threshold) cfg.edge_threshold = *a.threshold;
    if (a.threads) cfg.threads = *a.threads;
    if (a.no_demand) cfg.demand_channel = false;
    if (a.dump_costs) cfg.dump_costs = true;
    if (!a.out.empty()) cfg.output_dir = a.out;
    if (cfg.output_dir.empty()) cfg.output_dir = default_output_dir();
    provenance["command_line"] = argv;
    provenance["effective"] = cfg.to_json();

    const auto outcome = run_sweep(cfg, provenance);
    for (const auto& r : outcome.results)
        if (!r.ok)
            std::cerr << "cell " << r.cell.label() << " failed: " << r.error << '\n';
    for (const auto& v : outcome.violations)
        std::cerr << "dominance violated: " << v << '\n';
    std::cout << outcome.results.size() - outcome.failed_cells << " of " << outcome.results.size()
              << " cells written to " << cfg.output_dir.string() << '\n';
    return outcome.exit_code();
}

int cmd_esri(const EsriArgs& a) {
    const auto data = load_dataset(std::filesystem::path(a.data));
    ContagionOptions opts;
    opts.epsilon = a.epsilon;
    const SupplyNetwork net = a.threshold > 0 ? threshold_network(data.network, a.threshold).network : data.network;
    const auto params = calibrate(net, data.criticality, parse_production_function(a.fn));
    const auto ids = parse_ids(a.firms);
    const auto e = esri(net, params, opts, ids);
    std::vector<double> f;
    if (!a.no_fsri)
        f = fsri(net, params, data.book, data.banks, opts, ids);
    const std::filesystem::path out = a.out.empty() ? default_output_dir() / "esri.csv" : std::filesystem::path(a.out);
    if (out.has_parent_path())
        std::filesystem::create_directories(out.parent_path());
    std::ofstream o(out, std::ios::binary);
    if (!o)
        throw Error("cannot write " + out.string());
    o << "firm_id,esri,fsri\n";
    for (std::size_t k = 0; k < e.size(); ++k)
        o << (ids.empty() ? static_cast<FirmId>(k) : ids[k]) << ',' << format_double(e[k]) << ','
          << (f.empty() ? "" : format_double(f[k])) << '\n';
    std::cout << e.size() << " firms written to " << out.string() << '\n';
    return 0;
}

int cmd_toy(const ToyArgs& a) {
    auto fx = toy_fixture();
    if (a.no_edges)
        fx.data.network = SupplyNetwork::from_edges(
            std::vector<SectorCode>(fx.data.network.sectors().begin(), fx.data.network.sectors().end()), {});
    EngineSettings s;
    s.pass_through_needed = a.pass_through;
    const StressTest engine(fx.data, s);
    const auto r = engine.run({a.price, a.pass_through, parse_production_function(a.fn)});
    const char* names = "abcde";
    std::cout << "price " << format_double(a.price) << ", " << to_string(r.cell.fn)
              << (a.no_edges ? ", no supply links" : "") << '\n';
    const auto chi = direct_defaults_at_price(fx.data.book, engine.unit_costs(a.pass_through), a.price);
    std::cout << "direct defaults:";
    for (FirmId i = 0; i < 5; ++i)
        if (chi[i])
            std::cout << ' ' << names[i];
    std::cout << "\noutput loss: direct " << format_double(r.direct_output_loss) << ", total "
              << format_double(r.total_output_loss) << '\n';
    for (BankId k = 0; k < r.losses.banks.size(); ++k)
        std::cout << "bank " << k + 1 << " loss " << format_double(r.losses.banks[k].total) << '\n';
    std::cout << "system loss " << format_double(r.losses.system_total) << '\n';
    if (!a.out.empty()) {
        save_dataset(fx.data, std::filesystem::path(a.out) / "data");
        report_curves({r}, a.out, {{"fixture", "toy"}});
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Carbon price stress tests on firm-level supply networks"};
    app.require_subcommand(1);
    const std::vector<std::string> args(argv, argv + argc);

    GenerateArgs ga;
    auto* gen = app.add_subcommand("generate", "Write a synthetic dataset");
    gen->add_option("--out", ga.out, "Output directory")->required();
    gen->add_option("--config", ga.config, "Generator settings (JSON)");
    gen->add_option("--firms", ga.gen.n_firms, "Number of firms");
    gen->add_option("--banks", ga.gen.n_banks, "Number of banks");
    gen->add_option("--seed", ga.gen.seed, "Random seed");
    gen->add_option("--tail", ga.gen.emission_tail_exponent, "Tail exponent of sizes and emissions");
    gen->add_option("--fuel-fraction", ga.gen.fuel_seller_fraction, "Share of firms distributing fuel");
    gen->add_option("--loan-coverage", ga.gen.loan_coverage, "Share of firms with bank loans");
    gen->add_option("--essentiality", ga.gen.essentiality_rate, "Share of sector pairs marked essential");
    gen->add_option("--mean-degree", ga.gen.mean_degree, "Mean number of customers per firm");

    EmissionArgs ea;
    auto* em = app.add_subcommand("estimate-emissions", "Estimate firm emissions from fuel purchases");
    em->add_option("--data", ea.data, "Data directory (firms.csv, edges.csv, fuel.json)")->required();
    em->add_option("--out", ea.out, "Output CSV");

    SweepArgs sa;
    auto* sw = app.add_subcommand("sweep", "Run a carbon price sweep");
    sw->add_option("--config", sa.config, "Run settings (JSON)");
    sw->add_option("--data", sa.data, "Data directory");
    sw->add_option("--prices", sa.prices, "Comma separated prices, ascending");
    sw->add_option("--pass-through", sa.pass_through, "on, off or both");
    sw->add_option("--fn", sa.fn, "GL, Linear or both");
    sw->add_option("--lgd", sa.lgd, "Loss given default");
    sw->add_option("--epsilon", sa.epsilon, "Contagion convergence threshold");
    sw->add_option("--coverage", sa.coverage, "Pass-through stopping coverage");
    sw->add_option("--threshold", sa.threshold, "Drop edges below this value");
    sw->add_option("--threads", sa.threads, "Worker threads (0 = all cores)");
    sw->add_flag("--no-demand", sa.no_demand, "Disable the demand channel");
    sw->add_flag("--dump-costs", sa.dump_costs, "Write retained costs per cell");
    sw->add_option("--out", sa.out, "Output directory");

    EsriArgs xa;
    auto* es = app.add_subcommand("esri", "Systemic risk index of every firm");
    es->add_option("--data", xa.data, "Data directory")->required();
    es->add_option("--fn", xa.fn, "GL or Linear");
    es->add_option("--firms", xa.firms, "Comma separated firm ids (default all)");
    es->add_option("--epsilon", xa.epsilon, "Contagion convergence threshold");
    es->add_option("--threshold", xa.threshold, "Drop edges below this value");
    es->add_flag("--no-fsri", xa.no_fsri, "Skip the financial index");
    es->add_option("--out", xa.out, "Output CSV");

    ToyArgs ta;
    auto* toy = app.add_subcommand("toy", "Run the five-firm example end to end");
    toy->add_option("--price", ta.price, "Carbon price");
    toy->add_option("--fn", ta.fn, "GL or Linear");
    toy->add_flag("--no-edges", ta.no_edges, "Remove all supply links");
    toy->add_flag("--pass-through", ta.pass_through, "Enable cost pass-through");
    toy->add_option("--out", ta.out, "Write reports to this directory");

    CLI11_PARSE(app, argc, argv);
    try {
        if (gen->parsed()) return cmd_generate(ga, *gen);
        if (em->parsed()) return cmd_emissions(ea);
        if (sw->parsed()) return cmd_sweep(sa, args);
        if (es->parsed()) return cmd_esri(xa);
        if (toy->parsed()) return cmd_toy(ta);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
