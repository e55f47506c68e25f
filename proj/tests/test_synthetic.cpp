#include <doctest.h>

#include <cmath>
#include <set>

#include "cst/contagion.hpp"
#include "cst/synthetic.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace cst;

TEST_CASE("detmath agrees with libm") {
    for (double x : {1e-300, 1e-5, 0.3, 0.5, 0.70710678, 1.0, 1.5, 2.0, 10.0, 12345.678, 1e200}) {
        CHECK(detmath::log(x) == doctest::Approx(std::log(x)).epsilon(1e-14));
    }
    for (double x : {-700.0, -20.0, -1.0, -1e-8, 0.0, 0.5, 1.0, 3.7, 100.0, 700.0})
        CHECK(detmath::exp(x) == doctest::Approx(std::exp(x)).epsilon(1e-14));
    CHECK(detmath::pow(2.0, 10.0) == doctest::Approx(1024.0).epsilon(1e-14));
    CHECK_THROWS(detmath::log(0.0));
    CHECK_THROWS(detmath::log(-1.0));
}

TEST_CASE("DetRng ranges") {
    DetRng rng(123);
    for (int k = 0; k < 10000; ++k) {
        const double u = rng.uniform();
        CHECK((u >= 0.0 && u < 1.0));
        CHECK(rng.index(7) < 7);
        CHECK(rng.pareto(3.0, 1.5) >= 3.0);
        const double l = rng.log_uniform(5.0, 500.0);
        CHECK((l >= 5.0 * (1 - 1e-12) && l <= 500.0 * (1 + 1e-12)));
    }
    DetRng a(9), b(9);
    for (int k = 0; k < 100; ++k)
        CHECK(a.bits() == b.bits());
}

TEST_CASE("generator config validation") {
    GeneratorConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    auto bad = cfg;
    bad.n_firms = 1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.n_banks = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad.loan_coverage = 0.0;
    CHECK_NOTHROW(bad.validate());
    bad = cfg;
    bad.essentiality_rate = 1.5;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.fuel_seller_fraction = -0.1;
    CHECK_THROWS_AS(generate(bad), ConfigError);

    auto j = cfg.to_json();
    const auto back = GeneratorConfig::from_json(j);
    CHECK(back.to_json() == j);
    nlohmann::json extra = j;
    extra["n_firm"] = 10;
    CHECK_THROWS_AS(GeneratorConfig::from_json(extra), ConfigError);
}

TEST_CASE("same seed, same files") {
    GeneratorConfig cfg;
    cfg.n_firms = 600;
    cfg.seed = 77;
    testing::TempDir a("gen_a"), b("gen_b");
    save_dataset(generate(cfg).data, a.path());
    save_dataset(generate(cfg).data, b.path());
    std::size_t files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(a.path())) {
        const auto name = entry.path().filename();
        CHECK(testing::read_file(entry.path()) == testing::read_file(b.path() / name));
        ++files;
    }
    CHECK(files >= 6);

    cfg.seed = 78;
    testing::TempDir c("gen_c");
    save_dataset(generate(cfg).data, c.path());
    CHECK(testing::read_file(a / "edges.csv") != testing::read_file(c / "edges.csv"));
}

TEST_CASE("generated instances satisfy the type invariants") {
    for (std::uint64_t seed : {1u, 2u}) {
        GeneratorConfig cfg;
        cfg.n_firms = 1000;
        cfg.seed = seed;
        const auto g = generate(cfg);
        const auto& d = g.data;
        const auto& net = d.network;
        CHECK(net.size() == 1000);
        for (const auto& e : net.edges()) {
            CHECK(e.supplier != e.buyer);
            CHECK(e.value > 0.0);
        }
        CHECK(d.book.size() == net.size());
        for (const auto& f : d.book.firms)
            CHECK(f.operating_profit == doctest::Approx(f.revenue - f.material_costs + f.other_income));
        CHECK_NOTHROW(d.fuel.validate());
        CHECK(d.banks.size() == cfg.n_banks);
        for (double e : d.banks.equity)
            CHECK(e > 0.0);
        std::set<FirmId> borrowers;
        for (const auto& l : d.banks.loans) {
            CHECK(l.principal >= 0.0);
            borrowers.insert(l.firm);
            CHECK(d.book[l.firm].has_loan);
        }
        CHECK(borrowers.size() == doctest::Approx(cfg.loan_coverage * cfg.n_firms).epsilon(0.2));
        CHECK(g.report.core_size >= 3);
        CHECK(g.report.emitters > 0);

        // Reload what was written and compare.
        testing::TempDir dir("inv");
        save_dataset(d, dir.path());
        const auto back = load_dataset(dir.path());
        CHECK(back.network.edge_count() == net.edge_count());
        CHECK(back.banks.loans.size() == d.banks.loans.size());
        const auto e1 = estimate_emissions(net, d.fuel).emissions;
        const auto e2 = estimate_emissions(back.network, back.fuel).emissions;
        CHECK(e1.tonnes == e2.tonnes);
    }
}

TEST_CASE("tail exponent of generated emissions and sales") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        GeneratorConfig cfg;
        cfg.seed = seed;
        const auto g = generate(cfg);
        const auto e = estimate_emissions(g.data.network, g.data.fuel).emissions;
        std::vector<double> emissions, sales;
        for (double x : e.tonnes)
            if (x > 0.0)
                emissions.push_back(x);
        for (double s : g.data.network.out_strengths())
            if (s > 0.0)
                sales.push_back(s);
        INFO("seed " << seed);
        CHECK(std::abs(oracle::hill_estimator(emissions, emissions.size() / 2) - 1.05) <= 0.15);
        CHECK(std::abs(oracle::hill_estimator(sales, sales.size() / 2) - 1.05) <= 0.15);
        CHECK(g.report.emission_ks < 0.15);
        CHECK(g.report.out_strength_ks < 0.15);
    }
}

TEST_CASE("pareto KS distance") {
    DetRng rng(4);
    std::vector<double> sample;
    for (int k = 0; k < 20000; ++k)
        sample.push_back(rng.pareto(2.0, 1.3));
    CHECK(pareto_ks_distance(sample, 2.0, 1.3) < 0.02);
    CHECK(pareto_ks_distance(sample, 2.0, 3.0) > 0.2);
}

TEST_CASE("toy fixture") {
    const auto toy = toy_fixture();
    const auto& d = toy.data;
    CHECK(d.network.size() == 5);
    CHECK(d.banks.size() == 2);
    CHECK(d.banks.lgd == 1.0);
    CHECK(d.banks.equity[0] == d.banks.equity[1]);
    for (FirmId i = 0; i < 5; ++i)
        CHECK(d.book[i].default_eligible());
}

TEST_CASE("systemic core fixture") {
    const auto fx = systemic_core_fixture();
    const auto& net = fx.data.network;
    double cluster = 0.0;
    for (FirmId i = 1; i <= fx.cluster_size; ++i)
        cluster += net.out_strength(i);
    CHECK(cluster / net.total_value() >= 0.4);
    // The core is the only supplier of its class to every cluster firm.
    for (FirmId i = 1; i <= fx.cluster_size; ++i) {
        bool from_core = false;
        for (FirmId s : net.suppliers(i)) {
            if (s == fx.core)
                from_core = true;
            else
                CHECK(net.sector(s).class4() != net.sector(fx.core).class4());
        }
        CHECK(from_core);
        CHECK(fx.data.criticality.essential(net.sector(i), net.sector(fx.core)));
    }
    const auto& book = fx.data.book;
    CHECK(book[fx.core].net_profit / (*fx.data.emissions)[fx.core] == fx.core_breakeven);

    // Killing the core alone shuts the whole cluster under GL.
    const auto gl = calibrate(net, fx.data.criticality, ProductionFunction::GL);
    std::vector<double> h(net.size(), 1.0);
    h[fx.core] = 0.0;
    const auto r = propagate(net, gl, h);
    for (FirmId i = 1; i <= fx.cluster_size; ++i)
        CHECK(r.h[i] == 0.0);
}
