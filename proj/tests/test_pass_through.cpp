#include <doctest.h>

#include <random>

#include "cst/pass_through.hpp"
#include "cst/synthetic.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace cst;
using testing::make_network;

TEST_CASE("market shares") {
    // 0 and 1 share a class, 2 is alone, 3 sells nothing.
    auto net = make_network(4, {{0, 2, 30}, {1, 2, 70}, {2, 3, 5}}, {"C10.1.1", "C10.1.1", "G46.9.0", "F41.2.0"});
    const auto ms = market_shares(net);
    CHECK(ms.mu[0] == doctest::Approx(0.3));
    CHECK(ms.mu[1] == doctest::Approx(0.7));
    CHECK(ms.mu[2] == 1.0);
    CHECK(ms.mu[3] == 0.0);
}

TEST_CASE("initial costs") {
    EmissionVector e{{100, 0, 2.5}};
    CHECK(initial_costs(e, 45) == std::vector<double>{4500, 0, 112.5});
    CHECK(initial_costs(e, 0) == std::vector<double>{0, 0, 0});
    CHECK_THROWS_AS(initial_costs(e, -1), ConfigError);
}

TEST_CASE("pass-through examples") {
    SUBCASE("no market power keeps costs in place") {
        auto net = make_network(3, {{0, 1, 5}, {1, 2, 5}});
        MarketShares ms{{0, 0, 0}};
        std::vector<double> c0 = {3, 0.1, 7};
        const auto r = pass_through(net, ms, c0);
        CHECK(r.retained == c0);
        CHECK(r.residual == 0.0);
    }
    SUBCASE("single hop") {
        auto net = make_network(2, {{0, 1, 5}});
        MarketShares ms{{1, 0}};
        const auto r = pass_through(net, ms, std::vector<double>{100, 0});
        CHECK(r.retained[0] == 0.0);
        CHECK(r.retained[1] == 100.0);
        CHECK(r.iterations == 1);
    }
    SUBCASE("two hops") {
        // A passes half to B, B passes everything to C.
        auto net = make_network(3, {{0, 1, 5}, {1, 2, 5}});
        MarketShares ms{{0.5, 1, 0}};
        const auto r = pass_through(net, ms, std::vector<double>{100, 0, 0});
        CHECK(r.retained[0] == 50.0);
        CHECK(r.retained[1] == 0.0);
        CHECK(r.retained[2] == 50.0);
        const auto want = oracle::neumann_pass_through(net, ms.mu, {100, 0, 0}, 10);
        for (int i = 0; i < 3; ++i)
            CHECK(r.retained[i] == doctest::Approx(want[i]).epsilon(1e-12));
    }
    SUBCASE("firms without sales keep what they receive") {
        auto net = make_network(2, {{0, 1, 5}});
        MarketShares ms{{1, 1}};
        const auto r = pass_through(net, ms, std::vector<double>{10, 10});
        CHECK(r.retained[1] == 20.0);
    }
    SUBCASE("monopolist cycle fails") {
        auto net = make_network(2, {{0, 1, 5}, {1, 0, 5}});
        MarketShares ms{{1, 1}};
        PassThroughOptions opts;
        opts.max_iterations = 50;
        try {
            pass_through(net, ms, std::vector<double>{10, 0}, opts);
            FAIL("expected non-convergence");
        } catch (const ConvergenceError& e) {
            CHECK(e.residual() == doctest::Approx(10));
        }
    }
    SUBCASE("bad coverage") {
        auto net = make_network(2, {{0, 1, 5}});
        PassThroughOptions opts;
        opts.coverage = 1.0;
        CHECK_THROWS_AS(pass_through(net, MarketShares{{0, 0}}, std::vector<double>{1, 1}, opts), ConfigError);
    }
}

TEST_CASE("pass-through matches the Neumann series on small random networks") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + trial % 5;
        std::vector<Edge> edges;
        for (FirmId a = 0; a < n; ++a)
            for (FirmId b = 0; b < n; ++b)
                if (a != b && u(rng) < 0.5)
                    edges.push_back({a, b, 0.1 + 10 * u(rng)});
        auto net = make_network(n, edges);
        MarketShares ms;
        std::vector<double> c0;
        for (std::size_t i = 0; i < n; ++i) {
            ms.mu.push_back(u(rng) < 0.2 ? 0.0 : 0.9 * u(rng));
            c0.push_back(u(rng) < 0.3 ? 0.0 : 100 * u(rng));
        }
        PassThroughOptions opts;
        opts.coverage = 1.0 - 1e-14;
        PassThroughResult r;
        try {
            r = pass_through(net, ms, c0, opts);
        } catch (const ConvergenceError&) {
            continue;
        }
        const auto full = oracle::neumann_pass_through(net, ms.mu, c0, 5000);
        const auto same_t = oracle::neumann_pass_through(net, ms.mu, c0, r.iterations);
        const double scale = std::max(1.0, r.initial_total);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(r.retained[i] - full[i]) <= 1e-9 * scale);
            CHECK(std::abs(r.retained[i] - same_t[i]) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("pass-through invariants on generated networks") {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        GeneratorConfig cfg;
        cfg.n_firms = 1000;
        cfg.seed = seed;
        const auto g = generate(cfg);
        const auto& net = g.data.network;
        const auto e = estimate_emissions(net, g.data.fuel).emissions;
        const auto c0 = initial_costs(e, 45.0);
        const auto r = pass_through(net, market_shares(net), c0);
        CHECK(r.retained_total >= 0.999999 * r.initial_total);
        CHECK(r.retained_total <= r.initial_total * (1 + 1e-12));
        for (double gmm : r.retained)
            CHECK(gmm >= 0.0);
        for (std::size_t t = 1; t < r.circulating.size(); ++t)
            CHECK(r.circulating[t] <= r.circulating[t - 1]);
    }
}
