// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "cst/contagion.hpp"
#include "cst/direct_shock.hpp"
#include "cst/scenario.hpp"
#include "oracles.hpp"

using namespace cst;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool rel_close(double a, double b, double tol) {
    if (a == b)
        return true;
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            detail << "first failure: " << what << "; ";
        }
    }
};

int failures = 0;

void report(int id, const char* name, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.require(false, std::string("exception: ") + e.what());
    }
    if (!o.pass)
        ++failures;
    std::printf("%s [%2d] %s: %s(%.2fs)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.str().c_str(),
                seconds_since(t0));
    std::fflush(stdout);
}

GeneratedDataset generated(std::size_t n, std::uint64_t seed) {
    GeneratorConfig cfg;
    cfg.n_firms = n;
    cfg.seed = seed;
    return generate(cfg);
}

std::vector<Cell> full_grid(const std::vector<double>& prices) {
    RunConfig cfg;
    cfg.prices = prices;
    return expand_grid(cfg);
}

// Results of one sweep split by mode and function, each in price order.
struct Curves {
    std::vector<const CellResult*> by[2][2];  // [pass_through][fn]
};

Curves split(const std::vector<CellResult>& results) {
    Curves c;
    for (const auto& r : results)
        c.by[r.cell.pass_through][r.cell.fn == ProductionFunction::Linear].push_back(&r);
    return c;
}

// Largest ratio between adjacent total output losses; infinite when a loss
// appears from zero.
double largest_jump(const std::vector<const CellResult*>& curve, double* at = nullptr) {
    double best = 0.0;
    for (std::size_t k = 1; k < curve.size(); ++k) {
        const double a = curve[k - 1]->total_output_loss, b = curve[k]->total_output_loss;
        const double ratio = a > 0.0 ? b / a : (b > 0.0 ? INFINITY : 0.0);
        if (ratio > best) {
            best = ratio;
            if (at)
                *at = curve[k]->cell.price;
        }
    }
    return best;
}

std::vector<CellResult> synthetic_sweeps_storage[3];

} // namespace

int main() {
    const unsigned cores = std::max(1u, std::thread::hardware_concurrency());
    std::printf("acceptance run on %u hardware thread(s)\n", cores);

    report(1, "golden toy", [](Outcome& o) {
        const auto t0 = Clock::now();
        const auto toy = toy_fixture();
        const StressTest engine(toy.data, {});
        const auto r = engine.run({toy.price, false, ProductionFunction::GL});
        const double elapsed = seconds_since(t0);
        o.require(r.ok, "cell failed: " + r.error);
        o.require(r.losses.banks.size() == 2, "two banks");
        o.require(r.losses.banks[0].total == 0.1, "bank 1 loss 0.1");
        o.require(r.losses.banks[1].total == 0.3, "bank 2 loss 0.3");
        o.require(r.losses.system_total == 0.2, "system loss 0.2");
        o.require(elapsed < 1.0, "runtime under 1 s");
        o.detail << "L1=" << format_double(r.losses.banks[0].total) << " L2=" << format_double(r.losses.banks[1].total)
                 << " L=" << format_double(r.losses.system_total) << " in " << elapsed << "s ";
    });

    report(2, "pass-through conservation", [](Outcome& o) {
        double worst_ratio = 1.0, best_ratio = 0.0;
        std::size_t worst_iterations = 0;
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            const auto g = generated(1000, seed);
            const auto& net = g.data.network;
            const auto e = estimate_emissions(net, g.data.fuel).emissions;
            const auto c0 = initial_costs(e, 45.0);
            const auto r = pass_through(net, market_shares(net), c0);
            const double initial = std::accumulate(c0.begin(), c0.end(), 0.0);
            const double kept = std::accumulate(r.retained.begin(), r.retained.end(), 0.0);
            const double ratio = kept / initial;
            worst_ratio = std::min(worst_ratio, ratio);
            best_ratio = std::max(best_ratio, ratio);
            worst_iterations = std::max(worst_iterations, r.iterations);
            o.require(ratio >= 0.999999 && ratio <= 1.0, "ratio in [0.999999, 1] for seed " + std::to_string(seed));
            for (std::size_t t = 1; t < r.circulating.size(); ++t)
                o.require(r.circulating[t] <= r.circulating[t - 1],
                          "circulating cost non-increasing, seed " + std::to_string(seed));
        }
        o.detail << "100 networks, ratio in [" << format_double(worst_ratio) << ", " << format_double(best_ratio)
                 << "], at most " << worst_iterations << " iterations ";
    });

    report(3, "no pass-through equivalence", [](Outcome& o) {
        std::size_t firms = 0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto g = generated(1000, seed);
            const auto& net = g.data.network;
            const auto e = estimate_emissions(net, g.data.fuel).emissions;
            for (double price : {1.0, 45.0, 333.3}) {
                const auto c0 = initial_costs(e, price);
                const MarketShares none{std::vector<double>(net.size(), 0.0)};
                const auto r = pass_through(net, none, c0);
                o.require(r.retained == c0, "gamma == c(0) bit for bit");
                firms += c0.size();
            }
        }
        o.detail << firms << " firm costs compared bitwise ";
    });

    report(4, "contagion oracle", [](Outcome& o) {
        const auto r = oracle::contagion_suite(4, 20, 2024, 1e-12);
        o.require(r.mismatches == 0, r.first_mismatch);
        o.require(r.cases > 0, "suite is not empty");
        o.detail << r.cases << " runs, " << r.mismatches << " mismatches, max |dh| "
                 << format_double(r.max_difference) << " ";
    });

    report(5, "dominance ordering", [](Outcome& o) {
        std::size_t cells = 0;
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const auto g = generated(3000, seed);
            const StressTest engine(g.data, {});
            auto& results = synthetic_sweeps_storage[seed - 1];
            results = run_cells(engine, full_grid(RunConfig::default_prices()), 0);
            for (const auto& r : results)
                o.require(r.ok, r.cell.label() + " failed: " + r.error);
            const auto v = dominance_violations(results);
            o.require(v.empty(), v.empty() ? "" : v.front());
            cells += results.size();
        }
        const auto fx = systemic_core_fixture();
        const StressTest core(fx.data, {});
        const auto results = run_cells(core, full_grid(RunConfig::default_prices()), 0);
        const auto v = dominance_violations(results);
        o.require(v.empty(), v.empty() ? "" : v.front());
        cells += results.size();
        o.detail << cells << " cells on 4 synthetic datasets ";
    });

    report(6, "jump phenomenon", [](Outcome& o) {
        const auto fx = systemic_core_fixture();
        const StressTest engine(fx.data, {});
        const auto results = run_cells(engine, full_grid(RunConfig::default_prices()), 0);
        const auto curves = split(results);
        const auto& gl = curves.by[0][0];
        const auto& lin = curves.by[0][1];
        double gl_at = 0.0, lin_at = 0.0;
        const double gl_jump = largest_jump(gl, &gl_at);
        const double lin_jump = largest_jump(lin, &lin_at);
        o.require(gl_jump >= 10.0, "GL jump of at least 10x");
        o.require(gl_at > fx.core_breakeven && gl_at - 10.0 <= fx.core_breakeven,
                  "GL jump where the core's breakeven is crossed");
        o.require(lin_jump < 10.0, "no such jump under Linear");
        o.detail << "core breakeven " << fx.core_breakeven << ", GL x" << format_double(gl_jump) << " at price "
                 << gl_at << ", Linear largest x" << format_double(lin_jump) << " ";
    });

    report(7, "CPR breakeven exactness", [](Outcome& o) {
        std::size_t checked = 0, defaults = 0;
        const auto prices = RunConfig::default_prices();
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto g = generated(2000, seed);
            const StressTest engine(g.data, {});
            const auto& unit = engine.unit_costs(false);
            const auto& e = engine.emissions();
            const auto& book = g.data.book;
            for (double p : prices) {
                const auto chi = direct_defaults_at_price(book, unit, p);
                for (FirmId i = 0; i < book.size(); ++i) {
                    const auto& f = book[i];
                    if (!(e[i] > 0.0 && f.net_profit > 0.0 && f.default_eligible()))
                        continue;
                    const bool at_or_above = oracle::exact_product_compare(p, e[i], f.net_profit) >= 0;
                    o.require(chi[i] == at_or_above, "firm " + std::to_string(i) + " at price " + format_double(p));
                    ++checked;
                }
                defaults += count(chi);
            }
            // The engine's own cell must agree with the per-firm rule.
            for (double p : {45.0, 500.0}) {
                const auto r = engine.run({p, false, ProductionFunction::GL});
                o.require(r.direct_defaults == count(direct_defaults_at_price(book, unit, p)),
                          "engine default count at " + format_double(p));
            }
        }
        // Profits placed on and next to the breakeven of every grid price.
        FirmBook book;
        std::vector<double> unit;
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int k = 0; k < 3000; ++k) {
            const double e = std::exp(-10.0 + 25.0 * u(rng));
            const double p = prices[rng() % prices.size()];
            double profit = p * e;
            if (k % 3 == 1)
                profit = std::nextafter(profit, INFINITY);
            else if (k % 3 == 2)
                profit = std::nextafter(profit, 0.0);
            FirmRecord f;
            f.revenue = f.material_costs = 1.0;
            f.operating_profit = f.net_profit = profit;
            f.equity = f.liquidity = 1.0;
            book.firms.push_back(f);
            unit.push_back(e);
        }
        for (double p : prices) {
            const auto chi = direct_defaults_at_price(book, unit, p);
            for (std::size_t i = 0; i < unit.size(); ++i) {
                const bool at_or_above = oracle::exact_product_compare(p, unit[i], book[i].net_profit) >= 0;
                o.require(chi[i] == at_or_above, "adversarial firm " + std::to_string(i));
                ++checked;
            }
        }
        o.detail << checked << " firm-price pairs, " << defaults << " generated defaults ";
    });

    report(8, "loss given default linearity", [](Outcome& o) {
        std::size_t compared = 0;
        double worst = 0.0;
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const auto g = generated(2000, seed);
            EngineSettings full, half;
            half.lgd = 0.5;
            const StressTest a(g.data, full), b(g.data, half);
            const auto cells = full_grid({10, 45, 100, 200, 500, 1000});
            const auto ra = run_cells(a, cells, 0);
            const auto rb = run_cells(b, cells, 0);
            for (std::size_t k = 0; k < cells.size(); ++k) {
                auto check = [&](double x, double y) {
                    if (x != 0.0)
                        worst = std::max(worst, std::abs(y - 0.5 * x) / std::abs(0.5 * x));
                    o.require(rel_close(y, 0.5 * x, 1e-12), cells[k].label());
                    ++compared;
                };
                for (std::size_t m = 0; m < ra[k].losses.banks.size(); ++m) {
                    check(ra[k].losses.banks[m].direct, rb[k].losses.banks[m].direct);
                    check(ra[k].losses.banks[m].indirect, rb[k].losses.banks[m].indirect);
                    check(ra[k].losses.banks[m].total, rb[k].losses.banks[m].total);
                }
                check(ra[k].losses.system_total, rb[k].losses.system_total);
            }
        }
        o.detail << compared << " losses, worst relative error " << format_double(worst) << " ";
    });

    report(9, "emission homogeneity", [](Outcome& o) {
        double worst = 0.0;
        std::size_t firms = 0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto g = generated(1000, seed);
            const auto& net = g.data.network;
            auto scaled = net.edges();
            for (auto& e : scaled)
                e.value *= 7.0;
            std::vector<SectorCode> sectors(net.sectors().begin(), net.sectors().end());
            const auto big = SupplyNetwork::from_edges(sectors, scaled);
            const auto e1 = estimate_emissions(net, g.data.fuel).emissions;
            const auto e7 = estimate_emissions(big, g.data.fuel).emissions;
            for (FirmId i = 0; i < net.size(); ++i) {
                if (e1[i] != 0.0)
                    worst = std::max(worst, std::abs(e7[i] - e1[i]) / e1[i]);
                o.require(rel_close(e1[i], e7[i], 1e-12), "firm " + std::to_string(i));
                ++firms;
            }
        }
        o.detail << firms << " firms, worst relative change " << format_double(worst) << " ";
    });

    report(10, "performance", [cores](Outcome& o) {
        GeneratorConfig cfg;
        cfg.n_firms = 100000;
        cfg.mean_degree = 21.0;
        cfg.seed = 1;
        const auto g = generate(cfg);
        const auto& net = g.data.network;
        o.require(net.edge_count() >= 1000000, "at least 10^6 edges");

        // Sweep: 100 prices, GL, pass-through on, all cores.
        const auto t0 = Clock::now();
        RunConfig rc;
        rc.fn = FunctionChoice::GL;
        rc.pass_through = Toggle::On;
        const StressTest engine(g.data, EngineSettings::from(rc));
        const auto results = run_cells(engine, expand_grid(rc), 0);
        const double sweep = seconds_since(t0);
        for (const auto& r : results)
            o.require(r.ok, r.cell.label() + " failed: " + r.error);

        // Single propagation from the largest shock of the sweep.
        const auto& params = engine.params(ProductionFunction::GL);
        const auto chi = direct_defaults_at_price(g.data.book, engine.unit_costs(true), 1000.0);
        std::vector<double> h(net.size(), 1.0);
        for (FirmId i = 0; i < net.size(); ++i)
            if (chi[i])
                h[i] = 0.0;
        const auto t1 = Clock::now();
        ContagionOptions opts;
        opts.epsilon = 1e-6;
        const auto r = propagate(engine.network(), params, h, opts);
        const double single = seconds_since(t1);

        o.require(single < 3.0, "single GL propagation under 3 s");
        o.require(results.size() == 100, "100 cells");
        o.require(sweep < 300.0, "100-point GL sweep under 300 s");
        o.detail << net.size() << " firms, " << net.edge_count() << " edges; propagation " << single << "s ("
                 << r.iterations << " iterations, " << count(chi) << " firms shocked); sweep " << sweep << "s on "
                 << cores << " hardware thread(s) ";
    });

    report(11, "qualitative shapes", [](Outcome& o) {
        std::printf("  Headline percentages of the original study rest on confidential firm-level data and\n"
                    "  are not reproduced or used as targets. Checked instead: criteria 1-9 and the shapes\n"
                    "  below on synthetic data.\n");
        std::size_t curves = 0, amplified = 0, with_direct = 0;
        for (const auto& results : synthetic_sweeps_storage) {
            o.require(!results.empty(), "dominance sweeps ran");
            const auto c = split(results);
            for (int mode = 0; mode < 2; ++mode)
                for (int fn = 0; fn < 2; ++fn) {
                    const auto& curve = c.by[mode][fn];
                    for (std::size_t k = 1; k < curve.size(); ++k)
                        o.require(curve[k]->direct_output_loss >= curve[k - 1]->direct_output_loss,
                                  "direct loss curve monotone at " + curve[k]->cell.label());
                    for (const auto* r : curve)
                        if (r->direct_output_loss > 0.0) {
                            ++with_direct;
                            amplified += r->total_output_loss > r->direct_output_loss;
                        }
                    ++curves;
                }
        }
        o.require(amplified > 0, "amplification above 1 somewhere");
        o.require(amplified * 2 > with_direct, "amplification above 1 in most cells with direct losses");
        const auto fx = systemic_core_fixture();
        const StressTest engine(fx.data, {});
        const auto results = run_cells(engine, full_grid(RunConfig::default_prices()), 0);
        o.require(largest_jump(split(results).by[0][0]) >= 10.0, "GL jump");
        o.detail << curves << " monotone direct curves, amplification > 1 in " << amplified << " of " << with_direct
                 << " cells with direct losses, GL jump present ";
    });

    std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
