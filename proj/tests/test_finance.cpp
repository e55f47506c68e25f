#include <doctest.h>

#include <random>

#include "cst/finance.hpp"
#include "cst/synthetic.hpp"
#include "helpers.hpp"

using namespace cst;

namespace {

FirmRecord firm(double r, double c, double z, double zeta, double a, double profit = 10) {
    FirmRecord f;
    f.revenue = r;
    f.material_costs = c;
    f.operating_profit = profit;
    f.net_profit = profit;
    f.equity = z;
    f.retained_earnings = zeta;
    f.liquidity = a;
    return f;
}

} // namespace

TEST_CASE("project_books") {
    FirmBook book;
    book.firms = {firm(100, 60, 50, 5, 30), firm(100, 60, 50, 5, 30), firm(100, 60, 50, 5, 30),
                  firm(100, 60, -1, 5, 30)};
    const std::vector<double> h = {1.0, 0.5, 1.0, 0.0};
    const std::vector<double> gamma = {0.0, 0.0, 10.0, 0.0};
    const auto p = project_books(book, h, gamma);
    CHECK(p.profit_reduction[0] == 0.0);
    CHECK(p.equity[0] == 55.0);
    CHECK(p.liquidity[0] == 30.0);
    CHECK(p.profit_reduction[1] == 20.0);
    CHECK(p.equity[1] == 35.0);
    CHECK(p.liquidity[1] == 10.0);
    CHECK(p.equity[2] == 55.0 - 10.0);
    CHECK(p.evaluated == std::vector<std::uint8_t>{1, 1, 1, 0});
}

TEST_CASE("indirect defaults") {
    ProjectedBook p;
    p.profit_reduction = {0, 0, 0, 0, 0};
    p.equity = {1, 0, 5, -1, -3};
    p.liquidity = {1, 4, -2, 3, 1};
    p.evaluated = {1, 1, 1, 1, 0};
    const auto chi = indirect_defaults(p, {0, 0, 0, 1, 0});
    CHECK(chi == DefaultIndicator{0, 1, 1, 0, 0});
}

TEST_CASE("bank losses") {
    SUBCASE("toy style") {
        auto banks = BankRegister::build({10, 10}, {{0, 0, 0.5}, {1, 0, 0.5}, {1, 1, 1}, {2, 1, 1}, {3, 1, 1}, {4, 1, 1}},
                                         5);
        const auto r = bank_losses(banks, {0, 0, 0, 0, 1}, {1, 1, 1, 0, 0});
        CHECK(r.banks[0].total == 0.1);
        CHECK(r.banks[1].total == 0.3);
        CHECK(r.system_total == 0.2);
        CHECK(r.banks[0].direct == 0.0);
        CHECK(r.banks[1].direct == 0.1);
    }
    SUBCASE("no defaults") {
        auto banks = BankRegister::build({3, 4}, {{0, 0, 1}, {1, 1, 2}}, 2);
        const auto r = bank_losses(banks, {0, 0}, {0, 0});
        CHECK(r.system_total == 0.0);
        CHECK(r.banks[0].total == 0.0);
        CHECK(r.banks[1].total == 0.0);
    }
    SUBCASE("loans to one pair are summed") {
        auto banks = BankRegister::build({4}, {{0, 0, 1}, {0, 0, 2}}, 1);
        REQUIRE(banks.loans.size() == 1);
        CHECK(banks.loans[0].principal == 3);
    }
    SUBCASE("invalid registers") {
        CHECK_THROWS_AS(BankRegister::build({0.0}, {}, 1), InputError);
        CHECK_THROWS_AS(BankRegister::build({1.0}, {{3, 0, 1}}, 2), InputError);
        CHECK_THROWS_AS(BankRegister::build({1.0}, {{0, 1, 1}}, 2), InputError);
        CHECK_THROWS_AS(BankRegister::build({1.0}, {{0, 0, -1}}, 2), InputError);
        auto banks = BankRegister::build({1.0}, {}, 1);
        banks.lgd = 1.5;
        CHECK_THROWS_AS(bank_losses(banks, {0}, {0}), ConfigError);
    }
}

TEST_CASE("bank loss invariants on random registers") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 200, m = 1 + trial % 7;
        std::vector<double> equity;
        for (std::size_t k = 0; k < m; ++k)
            equity.push_back(1 + 100 * u(rng));
        std::vector<Loan> loans;
        for (FirmId i = 0; i < n; ++i)
            if (u(rng) < 0.4)
                loans.push_back({i, static_cast<BankId>(rng() % m), 10 * u(rng)});
        auto banks = BankRegister::build(equity, loans, n);
        DefaultIndicator dir(n, 0), ind(n, 0);
        for (FirmId i = 0; i < n; ++i) {
            const double r = u(rng);
            dir[i] = r < 0.1;
            ind[i] = r >= 0.1 && r < 0.3;
        }
        const auto full = bank_losses(banks, dir, ind);
        banks.lgd = 0.5;
        const auto half = bank_losses(banks, dir, ind);

        double total_loans = 0.0;
        std::vector<double> lent(m, 0.0);
        for (const auto& l : banks.loans) {
            total_loans += l.principal;
            lent[l.bank] += l.principal;
        }
        double weighted = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const auto& b = full.banks[k];
            CHECK(b.direct + b.indirect == doctest::Approx(b.total).epsilon(1e-14));
            CHECK(b.total <= lent[k] / equity[k] * (1 + 1e-14));
            CHECK(testing::rel_close(half.banks[k].total, 0.5 * b.total, 1e-12));
            CHECK(testing::rel_close(half.banks[k].direct, 0.5 * b.direct, 1e-12));
            weighted += equity[k] * b.total;
        }
        CHECK(full.system_total == doctest::Approx(weighted / banks.total_equity()).epsilon(1e-14));
        CHECK(full.system_total <= total_loans / banks.total_equity() * (1 + 1e-14));
        CHECK(testing::rel_close(half.system_total, 0.5 * full.system_total, 1e-12));
    }
}

TEST_CASE("loss attribution by sector and CPR bucket") {
    const auto toy = toy_fixture();
    const auto& d = toy.data;
    LossAttribution attr{&d.network, &d.book, &*d.emissions};
    const auto r = bank_losses(d.banks, {0, 0, 0, 0, 1}, {1, 1, 1, 0, 0}, attr);
    double sector_sum = 0.0, bucket_sum = 0.0;
    for (const auto& [k, v] : r.by_sector)
        sector_sum += v.direct + v.indirect;
    for (const auto& [k, v] : r.by_cpr_bucket)
        bucket_sum += v.direct + v.indirect;
    CHECK(sector_sum == doctest::Approx(r.system_total));
    CHECK(bucket_sum == doctest::Approx(r.system_total));
    // e has profit 10 for one tonne.
    CHECK(r.by_cpr_bucket.at("breakeven<=10").direct == doctest::Approx(0.05));
    CHECK(r.by_cpr_bucket.at("non_emitter").indirect == doctest::Approx(0.15));
    const auto j = to_json(r);
    CHECK(j["system"]["total"].get<double>() == r.system_total);
    CHECK(j["banks"].size() == 2);
}

TEST_CASE("bank files round trip") {
    testing::TempDir dir("banks");
    auto banks = BankRegister::build({1.5, 2e9}, {{0, 1, 3.25}, {2, 0, 1e-3}}, 3);
    banks.save(dir / "banks.csv", dir / "loans.csv");
    const auto back = BankRegister::load(dir / "banks.csv", dir / "loans.csv", 3);
    CHECK(back.equity == banks.equity);
    REQUIRE(back.loans.size() == 2);
    CHECK(back.loans[0].principal == 3.25);
    CHECK(back.loans[1].principal == 1e-3);
    CHECK_THROWS_AS(BankRegister::load(dir / "banks.csv", dir / "loans.csv", 2), InputError);
}
