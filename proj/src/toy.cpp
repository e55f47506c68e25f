#include "cst/synthetic.hpp"

namespace cst {

// Five firms, two banks, no pass-through, price 45 per tonne.
//
//   a -> e -> b -> a      e is the only essential supplier of b and c
//        e -> c -> a      d -> e is d's only sale
//   d -> e
//
// Only d and e emit one tonne each. e (profit 10) defaults directly, d
// (profit 80) does not. Without e, b and c lose their essential input, a
// loses its only customer and d too. Losing (r - c) of profit wipes out the
// small equity cushions of a, b and c; d's cushion is large.
//
// Banks hold equity 10 each so the loss shares come out as correctly
// rounded tenths: bank 1 lends 0.5 each to a and b, bank 2 lends 1 each to
// b, c, d and e. Bank 1 therefore loses 1/10, bank 2 loses 3/10 and the
// equally weighted system 2/10.
ToyFixture toy_fixture() {
    ToyFixture fx;
    auto& data = fx.data;

    std::vector<SectorCode> sectors = {SectorCode("C25.1.1"), SectorCode("F41.2.0"), SectorCode("F43.9.9"),
                                       SectorCode("H49.4.1"), SectorCode("C23.5.1")};
    constexpr FirmId a = ToyFixture::a, b = ToyFixture::b, c = ToyFixture::c, d = ToyFixture::d,
                     e = ToyFixture::e;
    std::vector<Edge> edges = {{a, e, 10.0}, {e, b, 6.0}, {e, c, 4.0}, {b, a, 2.0}, {c, a, 2.0}, {d, e, 5.0}};
    data.network = SupplyNetwork::from_edges(sectors, std::move(edges));

    data.criticality.set(sectors[b], sectors[e], true);
    data.criticality.set(sectors[c], sectors[e], true);

    struct Row {
        double revenue, material, operating, net, equity, retained, liquidity;
    };
    const Row rows[] = {
        {100, 60, 30, 20, 25, 5, 30},     // a
        {80, 50, 25, 15, 10, 5, 40},      // b
        {60, 40, 15, 10, 8, 2, 30},       // c
        {200, 80, 100, 80, 500, 50, 400}, // d
        {150, 100, 20, 10, 50, 5, 20},    // e
    };
    data.book.firms.resize(5);
    for (FirmId i = 0; i < 5; ++i) {
        auto& f = data.book[i];
        f.revenue = rows[i].revenue;
        f.material_costs = rows[i].material;
        f.operating_profit = rows[i].operating;
        f.net_profit = rows[i].net;
        f.equity = rows[i].equity;
        f.retained_earnings = rows[i].retained;
        f.liquidity = rows[i].liquidity;
        f.other_income = f.operating_profit - f.revenue + f.material_costs;
    }

    data.banks = BankRegister::build({10.0, 10.0},
                                     {{a, 0, 0.5}, {b, 0, 0.5}, {b, 1, 1.0}, {c, 1, 1.0}, {d, 1, 1.0}, {e, 1, 1.0}},
                                     5);
    mark_borrowers(data.book, data.banks);

    data.fuel = FuelSectorConfig::standard(0.0, 0.0);
    data.emissions = EmissionVector{{0.0, 0.0, 0.0, 1.0, 1.0}};
    return fx;
}

} // namespace cst
