#include "cst/dataset.hpp"

namespace cst {

DatasetPaths DatasetPaths::in_directory(const std::filesystem::path& dir) {
    return {dir / "firms.csv",       dir / "edges.csv", dir / "banks.csv",    dir / "loans.csv",
            dir / "criticality.csv", dir / "fuel.json", dir / "emissions.csv"};
}

Dataset load_dataset(const DatasetPaths& paths) {
    Dataset d;
    auto loaded = load_network(paths.firms, paths.edges);
    d.network = std::move(loaded.network);
    d.book = std::move(loaded.book);
    d.banks = BankRegister::load(paths.banks, paths.loans, d.network.size());
    mark_borrowers(d.book, d.banks);
    if (!paths.criticality.empty() && std::filesystem::exists(paths.criticality))
        d.criticality = CriticalityTable::load(paths.criticality);
    if (!paths.emissions.empty() && std::filesystem::exists(paths.emissions))
        d.emissions = load_emissions_csv(paths.emissions, d.network.size());
    if (!paths.fuel.empty() && std::filesystem::exists(paths.fuel))
        d.fuel = FuelSectorConfig::load(paths.fuel);
    else if (!d.emissions)
        throw InputError("dataset needs either a fuel config (" + paths.fuel.string() + ") or an emissions file (" +
                         paths.emissions.string() + ")");
    return d;
}

Dataset load_dataset(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw InputError("data directory " + dir.string() + " does not exist");
    return load_dataset(DatasetPaths::in_directory(dir));
}

void save_dataset(const Dataset& data, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto p = DatasetPaths::in_directory(dir);
    write_firms_csv(p.firms, data.network, data.book);
    write_edges_csv(p.edges, data.network);
    data.banks.save(p.banks, p.loans);
    data.criticality.save(p.criticality);
    data.fuel.save(p.fuel);
    if (data.emissions)
        write_emissions_csv(p.emissions, *data.emissions);
    else
        std::filesystem::remove(p.emissions);
}

} // namespace cst
