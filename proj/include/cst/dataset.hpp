#pragma once

#include <filesystem>
#include <optional>

#include "cst/emissions.hpp"
#include "cst/finance.hpp"
#include "cst/network.hpp"
#include "cst/production.hpp"

namespace cst {

/// Everything a stress test needs. When `emissions` is set it is used as is;
/// otherwise emissions are estimated from `fuel`.
struct Dataset {
    SupplyNetwork network;
    FirmBook book;
    BankRegister banks;
    FuelSectorConfig fuel;
    CriticalityTable criticality;
    std::optional<EmissionVector> emissions;
};

/// File names inside a data directory.
struct DatasetPaths {
    std::filesystem::path firms, edges, banks, loans, criticality, fuel, emissions;

    static DatasetPaths in_directory(const std::filesystem::path& dir);
};

/// Loads a dataset. The criticality and emissions files are optional: a
/// missing criticality file means no essential inputs, a missing emissions
/// file means emissions are estimated from the fuel config.
Dataset load_dataset(const DatasetPaths& paths);
Dataset load_dataset(const std::filesystem::path& dir);

void save_dataset(const Dataset& data, const std::filesystem::path& dir);

} // namespace cst
