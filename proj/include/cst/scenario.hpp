#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cst/contagion.hpp"
#include "cst/dataset.hpp"
#include "cst/synthetic.hpp"

namespace cst {

enum class Toggle { Off, On, Both };
enum class FunctionChoice { GL, Linear, Both };

/// A sweep: where the data comes from, the scenario grid and every tolerance.
struct RunConfig {
    std::optional<std::filesystem::path> data_dir;
    std::optional<GeneratorConfig> generator;
    std::vector<double> prices = default_prices();
    Toggle pass_through = Toggle::Both;
    FunctionChoice fn = FunctionChoice::Both;
    double lgd = 1.0;
    double epsilon = 1e-6;
    std::size_t max_iterations = 10000;
    double coverage = 0.999999;
    double edge_threshold = 0.0;
    bool demand_channel = true;
    /// 0 picks the hardware concurrency.
    std::size_t threads = 0;
    /// Write gamma per cell to cells/<cell>_costs.csv.
    bool dump_costs = false;
    std::filesystem::path output_dir;

    /// 10, 20, ..., 1000.
    static std::vector<double> default_prices();
    void validate() const;
    /// Reads a JSON config. Relative data paths resolve against the file's directory.
    static RunConfig load(const std::filesystem::path& path);
    static RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& base = {});
    nlohmann::ordered_json to_json() const;
};

/// Output directory used when neither the config nor the command line names one.
std::filesystem::path default_output_dir();

Toggle parse_toggle(std::string_view s);
FunctionChoice parse_function_choice(std::string_view s);
std::string to_string(Toggle t);
std::string to_string(FunctionChoice f);

struct Cell {
    double price = 0.0;
    bool pass_through = false;
    ProductionFunction fn = ProductionFunction::GL;

    /// "no_pass_through" or "pass_through".
    std::string mode() const;
    /// e.g. "p45_no_pass_through_GL"
    std::string label() const;
};

/// Cells of the grid ordered by price, then mode (no pass-through first),
/// then production function (GL first).
std::vector<Cell> expand_grid(const RunConfig& cfg);

struct CellResult {
    Cell cell;
    bool ok = false;
    std::string error;

    double direct_output_loss = 0.0;
    double total_output_loss = 0.0;
    double direct_bank_loss = 0.0;
    double total_bank_loss = 0.0;
    std::size_t direct_defaults = 0;
    std::size_t indirect_defaults = 0;
    std::size_t contagion_iterations = 0;
    double carbon_cost_total = 0.0;
    LossReport losses;
    std::vector<double> retained_costs;  ///< filled only when costs are dumped
};

/// Settings shared by every cell of a sweep.
struct EngineSettings {
    double lgd = 1.0;
    ContagionOptions contagion;
    PassThroughOptions pass_through;
    double edge_threshold = 0.0;
    bool keep_costs = false;
    /// Run the pass-through once at construction; off-only sweeps skip it.
    bool pass_through_needed = true;

    static EngineSettings from(const RunConfig& cfg);
};

/// One loaded dataset prepared for many scenario cells: emissions (estimated
/// on the full network), the thresholded network, market shares and both
/// calibrated production functions. Cells are independent and may run
/// concurrently.
class StressTest {
public:
    StressTest(const Dataset& data, EngineSettings settings);

    /// Throws on any module error.
    CellResult run(const Cell& cell) const;

    const EmissionVector& emissions() const noexcept { return emissions_; }
    const SupplyNetwork& network() const noexcept { return net_; }
    double retained_value_fraction() const noexcept { return retained_value_fraction_; }
    const ProductionParams& params(ProductionFunction fn) const {
        return fn == ProductionFunction::GL ? gl_ : linear_;
    }
    /// Carbon costs per firm at a price of 1.
    const std::vector<double>& unit_costs(bool pass_through) const;
    std::size_t pass_through_iterations() const noexcept { return pt_iterations_; }

private:
    const Dataset& data_;
    EngineSettings settings_;
    EmissionVector emissions_;
    SupplyNetwork net_;
    double retained_value_fraction_ = 1.0;
    ProductionParams gl_, linear_;
    BankRegister banks_;
    std::vector<double> unit_direct_, unit_pass_through_;
    std::size_t pt_iterations_ = 0;
    std::string pt_error_;
};

/// Runs every cell on `threads` workers. A failing cell is reported in its
/// result; the other cells still run.
std::vector<CellResult> run_cells(const StressTest& engine, const std::vector<Cell>& cells, std::size_t threads);

/// Rows where Linear losses exceed GL losses or direct losses exceed either,
/// as human-readable messages. Empty when the ordering holds.
std::vector<std::string> dominance_violations(const std::vector<CellResult>& results, double tolerance = 1e-12);

struct SweepOutcome {
    std::vector<CellResult> results;
    std::vector<std::string> violations;
    std::size_t failed_cells = 0;
    int exit_code() const { return failed_cells > 0 || !violations.empty() ? 1 : 0; }
};

/// Loads or generates the data, runs the grid and writes the reports.
SweepOutcome run_sweep(const RunConfig& cfg, const nlohmann::ordered_json& provenance);

/// Writes sweep.csv, direct_sweep.csv, bank_sweep.csv, cells/<label>.json
/// and, when costs were kept, cells/<label>_costs.csv. Failed cells get a
/// JSON file with their error and no CSV rows.
void report_curves(const std::vector<CellResult>& results, const std::filesystem::path& dir,
                   const nlohmann::ordered_json& provenance);

/// Amplification total / direct, empty when direct is 0.
std::string amplification_field(double direct, double total);

} // namespace cst
