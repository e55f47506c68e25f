#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace cst::csv {

// Minimal reader for the engine's unquoted, comma-separated tables.
// The header must match the expected column list exactly; every error
// carries the file name and 1-based line number.
class Reader {
public:
    Reader(const std::filesystem::path& path, const std::vector<std::string>& columns);

    // Advances to the next non-empty data row. Returns false at end of file.
    bool next();

    std::size_t line() const noexcept { return line_no_; }
    std::string_view field(std::size_t col) const;
    double number(std::size_t col) const;
    std::uint64_t index(std::size_t col) const;

    [[noreturn]] void fail(const std::string& msg) const;

private:
    std::filesystem::path path_;
    std::ifstream in_;
    std::string buf_;
    std::vector<std::string_view> fields_;
    std::size_t ncols_;
    std::size_t line_no_ = 0;
};

// Parses a decimal number, rejecting trailing garbage and non-finite values.
bool parse_double(std::string_view s, double& out);

std::vector<std::string_view> split(std::string_view line, char sep = ',');

} // namespace cst::csv
