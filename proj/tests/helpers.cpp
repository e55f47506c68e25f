#include "helpers.hpp"

#include <atomic>
#include <sstream>
#include <unistd.h>

namespace testing {

TempDir::TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("cst_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

cst::SupplyNetwork make_network(std::size_t n, std::vector<cst::Edge> edges, std::vector<std::string> sectors) {
    std::vector<cst::SectorCode> codes;
    for (std::size_t i = 0; i < n; ++i)
        codes.emplace_back(i < sectors.size() ? sectors[i] : "C" + std::to_string(1000 + i));
    return cst::SupplyNetwork::from_edges(std::move(codes), std::move(edges));
}

} // namespace testing
