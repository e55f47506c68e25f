#include "cst/csv.hpp"

#include <charconv>
#include <cmath>

#include "cst/common.hpp"

namespace cst {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace csv {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

} // namespace

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

bool parse_double(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    if (s.empty())
        return false;
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

Reader::Reader(const std::filesystem::path& path, const std::vector<std::string>& columns)
    : path_(path), in_(path), ncols_(columns.size()) {
    if (!in_)
        throw InputError("cannot open " + path.string());
    if (!std::getline(in_, buf_))
        throw InputError(path.string() + ": missing header");
    line_no_ = 1;
    auto header = split(trim(buf_));
    bool ok = header.size() == columns.size();
    for (std::size_t i = 0; ok && i < columns.size(); ++i)
        ok = header[i] == columns[i];
    if (!ok) {
        std::string expected;
        for (const auto& c : columns)
            expected += (expected.empty() ? "" : ",") + c;
        fail("header mismatch, expected '" + expected + "'");
    }
}

bool Reader::next() {
    while (std::getline(in_, buf_)) {
        ++line_no_;
        auto t = trim(buf_);
        if (t.empty())
            continue;
        fields_ = split(t);
        if (fields_.size() != ncols_)
            fail("expected " + std::to_string(ncols_) + " fields, got " + std::to_string(fields_.size()));
        return true;
    }
    return false;
}

std::string_view Reader::field(std::size_t col) const { return fields_.at(col); }

double Reader::number(std::size_t col) const {
    double v = 0;
    if (!parse_double(fields_.at(col), v))
        fail("invalid number '" + std::string(fields_.at(col)) + "' in column " + std::to_string(col + 1));
    return v;
}

std::uint64_t Reader::index(std::size_t col) const {
    auto s = fields_.at(col);
    std::uint64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
        fail("invalid id '" + std::string(s) + "' in column " + std::to_string(col + 1));
    return v;
}

void Reader::fail(const std::string& msg) const {
    throw InputError(path_.string() + ":" + std::to_string(line_no_) + ": " + msg);
}

} // namespace csv
} // namespace cst
