#include "cst/sector.hpp"

#include <cctype>

#include "cst/common.hpp"

namespace cst {

SectorCode::SectorCode(std::string_view code) {
    while (!code.empty() && std::isspace(static_cast<unsigned char>(code.front())))
        code.remove_prefix(1);
    while (!code.empty() && std::isspace(static_cast<unsigned char>(code.back())))
        code.remove_suffix(1);
    if (code.empty()) {
        code_ = key_ = "Z";
        return;
    }
    const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(code.front())));
    if (letter < 'A' || letter > 'Z')
        throw InputError("invalid sector code '" + std::string(code) + "'");
    key_.push_back(letter);
    for (char c : code.substr(1)) {
        if (std::isdigit(static_cast<unsigned char>(c)))
            key_.push_back(c);
        else if (c != '.' && c != ' ')
            throw InputError("invalid sector code '" + std::string(code) + "'");
    }
    if (key_.size() > 5)
        throw InputError("sector code '" + std::string(code) + "' has more than four class digits");
    code_ = std::string(code);
    code_.front() = letter;
}

std::string SectorCode::key_prefix(std::size_t digits) const {
    return key_.substr(0, 1 + digits);
}

bool SectorCode::within(const SectorCode& other) const noexcept {
    return key_.compare(0, other.key_.size(), other.key_) == 0;
}

} // namespace cst
