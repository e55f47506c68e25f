#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace cst {

/// NACE-style hierarchical industry code: one section letter followed by up
/// to four class digits, optionally dotted ("G46.7.1", "K", "C19.2.0").
/// Firms with unknown classification carry the sentinel "Z".
class SectorCode {
public:
    SectorCode() : code_("Z"), key_("Z") {}
    explicit SectorCode(std::string_view code);

    static SectorCode unknown() { return SectorCode(); }

    const std::string& str() const noexcept { return code_; }
    char section() const noexcept { return key_.front(); }

    /// Letter plus digits with separators removed, e.g. "G4671".
    const std::string& key() const noexcept { return key_; }

    /// Key truncated to `digits` class digits ("G4671" -> "G46" for 2).
    std::string key_prefix(std::size_t digits) const;

    /// Four-digit class key; the grouping level for market shares.
    std::string class4() const { return key_prefix(4); }

    /// True if this code lies inside `other` in the hierarchy ("G46.7.1"
    /// is within "G46.7", "G" and itself, but not within "G46.1").
    bool within(const SectorCode& other) const noexcept;

    bool operator==(const SectorCode& o) const noexcept { return key_ == o.key_; }
    auto operator<=>(const SectorCode& o) const noexcept { return key_ <=> o.key_; }

private:
    std::string code_;
    std::string key_;
};

} // namespace cst
