#pragma once

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace fightsched {

/// Presenter stage within a Fight. A team with stage A presents first,
/// B second, and so on. D exists only in rooms of size 4.
enum class Stage : int { A = 0, B = 1, C = 2, D = 3 };

inline char stage_char(Stage s) { return static_cast<char>('A' + static_cast<int>(s)); }

inline Stage stage_from_char(char c) {
    if (c < 'A' || c > 'D') throw std::invalid_argument(std::string("invalid stage label '") + c + "'");
    return static_cast<Stage>(c - 'A');
}

enum class FairnessLevel { none, weak, fair, strong };

/// Which guarantees a schedule is asked to satisfy. Exactly one fairness
/// level is active; non-cooperativity and order fairness are independent flags.
struct FairnessCriteria {
    bool non_cooperative = false;
    bool order_fair = false;
    FairnessLevel level = FairnessLevel::none;

    bool operator==(const FairnessCriteria&) const = default;
};

inline std::string fairness_level_name(FairnessLevel level) {
    switch (level) {
        case FairnessLevel::none: return "none";
        case FairnessLevel::weak: return "weakly fair";
        case FairnessLevel::fair: return "fair";
        case FairnessLevel::strong: return "strongly fair";
    }
    return "?";
}

inline std::string criteria_label(const FairnessCriteria& c) {
    std::string label = c.level == FairnessLevel::none ? "Feasible" : fairness_level_name(c.level);
    if (!label.empty()) label[0] = static_cast<char>(std::toupper(label[0]));
    if (c.non_cooperative) label += " non-coop";
    if (c.order_fair) label += " order-fair";
    return label;
}

/// Raised by the instance/schedule/profile parsers on malformed input.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Stable 64-bit mixer used to derive per-instance seeds from a base seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace fightsched
