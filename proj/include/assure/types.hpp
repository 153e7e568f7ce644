#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace assure {

enum class Alt { greater, less, two_sided };

inline Alt alt_from_string(const std::string& s) {
    if (s == "greater") return Alt::greater;
    if (s == "less") return Alt::less;
    if (s == "two.sided" || s == "two_sided") return Alt::two_sided;
    throw std::domain_error("unknown alternative: " + s);
}

inline std::string to_string(Alt alt) {
    switch (alt) {
        case Alt::greater: return "greater";
        case Alt::less: return "less";
        default: return "two.sided";
    }
}

/// Monte Carlo controls. `mc_iter` is the inner per-dataset sample count J;
/// `datasets` is the outer dataset count R used by the unknown-variance
/// routine; `workers` is an execution hint that never changes results.
struct McSettings {
    int mc_iter = 5000;
    int datasets = 1;
    std::uint64_t seed = 0;
    int workers = 1;
};

}  // namespace assure
