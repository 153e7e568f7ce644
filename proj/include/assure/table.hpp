#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace assure {

/// One estimate keyed by a sample-size tuple (one entry for balanced designs,
/// two for unbalanced pairs).
struct AssuranceRow {
    std::vector<double> key;
    double assurance = 0.0;
    double mc_se = 0.0;
};

struct AssuranceTable {
    std::vector<std::string> key_names;  // {"n"} or {"n1","n2"}
    std::vector<AssuranceRow> rows;
    std::string method;
    std::uint64_t seed = 0;
    int mc_iter = 0;
    int datasets = 0;
    bool has_mc_se = true;

    /// CSV with headers `n,assurance,mc_se` / `n1,n2,assurance,mc_se`
    /// (closed-form tables drop the mc_se column). 10 significant digits,
    /// LF line endings.
    std::string to_csv(const std::string& value_name = "assurance") const;
    std::string to_json(const std::string& value_name = "assurance") const;
};

/// Generic column table used for the power/assurance curve and CLI output.
struct ColumnTable {
    std::vector<std::string> headers;
    std::vector<std::vector<double>> rows;

    std::string to_csv() const;
    std::string to_json() const;
};

/// Round-trip parse of ColumnTable::to_csv output.
ColumnTable parse_csv_table(const std::string& text);

/// Shortest decimal form with 10 significant digits.
std::string format_value(double v);

}  // namespace assure
