#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "assure/table.hpp"
#include "assure/types.hpp"

namespace assure {

/// Malformed invocation or configuration: unknown command, missing or unknown
/// key, unparsable value. Mapped to exit code 2 by the CLI.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A validated run: one command plus its typed key-value parameters.
/// Values are kept as raw strings and converted on access; matrix-valued keys
/// accept inline `a,b;c,d` rows or a `@file.csv` reference resolved against
/// the config file's directory.
struct RunConfig {
    std::string command;
    std::map<std::string, std::string> params;
    std::string base_dir = ".";
    McSettings mc;

    bool has(const std::string& key) const { return params.count(key) > 0; }
    std::string get_string(const std::string& key) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    int get_int(const std::string& key) const;
    int get_int_or(const std::string& key, int fallback) const;
    bool get_bool_or(const std::string& key, bool fallback) const;
    std::vector<double> get_double_list(const std::string& key) const;
    std::vector<int> get_int_list(const std::string& key) const;
    Eigen::VectorXd get_vector(const std::string& key) const;
    Eigen::MatrixXd get_matrix(const std::string& key) const;
    Alt get_alt() const;
};

/// Builds a RunConfig from the command name, optional config file, and
/// key=value overrides (overrides win). Rejects unknown commands and keys and
/// reports any missing required key by name.
RunConfig parse_config(const std::string& command, const std::optional<std::string>& config_path,
                       const std::vector<std::string>& overrides);

struct NamedTable {
    std::string name;
    ColumnTable table;
};

struct NamedPlot {
    std::string name;
    std::string svg;
};

struct ReportBundle {
    std::vector<NamedTable> tables;
    std::vector<NamedPlot> plots;
    std::string method;
    std::uint64_t seed = 0;
    int mc_iter = 0;
    int datasets = 0;
    bool stochastic = false;

    const ColumnTable& primary() const { return tables.front().table; }
    std::string to_json() const;
};

/// Executes the configured command. `want_plot` controls whether an SVG is
/// rendered (only possible for multi-row tables).
ReportBundle run(const RunConfig& config, bool want_plot);

}  // namespace assure
