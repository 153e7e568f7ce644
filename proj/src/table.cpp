#include "assure/table.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace assure {

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

namespace {
ColumnTable as_columns(const AssuranceTable& t, const std::string& value_name) {
    ColumnTable c;
    c.headers = t.key_names;
    c.headers.push_back(value_name);
    if (t.has_mc_se) c.headers.push_back("mc_se");
    for (const auto& r : t.rows) {
        std::vector<double> row = r.key;
        row.push_back(r.assurance);
        if (t.has_mc_se) row.push_back(r.mc_se);
        c.rows.push_back(std::move(row));
    }
    return c;
}
}  // namespace

std::string AssuranceTable::to_csv(const std::string& value_name) const {
    return as_columns(*this, value_name).to_csv();
}

std::string AssuranceTable::to_json(const std::string& value_name) const {
    nlohmann::json j;
    ColumnTable c = as_columns(*this, value_name);
    j["headers"] = c.headers;
    j["rows"] = c.rows;
    j["metadata"] = {{"method", method},
                     {"seed", seed},
                     {"mc_iter", mc_iter},
                     {"datasets", datasets}};
    return j.dump(2) + "\n";
}

std::string ColumnTable::to_csv() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < headers.size(); ++i) {
        if (i) out << ',';
        out << headers[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format_value(row[i]);
        }
        out << '\n';
    }
    return out.str();
}

std::string ColumnTable::to_json() const {
    nlohmann::json j;
    j["headers"] = headers;
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

ColumnTable parse_csv_table(const std::string& text) {
    ColumnTable t;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = line.find(',', start);
            cells.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (first) {
            t.headers = cells;
            first = false;
            continue;
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& cell : cells) {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
                throw std::runtime_error("parse_csv_table: malformed number '" + cell + "'");
            }
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace assure
