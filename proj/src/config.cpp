#include "assure/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "assure/closed_form.hpp"
#include "assure/conjugate.hpp"
#include "assure/design.hpp"
#include "assure/goal.hpp"
#include "assure/plot.hpp"
#include "assure/special_criteria.hpp"

namespace assure {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

double parse_double(const std::string& raw, const std::string& key) {
    const std::string s = trim(raw);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw UsageError("key '" + key + "': cannot parse '" + raw + "' as a number");
    }
    return value;
}

/// Keys every command accepts on top of its own list.
const std::set<std::string> kMcKeys = {"mc_iter", "seed", "datasets", "workers"};

struct CommandSchema {
    std::set<std::string> required;
    std::set<std::string> optional;
    bool stochastic = false;
};

const std::map<std::string, CommandSchema>& schemas() {
    static const std::set<std::string> model_req = {"u",         "C",         "Vbeta_d",
                                                   "Vbeta_a_inv", "mu_beta_d", "mu_beta_a",
                                                   "alpha"};
    static const std::map<std::string, CommandSchema> table = {
        {"power", {{"n", "theta_0", "theta_1", "sigsq", "alpha"}, {"alt"}, false}},
        {"assurance-closed",
         {{"n", "theta_0", "theta_1", "sigsq", "alpha", "n_a", "n_d"}, {"alt"}, false}},
        {"curve",
         {{"n", "theta_0", "theta_1", "sigsq", "alpha", "n_a", "n_d"},
          {"alt", "include_sim"},
          true}},
        {"assurance-sim",
         {[] {
              auto req = model_req;
              req.insert("n");
              req.insert("sigsq");
              return req;
          }(),
          {"alt", "Xn", "Vn", "longitudinal", "ids", "from", "to", "poly_degree"},
          true}},
        {"assurance-unbalanced",
         {[] {
              auto req = model_req;
              req.insert("n1");
              req.insert("n2");
              req.insert("sigsq");
              return req;
          }(),
          {"alt", "Vn", "repeats", "surface"},
          true}},
        {"assurance-unknownvar",
         {[] {
              auto req = model_req;
              req.insert("n");
              req.insert("a_sig_a");
              req.insert("b_sig_a");
              req.insert("a_sig_d");
              req.insert("b_sig_d");
              return req;
          }(),
          {"alt", "Xn", "Vn", "sigsq"},
          true}},
        {"adcock",
         {{"n", "d", "mu_beta_a", "mu_beta_d", "n_a", "n_d", "sig_sq", "alpha"}, {}, true}},
        {"betabin",
         {{"n1", "n2", "alpha_1", "beta_1", "alpha_2", "beta_2", "sig_level"},
          {"p1", "p2", "alt"},
          true}},
        {"goal", {{"n", "K", "pi", "u", "beta_0", "beta_1", "sigsq"}, {"Xn"}, false}},
        {"gen-design",
         {{}, {"n", "ids", "from", "to", "num_repeated_measures", "poly_degree"}, false}},
    };
    return table;
}

const CommandSchema& schema_for(const std::string& command) {
    const auto it = schemas().find(command);
    if (it == schemas().end()) {
        std::string known;
        for (const auto& [name, s] : schemas()) {
            if (!known.empty()) known += ", ";
            known += name;
        }
        throw UsageError("unknown command '" + command + "' (expected one of: " + known + ")");
    }
    return it->second;
}

Eigen::MatrixXd square_prior(const Eigen::MatrixXd& raw, int p, const std::string& key) {
    if (raw.rows() == 1 && raw.cols() == 1 && p > 1) {
        return raw(0, 0) * Eigen::MatrixXd::Identity(p, p);
    }
    if (raw.rows() != p || raw.cols() != p) {
        throw UsageError("key '" + key + "': expected a " + std::to_string(p) + "x" +
                         std::to_string(p) + " matrix (or a scalar)");
    }
    return raw;
}

ConjugateModelSpec model_from(const RunConfig& c, bool sigsq_required) {
    ConjugateModelSpec model;
    model.mu_beta_d = c.get_vector("mu_beta_d");
    model.mu_beta_a = c.get_vector("mu_beta_a");
    model.p = static_cast<int>(model.mu_beta_d.size());
    if (model.mu_beta_a.size() != model.p) {
        throw UsageError("key 'mu_beta_a': length must match mu_beta_d");
    }
    model.Vbeta_d = square_prior(c.get_matrix("Vbeta_d"), model.p, "Vbeta_d");
    model.Vbeta_a_inv = square_prior(c.get_matrix("Vbeta_a_inv"), model.p, "Vbeta_a_inv");
    if (c.has("Xn")) model.Xn = c.get_matrix("Xn");
    if (c.has("Vn")) model.Vn = c.get_matrix("Vn");
    model.sigsq = sigsq_required ? c.get_double("sigsq") : c.get_double_or("sigsq", 1.0);
    model.alt = c.get_alt();
    model.alpha = c.get_double("alpha");
    return model;
}

HypothesisSpec hypothesis_from(const RunConfig& c) {
    HypothesisSpec hyp;
    hyp.u = c.get_vector("u");
    hyp.C = c.get_double("C");
    return hyp;
}

ColumnTable flatten(const AssuranceTable& t) {
    ColumnTable out;
    out.headers = t.key_names;
    out.headers.push_back("assurance");
    if (t.has_mc_se) out.headers.push_back("mc_se");
    for (const auto& row : t.rows) {
        std::vector<double> cells = row.key;
        cells.push_back(row.assurance);
        if (t.has_mc_se) cells.push_back(row.mc_se);
        out.rows.push_back(std::move(cells));
    }
    return out;
}

void attach_plot(ReportBundle& bundle, bool want_plot, PlotKind kind,
                 const std::string& name = "plot", std::size_t table_index = 0) {
    const ColumnTable& table = bundle.tables.at(table_index).table;
    if (!want_plot) return;
    if (kind != PlotKind::contour && table.rows.size() < 2) return;  // scalar run: no plot
    bundle.plots.push_back({name, emit_plot(table, kind)});
}

}  // namespace

std::string RunConfig::get_string(const std::string& key) const {
    const auto it = params.find(key);
    if (it == params.end()) {
        throw UsageError("command '" + command + "' is missing required key '" + key + "'");
    }
    return it->second;
}

double RunConfig::get_double(const std::string& key) const {
    return parse_double(get_string(key), key);
}

double RunConfig::get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

int RunConfig::get_int(const std::string& key) const {
    const double v = get_double(key);
    const double rounded = std::round(v);
    if (std::abs(v - rounded) > 1e-9) {
        throw UsageError("key '" + key + "': expected an integer, got '" + get_string(key) + "'");
    }
    return static_cast<int>(rounded);
}

int RunConfig::get_int_or(const std::string& key, int fallback) const {
    return has(key) ? get_int(key) : fallback;
}

bool RunConfig::get_bool_or(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = trim(get_string(key));
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw UsageError("key '" + key + "': expected true or false, got '" + v + "'");
}

std::vector<double> RunConfig::get_double_list(const std::string& key) const {
    const std::string raw = get_string(key);
    std::vector<double> out;
    for (const std::string& item : split(raw, ',')) out.push_back(parse_double(item, key));
    if (out.empty()) throw UsageError("key '" + key + "': empty list");
    return out;
}

std::vector<int> RunConfig::get_int_list(const std::string& key) const {
    std::vector<int> out;
    for (double v : get_double_list(key)) {
        const double rounded = std::round(v);
        if (std::abs(v - rounded) > 1e-9) {
            throw UsageError("key '" + key + "': expected integers");
        }
        out.push_back(static_cast<int>(rounded));
    }
    return out;
}

Eigen::VectorXd RunConfig::get_vector(const std::string& key) const {
    const std::vector<double> values = get_double_list(key);
    return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                             static_cast<Eigen::Index>(values.size()));
}

Eigen::MatrixXd RunConfig::get_matrix(const std::string& key) const {
    std::string raw = trim(get_string(key));
    std::vector<std::vector<double>> rows;
    if (!raw.empty() && raw[0] == '@') {
        const std::string path = base_dir + "/" + raw.substr(1);
        std::ifstream in(path);
        if (!in) throw UsageError("key '" + key + "': cannot open matrix file '" + path + "'");
        std::string line;
        while (std::getline(in, line)) {
            line = trim(line);
            if (line.empty() || line[0] == '#') continue;
            std::vector<double> row;
            for (const std::string& cell : split(line, ',')) row.push_back(parse_double(cell, key));
            rows.push_back(std::move(row));
        }
    } else {
        for (const std::string& row_text : split(raw, ';')) {
            std::vector<double> row;
            for (const std::string& cell : split(row_text, ','))
                row.push_back(parse_double(cell, key));
            rows.push_back(std::move(row));
        }
    }
    if (rows.empty()) throw UsageError("key '" + key + "': empty matrix");
    const std::size_t cols = rows[0].size();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) {
            throw UsageError("key '" + key + "': ragged matrix rows");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return out;
}

Alt RunConfig::get_alt() const {
    if (!has("alt")) return command == "betabin" ? Alt::two_sided : Alt::greater;
    try {
        return alt_from_string(params.at("alt"));
    } catch (const std::domain_error& e) {
        throw UsageError(std::string("key 'alt': ") + e.what());
    }
}

RunConfig parse_config(const std::string& command, const std::optional<std::string>& config_path,
                       const std::vector<std::string>& overrides) {
    const CommandSchema& schema = schema_for(command);
    RunConfig config;
    config.command = command;

    if (config_path) {
        std::ifstream in(*config_path);
        if (!in) throw UsageError("cannot open config file '" + *config_path + "'");
        const std::size_t slash = config_path->find_last_of('/');
        config.base_dir = slash == std::string::npos ? "." : config_path->substr(0, slash);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            line = trim(line);
            if (line.empty() || line[0] == '#') continue;
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos) {
                throw UsageError(*config_path + ":" + std::to_string(line_no) +
                                 ": expected key = value");
            }
            config.params[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
    }
    for (const std::string& item : overrides) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos) {
            throw UsageError("override '" + item + "': expected key=value");
        }
        config.params[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
    }

    for (const auto& [key, value] : config.params) {
        if (!schema.required.count(key) && !schema.optional.count(key) && !kMcKeys.count(key)) {
            throw UsageError("command '" + command + "' does not accept key '" + key + "'");
        }
    }
    for (const std::string& key : schema.required) {
        if (!config.params.count(key)) {
            throw UsageError("command '" + command + "' is missing required key '" + key + "'");
        }
    }

    config.mc.mc_iter = config.get_int_or("mc_iter", 5000);
    config.mc.datasets = config.get_int_or("datasets", 1);
    config.mc.workers = config.get_int_or("workers", 1);
    if (config.has("seed")) {
        const std::string raw = trim(config.params.at("seed"));
        std::uint64_t seed = 0;
        const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), seed);
        if (ec != std::errc() || ptr != raw.data() + raw.size()) {
            throw UsageError("key 'seed': cannot parse '" + raw + "' as an unsigned integer");
        }
        config.mc.seed = seed;
    }
    if (config.mc.mc_iter < 1) throw UsageError("key 'mc_iter': must be at least 1");
    if (config.mc.datasets < 1) throw UsageError("key 'datasets': must be at least 1");
    if (config.mc.workers < 1) throw UsageError("key 'workers': must be at least 1");
    if (command == "assurance-unknownvar" && !config.has("datasets")) {
        throw UsageError(
            "command 'assurance-unknownvar' needs the outer dataset count "
            "(key 'datasets' or --datasets)");
    }
    return config;
}

std::string ReportBundle::to_json() const {
    nlohmann::json doc;
    doc["method"] = method;
    if (stochastic) {
        doc["seed"] = seed;
        doc["mc_iter"] = mc_iter;
        if (datasets > 1) doc["datasets"] = datasets;
    }
    for (const auto& named : tables) {
        doc["tables"][named.name] = nlohmann::json::parse(named.table.to_json());
    }
    return doc.dump(2) + "\n";
}

namespace {

ReportBundle run_power(const RunConfig& c, bool want_plot) {
    TwoPriorSpec spec;
    spec.theta_0 = c.get_double("theta_0");
    spec.theta_1 = c.get_double("theta_1");
    spec.sigsq = c.get_double("sigsq");
    spec.alt = c.get_alt();
    spec.alpha = c.get_double("alpha");
    ReportBundle bundle;
    bundle.method = "power";
    ColumnTable table;
    table.headers = {"n", "power"};
    for (double n : c.get_double_list("n")) {
        if (!(n > 0.0)) throw std::domain_error("power: n must be positive");
        table.rows.push_back({n, frequentist_power(n, spec)});
    }
    bundle.tables.push_back({"power", std::move(table)});
    attach_plot(bundle, want_plot, PlotKind::line);
    return bundle;
}

TwoPriorSpec two_prior_from(const RunConfig& c) {
    TwoPriorSpec spec;
    spec.theta_0 = c.get_double("theta_0");
    spec.theta_1 = c.get_double("theta_1");
    spec.sigsq = c.get_double("sigsq");
    spec.n_a = c.get_double("n_a");
    spec.n_d = c.get_double("n_d");
    spec.alt = c.get_alt();
    spec.alpha = c.get_double("alpha");
    return spec;
}

ReportBundle run_closed(const RunConfig& c, bool want_plot) {
    const TwoPriorSpec spec = two_prior_from(c);
    ReportBundle bundle;
    bundle.method = "closed_form";
    ColumnTable table;
    table.headers = {"n", "assurance"};
    for (double n : c.get_double_list("n")) {
        if (!(n > 0.0)) throw std::domain_error("assurance-closed: n must be positive");
        table.rows.push_back({n, closed_form_assurance(n, spec)});
    }
    bundle.tables.push_back({"assurance", std::move(table)});
    attach_plot(bundle, want_plot, PlotKind::line);
    return bundle;
}

ReportBundle run_curve(const RunConfig& c, bool want_plot) {
    const TwoPriorSpec spec = two_prior_from(c);
    const bool include_sim = c.get_bool_or("include_sim", false);
    ReportBundle bundle;
    bundle.method = "curve";
    bundle.stochastic = include_sim;
    bundle.seed = c.mc.seed;
    bundle.mc_iter = c.mc.mc_iter;
    bundle.tables.push_back(
        {"curve", power_assurance_curve(c.get_double_list("n"), spec, include_sim, c.mc)});
    attach_plot(bundle, want_plot, PlotKind::overlay);
    return bundle;
}

ReportBundle stochastic_bundle(AssuranceTable table, bool want_plot,
                               PlotKind kind = PlotKind::line) {
    ReportBundle bundle;
    bundle.method = table.method;
    bundle.stochastic = true;
    bundle.seed = table.seed;
    bundle.mc_iter = table.mc_iter;
    bundle.datasets = table.datasets;
    bundle.tables.push_back({"assurance", flatten(table)});
    attach_plot(bundle, want_plot, kind);
    return bundle;
}

ReportBundle run_sim(const RunConfig& c, bool want_plot) {
    ConjugateModelSpec model = model_from(c, true);
    const HypothesisSpec hyp = hypothesis_from(c);
    std::optional<LongitudinalSpec> longitudinal;
    if (c.get_bool_or("longitudinal", false)) {
        LongitudinalSpec spec;
        spec.ids = c.get_int_list("ids");
        spec.from = c.get_double("from");
        spec.to = c.get_double("to");
        spec.poly_degree = c.get_int_or("poly_degree", 1);
        longitudinal = std::move(spec);
    }
    return stochastic_bundle(
        simulate_assurance(model, hyp, c.get_int_list("n"), c.mc, longitudinal), want_plot);
}

ReportBundle run_unbalanced(const RunConfig& c, bool want_plot) {
    ConjugateModelSpec model = model_from(c, true);
    const HypothesisSpec hyp = hypothesis_from(c);
    const std::vector<int> n1 = c.get_int_list("n1");
    const std::vector<int> n2 = c.get_int_list("n2");
    const int repeats = c.get_int_or("repeats", 1);
    const bool surface = c.get_bool_or("surface", false);
    UnbalancedResult result =
        simulate_assurance_unbalanced(n1, n2, repeats, model, hyp, c.mc, surface);
    ReportBundle bundle = stochastic_bundle(result.table, false);
    if (result.surface) {
        bundle.tables.push_back({"surface", flatten(*result.surface)});
        attach_plot(bundle, want_plot, PlotKind::contour, "surface", 1);
    } else {
        attach_plot(bundle, want_plot, PlotKind::line);
    }
    return bundle;
}

ReportBundle run_unknown_var(const RunConfig& c, bool want_plot) {
    ConjugateModelSpec model = model_from(c, false);
    const HypothesisSpec hyp = hypothesis_from(c);
    IGPriorPair ig;
    ig.a_sig_a = c.get_double("a_sig_a");
    ig.b_sig_a = c.get_double("b_sig_a");
    ig.a_sig_d = c.get_double("a_sig_d");
    ig.b_sig_d = c.get_double("b_sig_d");
    return stochastic_bundle(
        simulate_assurance_unknown_var(model, hyp, ig, c.get_int_list("n"), c.mc), want_plot);
}

ReportBundle run_adcock(const RunConfig& c, bool want_plot) {
    AdcockSpec spec;
    spec.d = c.get_double("d");
    spec.mu_beta_a = c.get_double("mu_beta_a");
    spec.mu_beta_d = c.get_double("mu_beta_d");
    spec.n_a = c.get_double("n_a");
    spec.n_d = c.get_double("n_d");
    spec.sig_sq = c.get_double("sig_sq");
    spec.alpha = c.get_double("alpha");
    return stochastic_bundle(adcock_assurance(c.get_int_list("n"), spec, c.mc), want_plot);
}

ReportBundle run_betabin(const RunConfig& c, bool want_plot) {
    BetaBinSpec spec;
    if (c.has("p1")) spec.p1 = c.get_double("p1");
    if (c.has("p2")) spec.p2 = c.get_double("p2");
    spec.alpha_1 = c.get_double("alpha_1");
    spec.beta_1 = c.get_double("beta_1");
    spec.alpha_2 = c.get_double("alpha_2");
    spec.beta_2 = c.get_double("beta_2");
    spec.sig_level = c.get_double("sig_level");
    spec.alt = c.get_alt();
    return stochastic_bundle(
        betabin_assurance(c.get_int_list("n1"), c.get_int_list("n2"), spec, c.mc), want_plot);
}

ReportBundle run_goal(const RunConfig& c, bool want_plot) {
    GoalSpec spec;
    spec.K = c.get_double("K");
    spec.pi = c.get_double("pi");
    spec.u = c.get_vector("u");
    spec.beta_0 = c.get_vector("beta_0");
    spec.beta_1 = c.get_vector("beta_1");
    spec.sigsq = c.get_double("sigsq");
    if (c.has("Xn")) spec.Xn = c.get_matrix("Xn");
    ReportBundle bundle;
    bundle.method = "goal";
    bundle.tables.push_back(
        {"rate_correct_classification",
         rate_correct_classification(spec, c.get_double_list("n"))});
    attach_plot(bundle, want_plot, PlotKind::line);
    return bundle;
}

ReportBundle run_gen_design(const RunConfig& c, bool want_plot) {
    if (want_plot) throw UsageError("gen-design does not produce a plot");
    DesignMatrix design;
    if (c.has("ids")) {
        LongitudinalSpec spec;
        spec.ids = c.get_int_list("ids");
        spec.from = c.get_double("from");
        spec.to = c.get_double("to");
        spec.num_repeated_measures = c.get_double("num_repeated_measures");
        spec.poly_degree = c.get_int_or("poly_degree", 1);
        design = gen_design_longitudinal(spec);
    } else if (c.has("n")) {
        design = gen_design(c.get_int_list("n"));
    } else {
        throw UsageError("gen-design needs either group sizes 'n' or longitudinal keys");
    }
    ReportBundle bundle;
    bundle.method = "gen_design";
    ColumnTable table;
    for (Eigen::Index j = 0; j < design.entries.cols(); ++j) {
        table.headers.push_back("x" + std::to_string(j + 1));
    }
    for (Eigen::Index i = 0; i < design.entries.rows(); ++i) {
        std::vector<double> row;
        for (Eigen::Index j = 0; j < design.entries.cols(); ++j) {
            row.push_back(design.entries(i, j));
        }
        table.rows.push_back(std::move(row));
    }
    bundle.tables.push_back({"design", std::move(table)});
    return bundle;
}

}  // namespace

ReportBundle run(const RunConfig& config, bool want_plot) {
    if (config.command == "power") return run_power(config, want_plot);
    if (config.command == "assurance-closed") return run_closed(config, want_plot);
    if (config.command == "curve") return run_curve(config, want_plot);
    if (config.command == "assurance-sim") return run_sim(config, want_plot);
    if (config.command == "assurance-unbalanced") return run_unbalanced(config, want_plot);
    if (config.command == "assurance-unknownvar") return run_unknown_var(config, want_plot);
    if (config.command == "adcock") return run_adcock(config, want_plot);
    if (config.command == "betabin") return run_betabin(config, want_plot);
    if (config.command == "goal") return run_goal(config, want_plot);
    if (config.command == "gen-design") return run_gen_design(config, want_plot);
    throw UsageError("unknown command '" + config.command + "'");
}

}  // namespace assure
