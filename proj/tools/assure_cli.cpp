#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "assure/config.hpp"
#include "assure/covariance.hpp"
#include "assure/goal.hpp"

namespace {

int write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write '" << path << "'\n";
        return 2;
    }
    out << content;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian assurance and sample-size calculator"};
    app.require_subcommand(1);

    std::optional<std::string> config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> iter;
    std::optional<int> datasets;
    std::optional<int> workers;
    std::string out_csv, out_svg, format = "csv";
    std::vector<std::string> overrides;

    for (const char* name :
         {"power", "assurance-closed", "assurance-sim", "assurance-unbalanced",
          "assurance-unknownvar", "adcock", "betabin", "goal", "curve", "gen-design"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "key = value parameter file");
        sub->add_option("--seed", seed, "master RNG seed");
        sub->add_option("--iter", iter, "Monte Carlo iterations per estimate");
        sub->add_option("--datasets", datasets, "outer dataset count (unknown-variance runs)");
        sub->add_option("--workers", workers, "worker threads (never changes results)");
        sub->add_option("--out-csv", out_csv, "write the result table here instead of stdout");
        sub->add_option("--out-svg", out_svg, "render the result as an SVG plot");
        sub->add_option("--format", format, "stdout format: csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("params", overrides, "key=value overrides on top of --config");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        const std::string command = app.get_subcommands().front()->get_name();
        if (seed) overrides.push_back("seed=" + std::to_string(*seed));
        if (iter) overrides.push_back("mc_iter=" + std::to_string(*iter));
        if (datasets) overrides.push_back("datasets=" + std::to_string(*datasets));
        if (workers) overrides.push_back("workers=" + std::to_string(*workers));

        const assure::RunConfig config = assure::parse_config(command, config_path, overrides);
        const assure::ReportBundle bundle = assure::run(config, !out_svg.empty());

        if (!out_svg.empty() && bundle.plots.empty()) {
            std::cerr << "error: a plot needs a grid of at least two sample sizes\n";
            return 2;
        }
        for (const auto& plot : bundle.plots) {
            std::string path = out_svg;
            if (bundle.plots.size() > 1 && &plot != &bundle.plots.front()) {
                const std::size_t dot = path.rfind('.');
                path = path.substr(0, dot) + "-" + plot.name +
                       (dot == std::string::npos ? "" : path.substr(dot));
            }
            if (const int rc = write_file(path, plot.svg)) return rc;
        }

        const std::string body =
            format == "json" ? bundle.to_json() : bundle.primary().to_csv();
        if (!out_csv.empty()) {
            if (const int rc = write_file(out_csv, body)) return rc;
        } else {
            std::cout << body;
        }
        return 0;
    } catch (const assure::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {  // domain, PSD, estimability, numerical
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
