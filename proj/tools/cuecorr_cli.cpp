#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cuecorr/cli_support.hpp"
#include "cuecorr/errors.hpp"
#include "cuecorr/version.hpp"

namespace {

struct FlagValues {
    std::string config_path;
    long long N = 0;
    std::string k_text;
    std::string fn_text;
    int arity = 1;
    long long samples = 10000;
    unsigned long long seed = 1;
    std::string out;
    double rel_tol = 0.0;
    long long max_evals = 10'000'000;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw cuecorr::argument_error("cannot open config file \"" + path + "\"");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream outf(path, std::ios::binary);
    if (!outf) throw cuecorr::argument_error("cannot open output file \"" + path + "\"");
    outf << content;
}

std::string csv_path_for(const std::string& report_path) {
    if (report_path.size() > 5 && report_path.ends_with(".json"))
        return report_path.substr(0, report_path.size() - 5) + ".csv";
    return report_path + ".csv";
}

int emit_error(const char* error_class, const std::string& message) {
    nlohmann::json j{{"error_class", error_class}, {"message", message}};
    std::cerr << j.dump() << "\n";
    return 0;  // caller supplies the exit code
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Smoothed local correlation statistics of CUE eigenangles"};
    app.set_version_flag("--version", cuecorr::kVersion);
    app.require_subcommand(1);

    FlagValues flags;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"cumulant", "Joint cumulant of power traces (exact integer)"},
        {"mean", "Exact finite-N mean of the statistic"},
        {"variance", "Exact finite-N variance of the statistic"},
        {"asymptotic-mean", "Limiting mean functional with per-term breakdown"},
        {"asymptotic-variance", "Limiting variance functional with per-term breakdown"},
        {"clt-experiment", "Monte Carlo sample moments with jackknife errors"},
        {"oracle-moment", "Joint trace moment by direct quadrature (small N)"},
    };

    std::vector<CLI::App*> subs;
    std::vector<CLI::Option*> config_opts;
    std::vector<std::vector<CLI::Option*>> direct_opts;
    for (const auto& [name, desc] : commands) {
        CLI::App* sub = app.add_subcommand(name, desc);
        config_opts.push_back(
            sub->add_option("--config", flags.config_path,
                            "JSON config file; cannot be combined with other options"));
        std::vector<CLI::Option*> direct;
        direct.push_back(sub->add_option("--n-size", flags.N, "matrix size N"));
        direct.push_back(
            sub->add_option("--k", flags.k_text, "comma-separated integer frequencies"));
        direct.push_back(sub->add_option(
            "--fn", flags.fn_text, "test function, e.g. gaussian:sigma=1.0 or triangle:a=0.5"));
        direct.push_back(sub->add_option("--arity", flags.arity, "number of arguments n"));
        direct.push_back(sub->add_option("--samples", flags.samples, "Monte Carlo sample count"));
        direct.push_back(sub->add_option("--seed", flags.seed, "RNG seed"));
        direct.push_back(sub->add_option("--out", flags.out, "report path (JSON)"));
        direct.push_back(
            sub->add_option("--rel-tol", flags.rel_tol, "quadrature relative tolerance"));
        direct.push_back(
            sub->add_option("--max-evals", flags.max_evals, "quadrature evaluation budget"));
        subs.push_back(sub);
        direct_opts.push_back(std::move(direct));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error("argument", e.what());
        return 2;
    }

    try {
        std::size_t chosen = 0;
        while (chosen < subs.size() && !subs[chosen]->parsed()) ++chosen;

        cuecorr::RunConfig cfg;
        if (config_opts[chosen]->count() > 0) {
            for (const CLI::Option* opt : direct_opts[chosen])
                if (opt->count() > 0)
                    throw cuecorr::argument_error(
                        "--config cannot be combined with other options");
            cfg = cuecorr::parse_config_json(read_file(flags.config_path));
            if (cfg.subcommand != commands[chosen].first)
                throw cuecorr::argument_error("config subcommand \"" + cfg.subcommand +
                                              "\" does not match invoked subcommand \"" +
                                              commands[chosen].first + "\"");
        } else {
            cfg.subcommand = commands[chosen].first;
            cfg.N = flags.N;
            if (!flags.k_text.empty()) cfg.k = cuecorr::parse_frequency_list(flags.k_text);
            if (!flags.fn_text.empty()) cfg.fn = cuecorr::parse_function_spec(flags.fn_text);
            cfg.arity = flags.arity;
            cfg.samples = flags.samples;
            cfg.seed = flags.seed;
            cfg.out = flags.out;
            cfg.rel_tol = flags.rel_tol;
            cfg.max_evals = flags.max_evals;
        }

        const auto start = std::chrono::steady_clock::now();
        cuecorr::RunArtifacts art = cuecorr::run_config(cfg);
        const auto elapsed = std::chrono::steady_clock::now() - start;
        art.report["timing_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();

        if (!cfg.out.empty()) {
            write_file(cfg.out, art.report.dump(2) + "\n");
            if (art.csv_text) write_file(csv_path_for(cfg.out), *art.csv_text);
        }
        std::cout << art.stdout_text;
        return 0;
    } catch (const cuecorr::argument_error& e) {
        emit_error("argument", e.what());
        return 2;
    } catch (const cuecorr::unsupported_error& e) {
        emit_error("unsupported", e.what());
        return 2;
    } catch (const cuecorr::capacity_error& e) {
        emit_error("capacity", e.what());
        return 3;
    } catch (const cuecorr::tolerance_error& e) {
        emit_error("tolerance", e.what());
        return 4;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return 1;
    }
}
