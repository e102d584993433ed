#include "cuecorr/cli_support.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>
#include <string>

#include "cuecorr/asymptotics.hpp"
#include "cuecorr/cumulants.hpp"
#include "cuecorr/errors.hpp"
#include "cuecorr/sampler.hpp"
#include "cuecorr/version.hpp"

namespace cuecorr {

namespace {

const std::set<std::string> kSubcommands = {
    "cumulant",        "mean",           "variance",      "asymptotic-mean",
    "asymptotic-variance", "clt-experiment", "oracle-moment"};

// Shortest representation that parses back to the same double.
std::string double_to_string(double v) { return nlohmann::json(v).dump(); }

double parse_double_value(const std::string& where, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw argument_error(where + ": cannot parse number \"" + text + "\"");
    }
    if (used != text.size())
        throw argument_error(where + ": trailing characters in number \"" + text + "\"");
    return v;
}

}  // namespace

FunctionSpec parse_function_spec(const std::string& text) {
    const std::string where = "function spec \"" + text + "\"";
    FunctionSpec spec;

    const std::size_t colon = text.find(':');
    spec.family = text.substr(0, colon == std::string::npos ? text.size() : colon);
    if (spec.family != "gaussian" && spec.family != "triangle")
        throw argument_error(where + ": unknown family \"" + spec.family +
                             "\" (expected gaussian or triangle)");

    if (colon != std::string::npos) {
        std::stringstream rest(text.substr(colon + 1));
        std::string item;
        while (std::getline(rest, item, ',')) {
            const std::size_t eq = item.find('=');
            if (eq == std::string::npos)
                throw argument_error(where + ": expected key=value, got \"" + item + "\"");
            const std::string key = item.substr(0, eq);
            const double value = parse_double_value(where, item.substr(eq + 1));
            if (key == "tail_epsilon") {
                spec.tail_epsilon = value;
            } else if (key == "sigma" && spec.family == "gaussian") {
                spec.sigma = value;
            } else if (key == "a" && spec.family == "triangle") {
                spec.a = value;
            } else {
                throw argument_error(where + ": unknown parameter \"" + key + "\" for family " +
                                     spec.family);
            }
        }
    }

    if (spec.family == "gaussian" && !(spec.sigma > 0.0))
        throw argument_error(where + ": sigma must be positive");
    if (spec.family == "triangle" && !(spec.a > 0.0))
        throw argument_error(where + ": a must be positive");
    if (!(spec.tail_epsilon > 0.0) || !(spec.tail_epsilon < 1.0))
        throw argument_error(where + ": tail_epsilon must be in (0, 1)");
    return spec;
}

std::string function_spec_to_string(const FunctionSpec& spec) {
    if (spec.family.empty()) return "";
    std::string out = spec.family + ":";
    if (spec.family == "gaussian")
        out += "sigma=" + double_to_string(spec.sigma);
    else
        out += "a=" + double_to_string(spec.a);
    out += ",tail_epsilon=" + double_to_string(spec.tail_epsilon);
    return out;
}

TestFunction make_test_function(const FunctionSpec& spec, int arity) {
    if (spec.family.empty())
        throw argument_error("a test function is required (--fn or config \"fn\")");
    if (spec.family == "gaussian")
        return make_gaussian_test_function(arity, spec.sigma, spec.tail_epsilon);
    return make_triangle_test_function(arity, spec.a, spec.tail_epsilon);
}

std::vector<long long> parse_frequency_list(const std::string& text) {
    std::string cleaned;
    cleaned.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        if (text.compare(i, 3, "−") == 0) {  // typographic minus
            cleaned.push_back('-');
            i += 3;
        } else if (text[i] == ' ') {
            ++i;
        } else {
            cleaned.push_back(text[i]);
            ++i;
        }
    }

    std::vector<long long> out;
    std::stringstream ss(cleaned);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            throw argument_error("frequency list \"" + text + "\": empty entry");
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(item, &used);
        } catch (const std::exception&) {
            throw argument_error("frequency list \"" + text + "\": cannot parse \"" + item +
                                 "\"");
        }
        if (used != item.size())
            throw argument_error("frequency list \"" + text + "\": trailing characters in \"" +
                                 item + "\"");
        out.push_back(v);
    }
    if (out.empty()) throw argument_error("frequency list \"" + text + "\" is empty");
    return out;
}

RunConfig parse_config_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw argument_error(std::string("config: malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw argument_error("config: top level must be an object");

    auto field = [](const std::string& name) { return "config: field \"" + name + "\""; };
    auto want_integer = [&](const std::string& name, const nlohmann::json& v, long long lo,
                            long long hi) {
        if (!v.is_number_integer() && !v.is_number_unsigned())
            throw argument_error(field(name) + ": expected an integer");
        const long long x = v.get<long long>();
        if (x < lo || x > hi)
            throw argument_error(field(name) + ": value " + std::to_string(x) +
                                 " out of range [" + std::to_string(lo) + ", " +
                                 std::to_string(hi) + "]");
        return x;
    };

    RunConfig cfg;
    bool has_subcommand = false;

    for (const auto& [key, value] : doc.items()) {
        if (key == "subcommand") {
            if (!value.is_string())
                throw argument_error(field(key) + ": expected a string");
            cfg.subcommand = value.get<std::string>();
            if (!kSubcommands.count(cfg.subcommand))
                throw argument_error(field(key) + ": unknown subcommand \"" + cfg.subcommand +
                                     "\"");
            has_subcommand = true;
        } else if (key == "N") {
            cfg.N = want_integer(key, value, 1, 1'000'000'000);
        } else if (key == "k") {
            if (!value.is_array()) throw argument_error(field(key) + ": expected an array");
            for (const auto& e : value) {
                if (!e.is_number_integer() && !e.is_number_unsigned())
                    throw argument_error(field(key) + ": entries must be integers");
                cfg.k.push_back(e.get<long long>());
            }
        } else if (key == "fn") {
            if (!value.is_string()) throw argument_error(field(key) + ": expected a string");
            cfg.fn = parse_function_spec(value.get<std::string>());
        } else if (key == "arity") {
            cfg.arity = static_cast<int>(want_integer(key, value, 1, 8));
        } else if (key == "samples") {
            cfg.samples = want_integer(key, value, 1, 1'000'000'000);
        } else if (key == "seed") {
            if (value.is_number_unsigned()) {
                cfg.seed = value.get<unsigned long long>();
            } else if (value.is_number_integer() && value.get<long long>() >= 0) {
                cfg.seed = static_cast<unsigned long long>(value.get<long long>());
            } else {
                throw argument_error(field(key) + ": expected a non-negative integer");
            }
        } else if (key == "out") {
            if (!value.is_string()) throw argument_error(field(key) + ": expected a string");
            cfg.out = value.get<std::string>();
        } else if (key == "rel_tol") {
            if (!value.is_number()) throw argument_error(field(key) + ": expected a number");
            cfg.rel_tol = value.get<double>();
            if (cfg.rel_tol < 0.0 || cfg.rel_tol >= 1.0)
                throw argument_error(field(key) + ": must lie in [0, 1)");
        } else if (key == "max_evals") {
            cfg.max_evals = want_integer(key, value, 1, 1'000'000'000'000LL);
        } else {
            throw argument_error("config: unknown key \"" + key + "\"");
        }
    }

    if (!has_subcommand) throw argument_error("config: missing required key \"subcommand\"");
    return cfg;
}

nlohmann::json config_to_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["subcommand"] = cfg.subcommand;
    if (cfg.N > 0) j["N"] = cfg.N;
    if (!cfg.k.empty()) j["k"] = cfg.k;
    if (!cfg.fn.family.empty()) j["fn"] = function_spec_to_string(cfg.fn);
    j["arity"] = cfg.arity;
    j["samples"] = cfg.samples;
    j["seed"] = cfg.seed;
    if (!cfg.out.empty()) j["out"] = cfg.out;
    j["rel_tol"] = cfg.rel_tol;
    j["max_evals"] = cfg.max_evals;
    return j;
}

namespace {

void require_N(const RunConfig& cfg) {
    if (cfg.N < 1)
        throw argument_error(cfg.subcommand + ": N is required (--n-size or config \"N\")");
}

void require_k(const RunConfig& cfg) {
    if (cfg.k.empty())
        throw argument_error(cfg.subcommand + ": frequencies are required (--k or config \"k\")");
}

nlohmann::json partition_to_json(const SetPartition& pi) {
    nlohmann::json blocks = nlohmann::json::array();
    for (const auto& b : pi.blocks) blocks.push_back(b);
    return blocks;
}

}  // namespace

RunArtifacts run_config(const RunConfig& cfg) {
    RunArtifacts art;
    art.report["format_version"] = kReportFormatVersion;
    art.report["tool_version"] = kVersion;
    art.report["config"] = config_to_json(cfg);

    QuadratureOptions qopts;
    qopts.rel_tol = cfg.rel_tol;
    qopts.max_evals = cfg.max_evals;

    nlohmann::json result;

    if (cfg.subcommand == "cumulant") {
        require_N(cfg);
        require_k(cfg);
        const long long v = kappa_exact(cfg.N, cfg.k);
        result["kappa"] = v;
        art.stdout_text = std::to_string(v) + "\n";
    } else if (cfg.subcommand == "oracle-moment") {
        require_N(cfg);
        require_k(cfg);
        const double v = brute_force_joint_moment(cfg.N, cfg.k);
        result["moment"] = v;
        art.stdout_text = double_to_string(v) + "\n";
    } else if (cfg.subcommand == "mean") {
        require_N(cfg);
        const TestFunction f = make_test_function(cfg.fn, cfg.arity);
        const double v = mean_exact(cfg.N, f);
        result["value"] = v;
        art.stdout_text = double_to_string(v) + "\n";
    } else if (cfg.subcommand == "variance") {
        require_N(cfg);
        const TestFunction f = make_test_function(cfg.fn, cfg.arity);
        const double v = variance_exact(cfg.N, f);
        result["value"] = v;
        art.stdout_text = double_to_string(v) + "\n";
    } else if (cfg.subcommand == "asymptotic-mean") {
        const TestFunction f = make_test_function(cfg.fn, cfg.arity);
        const auto terms = mean_asymptotic_terms(f, qopts);
        double total = 0.0;
        nlohmann::json breakdown = nlohmann::json::array();
        for (const auto& [comp, value] : terms) {
            total += value;
            breakdown.push_back({{"composition", comp}, {"value", value}});
        }
        result["value"] = total;
        result["terms"] = std::move(breakdown);
        art.stdout_text = double_to_string(total) + "\n";
    } else if (cfg.subcommand == "asymptotic-variance") {
        const TestFunction f = make_test_function(cfg.fn, cfg.arity);
        const auto terms = variance_asymptotic_terms(f, qopts);
        double total = 0.0;
        nlohmann::json breakdown = nlohmann::json::array();
        for (const auto& [pi, value] : terms) {
            total += value;
            breakdown.push_back({{"partition", partition_to_json(pi)}, {"value", value}});
        }
        result["value"] = total;
        result["terms"] = std::move(breakdown);
        art.stdout_text = double_to_string(total) + "\n";
    } else if (cfg.subcommand == "clt-experiment") {
        require_N(cfg);
        if (cfg.out.empty())
            throw argument_error("clt-experiment: an output path is required (--out)");

        ExperimentConfig ec;
        ec.N = cfg.N;
        ec.f = make_test_function(cfg.fn, cfg.arity);
        ec.num_samples = cfg.samples;
        ec.seed = cfg.seed;

        std::vector<double> per_sample;
        const MomentReport mr = monte_carlo_clt_experiment(ec, &per_sample);

        result["sample_moments"] = {
            {"mean", mr.mean},           {"se_mean", mr.se_mean},
            {"variance", mr.variance},   {"se_variance", mr.se_variance},
            {"skewness", mr.skewness},   {"se_skewness", mr.se_skewness},
            {"kurtosis", mr.kurtosis},   {"se_kurtosis", mr.se_kurtosis}};
        result["rejected_samples"] = mr.rejected_samples;

        // Exact finite-N references, when the configuration supports them.
        try {
            if (cfg.arity <= 3) result["reference"]["mean_exact"] = mean_exact(cfg.N, ec.f);
            if (cfg.arity <= 2)
                result["reference"]["variance_exact"] = variance_exact(cfg.N, ec.f);
        } catch (const capacity_error& e) {
            result["reference_unavailable"] = e.what();
        }

        std::string csv = "index,value\n";
        for (std::size_t i = 0; i < per_sample.size(); ++i)
            csv += std::to_string(i) + "," + double_to_string(per_sample[i]) + "\n";
        art.csv_text = std::move(csv);
    } else {
        throw argument_error("unknown subcommand \"" + cfg.subcommand + "\"");
    }

    art.report["result"] = std::move(result);
    if (cfg.subcommand == "clt-experiment") art.stdout_text = art.report.dump(2) + "\n";
    return art;
}

}  // namespace cuecorr
