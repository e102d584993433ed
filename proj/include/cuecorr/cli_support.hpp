#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cuecorr/statistic.hpp"

#include <json.hpp>

namespace cuecorr {

// Built-in test-function families, as written on a command line or in a
// config file: "gaussian:sigma=1.0" or "triangle:a=0.5,tail_epsilon=1e-12".
// Omitted parameters take the defaults below.
struct FunctionSpec {
    std::string family;  // "gaussian" or "triangle"; empty means unset
    double sigma = 1.0;
    double a = 0.5;
    double tail_epsilon = 1e-12;

    bool operator==(const FunctionSpec&) const = default;
};

FunctionSpec parse_function_spec(const std::string& text);
std::string function_spec_to_string(const FunctionSpec& spec);
TestFunction make_test_function(const FunctionSpec& spec, int arity);

struct RunConfig {
    std::string subcommand;
    long long N = 0;  // 0 means unset
    std::vector<long long> k;
    FunctionSpec fn;
    int arity = 1;
    long long samples = 10000;
    unsigned long long seed = 1;
    std::string out;
    double rel_tol = 0.0;  // 0 means per-operation default
    long long max_evals = 10'000'000;

    bool operator==(const RunConfig&) const = default;
};

// "3,-3" -> {3, -3}; tolerates spaces and the typographic minus sign.
std::vector<long long> parse_frequency_list(const std::string& text);

// Strict JSON ingestion: unknown keys are rejected by name, values are
// type- and range-checked with the offending field named in the message.
RunConfig parse_config_json(const std::string& text);

// Resolved config as JSON; parse_config_json(dump) round-trips to equality.
nlohmann::json config_to_json(const RunConfig& cfg);

struct RunArtifacts {
    std::string stdout_text;              // printed as-is (includes newline)
    nlohmann::json report;                // full report, minus timing
    std::optional<std::string> csv_text;  // per-sample series, when produced
};

// Dispatches a validated config to the library and assembles the report.
// Throws the library's error types; the executable maps them to exit codes.
RunArtifacts run_config(const RunConfig& cfg);

}  // namespace cuecorr
