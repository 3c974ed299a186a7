#pragma once

#include "infolab/distributions.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace infolab {

/// Raised for malformed or inconsistent run configurations.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Contents of a run configuration file.
///
/// {
///   "prior": {"kind": "student_t", "nu": 3},
///   "noise": {"kind": "gaussian", "mu": 0, "var": 1},
///   "a_values": [0.5, 1, 2],
///   "identities": "all",
///   "tolerances": {"de_bruijn": 1e-5},
///   "output_dir": "out",
///   "seed": 0,
///   "mc_n": 1000000
/// }
///
/// Law kinds: gaussian (mu, var), exponential, gamma (alpha, beta), student_t
/// (nu), truncated_gaussian (mu, var, lo, hi). The bounds command also reads
/// "mmse_method" ("monte_carlo" or "quadrature") and "costa_a_grid".
struct RunConfig {
    RunConfig(Distribution p, Distribution n) : prior(std::move(p)), noise(std::move(n)) {}

    Distribution prior;
    Distribution noise;
    std::vector<double> a_values;
    std::vector<std::string> identities;
    std::map<std::string, double> tolerances;
    std::filesystem::path output_dir;
    std::uint64_t seed = 0;
    std::size_t mc_n = 1'000'000;
    bool mmse_monte_carlo = true;
    std::vector<double> costa_a_grid;
};

/// Builds a law from {"kind": ..., params...}.
Distribution distribution_from_json(const std::string& json_text);

/// Throws ConfigError; output_dir defaults to the working directory.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace infolab
