#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

namespace infolab::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfigError = 2;

/// Runs every selected verifier at every a; writes identities.csv and
/// identities_summary.txt under the configured output_dir.
int cmd_verify(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);

/// MMSE, BCRLB and N(X|Y) at every a, plus the concavity check when
/// costa_a_grid is given; writes bounds.csv, bounds.meta.json,
/// bounds_summary.txt and costa.csv.
int cmd_bounds(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);

struct Figure1Options {
    std::filesystem::path out_dir = ".";
    std::uint64_t seed = 0;
    std::size_t points = 41;
    std::size_t mc_n = 1'000'000;
};

/// Student-t(3) prior, N(0, 1) noise, SNR from -10 to 30 dB; writes
/// figure1.csv, figure1.plt and figure1.meta.json.
int cmd_figure1(const Figure1Options& opt, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a command.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace infolab::cli
