#pragma once

/**
 * @file scenario.hpp
 * @brief Scenario files and the reach / verify / reduce drivers behind the command-line tool.
 */

#include "hzreach/hybrid_zonotope.hpp"
#include "hzreach/nn.hpp"
#include "hzreach/reach.hpp"
#include "hzreach/reduce.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace hzreach
{

struct PolygonOptions
{
    Eigen::Index i = 0;
    Eigen::Index j = 1;
    std::size_t directions = 64;
    std::uint64_t cap = 4096;
};

struct Scenario
{
    LinearSystem system;
    std::filesystem::path network_path;
    NeuralNetwork network;
    HybridZonotope initial_set;
    std::optional<HybridZonotope> unsafe_set;
    std::size_t horizon = 0;
    BoundsMode mode = BoundsMode::Exact;
    std::optional<ReductionPolicy> reduction;
    std::filesystem::path output_dir;
    std::uint64_t seed = 0;
    PolygonOptions polygon;
    Eigen::Index max_binaries = 24;
    /// Initial points simulated and checked against the reach sets (0 disables the check).
    std::size_t check_samples = 0;
};

/// Parses and validates; relative paths resolve against the scenario file's directory.
Scenario load_scenario(const std::filesystem::path& path);

BoundsMode parse_mode(const std::string& s);

struct RunFlags
{
    std::optional<BoundsMode> mode;
    std::optional<std::filesystem::path> out;
    std::optional<std::uint64_t> seed;
    bool dump_milp = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 2;
inline constexpr int kExitUnsafe = 3;
inline constexpr int kExitIndeterminate = 4;

/// Each driver writes its artifacts, logs a summary to `log`, and returns the process exit code.
/// Failures are reported as a JSON object on `err` with exit code 2.
int run_reach(const std::filesystem::path& scenario, const RunFlags& flags, std::ostream& log, std::ostream& err);
int run_verify(const std::filesystem::path& scenario, const RunFlags& flags, std::ostream& log, std::ostream& err);
int run_reduce(const std::filesystem::path& set_file, Eigen::Index n_g, Eigen::Index n_b,
               const std::optional<std::filesystem::path>& out, std::ostream& log, std::ostream& err);

} // namespace hzreach
