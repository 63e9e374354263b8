#pragma once

/**
 * @file io.hpp
 * @brief JSON formats for sets, networks, reach results and verdicts.
 *
 * Doubles are written in shortest round-trip form, so reading a written file gives back
 * bit-identical matrices.
 */

#include "hzreach/hybrid_zonotope.hpp"
#include "hzreach/nn.hpp"
#include "hzreach/reach.hpp"
#include "hzreach/verify.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace hzreach::io
{

using Json = nlohmann::json;

Json matrix_to_json(const Matrix& M);
Json vector_to_json(const Vector& v);
/// rows/cols < 0 mean "infer". Throws FormatError on ragged or non-numeric input.
Matrix matrix_from_json(const Json& j, Eigen::Index rows = -1, Eigen::Index cols = -1, const std::string& what = "");
Vector vector_from_json(const Json& j, const std::string& what = "");

/// Keys c, Gc, Gb, Ac, Ab, b; empty blocks are omitted.
Json set_to_json(const HybridZonotope& Z);
/// Absent keys mean zero columns / rows.
HybridZonotope set_from_json(const Json& j);

Json network_to_json(const NeuralNetwork& net);
NeuralNetwork network_from_json(const Json& j);

Json read_json(const std::filesystem::path& path);
/// Writes with a trailing newline; byte output depends only on the value.
void write_json(const std::filesystem::path& path, const Json& j);

HybridZonotope load_set(const std::filesystem::path& path);
void save_set(const std::filesystem::path& path, const HybridZonotope& Z);
NeuralNetwork load_network(const std::filesystem::path& path);
void save_network(const std::filesystem::path& path, const NeuralNetwork& net);

Json complexity_to_json(const Complexity& c);
Json verdict_to_json(const Verdict& v);

} // namespace hzreach::io
