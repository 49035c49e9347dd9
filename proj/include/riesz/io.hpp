#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "riesz/radial.hpp"
#include "riesz/stability.hpp"
#include "riesz/voxel.hpp"

namespace riesz {

using json = nlohmann::json;

/// {"n": int, "shells": [[a, b], ...]}
json to_json(const RadialSet& set);
RadialSet radial_from_json(const json& j);

/// {"n", "shape", "spacing", "origin", "occupancy"}: occupancy is base64 of the
/// bit-packed cells in flat order, least significant bit first. A "cells"
/// list of occupied index tuples is accepted instead of "occupancy".
json to_json(const VoxelSet& set);
VoxelSet voxel_from_json(const json& j);

/// Same envelope as a voxel set with "values" and "kernel": {"n", "lambda"}.
json to_json(const PotentialField& field);

json to_json(const StabilityReport& report);
json to_json(const std::vector<StabilityReport>& reports);
json to_json(const FamilySweep& sweep);  ///< summary without the points

/// Columns param, alpha, delta, ratio_quadratic, ratio_theorem_main, middle_yg.
void write_sweep_csv(std::ostream& out, const FamilySweep& sweep);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> base64_decode(const std::string& text);

using AnySet = std::variant<RadialSet, VoxelSet>;

/// Dispatches on the presence of "shells". Errors carry Errc::io.
AnySet set_from_json(const json& j);
AnySet read_set(const std::string& path);
void write_json(const std::string& path, const json& j);

}  // namespace riesz
