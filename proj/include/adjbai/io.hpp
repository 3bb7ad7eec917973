#pragma once

#include "adjbai/algorithms.hpp"
#include "adjbai/complexity.hpp"
#include "adjbai/core.hpp"
#include "adjbai/design.hpp"
#include "adjbai/geometry.hpp"
#include "adjbai/instances.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace adjbai::io {

using nlohmann::json;

enum class ArmFormat { csv, json, guess };

/// CSV: one arm per row, comma separated, optional header line.
ArmSet parse_arms_csv(const std::string& text);
/// JSON: array of arrays, or an object with an "arms" array of arrays.
ArmSet parse_arms_json(const json& j);
ArmSet load_arms(const std::string& path, ArmFormat format = ArmFormat::guess);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

json to_json(const Vector& v);
Vector vector_from_json(const json& j);
json matrix_to_json(const Matrix& m);
json to_json(const ArmSet& arms);
json to_json(const geometry::AdjacencyStructure& adj);
json to_json(const design::Design& d);
json to_json(const complexity::ComplexityReport& r);

/// counts CSV: "arm,count" lines.
std::string allocation_csv(const design::Allocation& alloc);

json to_json(const instances::NonStationaryInstance& inst);
instances::NonStationaryInstance instance_from_json(const json& j);

json to_json(const instances::HardInstancePair& hp);

json to_json(const algorithms::BaiRun& run, bool correct);

}  // namespace adjbai::io
