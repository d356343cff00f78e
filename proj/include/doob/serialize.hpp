#pragma once

#include <json.hpp>

#include "doob/cylinder.hpp"
#include "doob/position.hpp"

namespace doob::bits {

using nlohmann::json;

// CylinderFunction <-> {"support": [[row,col],...], "table": ["p/q",...]}
// Table entries are ordered by the support-ordered bit pattern read as a
// binary number, first support position most significant.
json to_json(const CylinderFunction& f);
CylinderFunction cylinder_from_json(const json& j);

json to_json(const PositionSet& s);
PositionSet position_set_from_json(const json& j);

json to_json(Position p);
Position position_from_json(const json& j);

}  // namespace doob::bits
