#include "doob/serialize.hpp"

namespace doob::bits {

json to_json(Position p) { return json::array({p.row, p.col}); }

Position position_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_unsigned() ||
        !j[1].is_number_unsigned())
        throw ParseError("position must be [row, col] with nonnegative integers",
                         j.dump());
    return Position{j[0].get<std::uint32_t>(), j[1].get<std::uint32_t>()};
}

json to_json(const CylinderFunction& f) {
    json support = json::array();
    for (Position p : f.support()) support.push_back(to_json(p));
    json table = json::array();
    for (const Rational& v : f.table()) table.push_back(to_fraction_string(v));
    return json{{"support", support}, {"table", table}};
}

CylinderFunction cylinder_from_json(const json& j) {
    if (!j.is_object() || !j.contains("support") || !j.contains("table"))
        throw ParseError("cylinder function needs {support, table}", j.dump().substr(0, 80));
    std::vector<Position> support;
    for (const auto& e : j.at("support")) support.push_back(position_from_json(e));
    std::vector<Rational> table;
    for (const auto& e : j.at("table")) {
        if (!e.is_string()) throw ParseError("table entries must be \"p/q\" strings");
        table.push_back(parse_fraction(e.get<std::string>()));
    }
    return CylinderFunction::from_table(std::move(support), std::move(table));
}

json to_json(const PositionSet& s) {
    switch (s.kind()) {
        case PositionSet::Kind::RowPrefix:
            return json{{"kind", "row_prefix"}, {"n", s.row_prefix_rows()}};
        case PositionSet::Kind::LexPrefix:
            return json{{"kind", "lex_prefix"}, {"pos", to_json(s.lex_prefix_bound())}};
        case PositionSet::Kind::BelowFunction:
            return json{{"kind", "below_function"},
                        {"thresholds", s.thresholds()},
                        {"complemented", s.complemented()}};
        case PositionSet::Kind::Explicit: {
            json ps = json::array();
            for (Position p : s.members()) ps.push_back(to_json(p));
            return json{{"kind", "explicit"}, {"positions", ps}};
        }
    }
    throw ParseError("unreachable position-set kind");
}

PositionSet position_set_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ParseError("position set needs a \"kind\" tag", j.dump().substr(0, 80));
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "row_prefix") return PositionSet::row_prefix(j.at("n").get<std::uint32_t>());
    if (kind == "lex_prefix") return PositionSet::lex_prefix(position_from_json(j.at("pos")));
    if (kind == "below_function")
        return PositionSet::below_function(
            j.at("thresholds").get<std::vector<std::uint32_t>>(),
            j.value("complemented", false));
    if (kind == "explicit") {
        std::vector<Position> ps;
        for (const auto& e : j.at("positions")) ps.push_back(position_from_json(e));
        return PositionSet::explicit_set(std::move(ps));
    }
    throw ParseError("unknown position-set kind '" + kind + "'");
}

}  // namespace doob::bits
