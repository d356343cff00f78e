#include "doob/scenario.hpp"

#include <fstream>

#include "doob/errors.hpp"

namespace doob::lab {

ScenarioSource ScenarioSource::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file", path);
    auto matrix = std::make_shared<std::vector<std::vector<bool>>>();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<bool> row;
        row.reserve(line.size());
        for (char c : line) {
            if (c == '0')
                row.push_back(false);
            else if (c == '1')
                row.push_back(true);
            else if (c == '\r')
                continue;
            else
                throw ParseError("scenario rows are '0'/'1' characters",
                                 path + ":" + std::to_string(lineno));
        }
        matrix->push_back(std::move(row));
    }
    if (matrix->empty()) throw ParseError("scenario file has no rows", path);
    ScenarioSource s(Kind::FromFile, 0);
    s.matrix_ = std::move(matrix);
    return s;
}

bool ScenarioSource::bit(std::uint32_t row, std::uint32_t col) const {
    switch (kind_) {
        case Kind::Uniform:
            return uniform_bit(row, col);
        case Kind::ZeroFirstRow:
            return row == 0 ? false : uniform_bit(row, col);
        case Kind::BelowG:
            return (row < g_.size() && col < g_[row]) ? uniform_bit(row, col) : false;
        case Kind::FromFile:
            if (row >= matrix_->size() || col >= (*matrix_)[row].size())
                throw DomainError("scenario file exhausted at (" + std::to_string(row) +
                                  "," + std::to_string(col) + ")");
            return (*matrix_)[row][col];
    }
    return false;
}

}  // namespace doob::lab
