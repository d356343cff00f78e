#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "doob/rng.hpp"

namespace doob::lab {

// Random-access bit arrays for game runs and pathwise diagnostics.
//
//   uniform(seed)          i.i.d. fair bits
//   zero_first_row(seed)   row 0 all zeros, the rest uniform
//   below_g(g, seed)       uniform bits at columns < g(row), zeros beyond:
//                          the randomness is confined below g, so every row
//                          ends in zeros (rows past the table are all zero)
//   from_file(path)        a fixed finite matrix of '0'/'1' rows
class ScenarioSource {
public:
    enum class Kind { Uniform, ZeroFirstRow, BelowG, FromFile };

    static ScenarioSource uniform(std::uint64_t seed) {
        return ScenarioSource(Kind::Uniform, seed);
    }
    static ScenarioSource zero_first_row(std::uint64_t seed) {
        return ScenarioSource(Kind::ZeroFirstRow, seed);
    }
    static ScenarioSource below_g(std::vector<std::uint32_t> g, std::uint64_t seed) {
        ScenarioSource s(Kind::BelowG, seed);
        s.g_ = std::move(g);
        return s;
    }
    static ScenarioSource from_file(const std::string& path);

    Kind kind() const { return kind_; }

    // Derived per-sample stream; file sources are the same array every sample.
    ScenarioSource for_sample(std::size_t index) const {
        ScenarioSource s = *this;
        if (kind_ != Kind::FromFile) s.seed_ = rng::derive(seed_, index);
        return s;
    }

    bool bit(std::uint32_t row, std::uint32_t col) const;

    // File sources only: available rows / row length.
    std::size_t file_rows() const { return matrix_ ? matrix_->size() : 0; }

private:
    ScenarioSource(Kind k, std::uint64_t seed) : kind_(k), seed_(seed) {}

    bool uniform_bit(std::uint32_t row, std::uint32_t col) const {
        const std::uint64_t key =
            (static_cast<std::uint64_t>(row) << 32) | static_cast<std::uint64_t>(col);
        return rng::mix(seed_ ^ rng::mix(key)) & 1u;
    }

    Kind kind_;
    std::uint64_t seed_ = 0;
    std::vector<std::uint32_t> g_;
    std::shared_ptr<const std::vector<std::vector<bool>>> matrix_;
};

}  // namespace doob::lab
