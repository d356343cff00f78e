#pragma once

#include <functional>
#include <utility>

#include <json.hpp>

#include "doob/game.hpp"
#include "doob/mc.hpp"

namespace doob::lab {

// A sampled capital process: sample index -> trajectory of length horizon+1.
using PathSampler = std::function<std::vector<double>(std::size_t)>;

PathSampler game_sampler(std::shared_ptr<const RowStrategy> strategy,
                         ScenarioSource source, GameConfig cfg);

// Evaluates a materialized spec's levels along sampled bits.
PathSampler spec_sampler(mart::MartingaleSpec spec, ScenarioSource source);

struct ConvergenceConfig {
    std::size_t samples = 1000;
    std::size_t horizon = 64;
    double epsilon = 0.1;
    std::vector<std::pair<double, double>> ladder = {{0.5, 1.0}, {1.0, 2.0}, {2.0, 4.0}};
    mc::Exec exec = mc::Exec::Parallel;
};

// Desk-scale convergence diagnostics. Divergence at a finite horizon is
// undecidable, so no verdict is emitted: the report carries oscillation of
// the last quarter of each trajectory, upcrossing counts on a ladder of
// [a,b] bands, and mean-preservation statistics.
struct ConvergenceReport {
    std::size_t samples = 0;
    std::size_t horizon = 0;
    double epsilon = 0.0;
    double start_value = 0.0;
    double mean_final = 0.0;
    double stderr_final = 0.0;
    double mean_oscillation = 0.0;
    double oscillation_fraction = 0.0;  // share of samples with oscillation > epsilon
    double zero_fraction = 0.0;         // share of samples ending at exactly 0
    std::vector<std::pair<double, double>> ladder;
    std::vector<double> ladder_mean_upcrossings;

    nlohmann::json to_json() const;
};

ConvergenceReport convergence_report(const PathSampler& sampler,
                                     const ConvergenceConfig& cfg);

// CSV export for one trajectory: "step,value,stop_flags".
std::string trajectory_csv(const Trajectory& t);

}  // namespace doob::lab
