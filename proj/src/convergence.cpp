#include "doob/convergence.hpp"

#include <algorithm>
#include <sstream>

namespace doob::lab {

using nlohmann::json;

PathSampler game_sampler(std::shared_ptr<const RowStrategy> strategy,
                         ScenarioSource source, GameConfig cfg) {
    return [strategy = std::move(strategy), source = std::move(source),
            cfg = std::move(cfg)](std::size_t i) {
        return run_game_values(*strategy, source.for_sample(i), cfg);
    };
}

PathSampler spec_sampler(mart::MartingaleSpec spec, ScenarioSource source) {
    // positions any level can see, sampled once per run
    auto needed = std::make_shared<std::vector<Position>>();
    for (const auto& level : spec.levels)
        needed->insert(needed->end(), level.support().begin(), level.support().end());
    std::sort(needed->begin(), needed->end());
    needed->erase(std::unique(needed->begin(), needed->end()), needed->end());

    auto shared = std::make_shared<mart::MartingaleSpec>(std::move(spec));
    return [shared, needed, source = std::move(source)](std::size_t i) {
        const auto s = source.for_sample(i);
        BitAssignment a;
        for (Position p : *needed) a.set(p, s.bit(p.row, p.col));
        std::vector<double> values;
        values.reserve(shared->levels.size());
        for (const auto& level : shared->levels)
            values.push_back(to_double(level.value_at(a)));
        return values;
    };
}

ConvergenceReport convergence_report(const PathSampler& sampler,
                                     const ConvergenceConfig& cfg) {
    if (cfg.samples == 0) throw DomainError("convergence report needs samples");

    struct Slot {
        double final_value;
        double oscillation;
        double start;
        std::vector<std::size_t> upcrossings;
    };
    std::vector<Slot> slots(cfg.samples);

    mc::for_samples(cfg.samples, cfg.exec, [&](std::size_t i) {
        const auto values = sampler(i);
        if (values.empty()) throw DomainError("sampler produced an empty trajectory");
        Slot s;
        s.start = values.front();
        s.final_value = values.back();
        const std::size_t tail = std::max<std::size_t>(values.size() / 4, 1);
        double lo = values.back(), hi = values.back();
        for (std::size_t t = values.size() - tail; t < values.size(); ++t) {
            lo = std::min(lo, values[t]);
            hi = std::max(hi, values[t]);
        }
        s.oscillation = hi - lo;
        for (const auto& [a, b] : cfg.ladder)
            s.upcrossings.push_back(count_upcrossings(values, a, b));
        slots[i] = std::move(s);
    });

    ConvergenceReport r;
    r.samples = cfg.samples;
    r.horizon = cfg.horizon;
    r.epsilon = cfg.epsilon;
    r.ladder = cfg.ladder;
    r.start_value = slots[0].start;

    std::vector<double> finals(cfg.samples), oscs(cfg.samples);
    for (std::size_t i = 0; i < cfg.samples; ++i) {
        finals[i] = slots[i].final_value;
        oscs[i] = slots[i].oscillation;
    }
    const auto fs = mc::mean_stats(finals);
    r.mean_final = fs.mean;
    r.stderr_final = fs.stderror;
    r.mean_oscillation = mc::mean_stats(oscs).mean;

    std::size_t over = 0, zeros = 0;
    for (const Slot& s : slots) {
        if (s.oscillation > cfg.epsilon) ++over;
        if (s.final_value == 0.0) ++zeros;
    }
    r.oscillation_fraction = static_cast<double>(over) / static_cast<double>(cfg.samples);
    r.zero_fraction = static_cast<double>(zeros) / static_cast<double>(cfg.samples);

    r.ladder_mean_upcrossings.assign(cfg.ladder.size(), 0.0);
    for (const Slot& s : slots)
        for (std::size_t j = 0; j < cfg.ladder.size(); ++j)
            r.ladder_mean_upcrossings[j] += static_cast<double>(s.upcrossings[j]);
    for (double& v : r.ladder_mean_upcrossings) v /= static_cast<double>(cfg.samples);
    return r;
}

json ConvergenceReport::to_json() const {
    json ladder_json = json::array();
    for (std::size_t j = 0; j < ladder.size(); ++j)
        ladder_json.push_back(json{{"a", ladder[j].first},
                                   {"b", ladder[j].second},
                                   {"mean_upcrossings", ladder_mean_upcrossings[j]}});
    return json{{"samples", samples},
                {"horizon", horizon},
                {"epsilon", epsilon},
                {"start_value", start_value},
                {"mean_final", mean_final},
                {"stderr_final", stderr_final},
                {"mean_oscillation", mean_oscillation},
                {"oscillation_fraction", oscillation_fraction},
                {"zero_fraction", zero_fraction},
                {"ladder", ladder_json}};
}

std::string trajectory_csv(const Trajectory& t) {
    std::ostringstream out;
    out << "step,value,stop_flags\n";
    for (std::size_t i = 0; i < t.values.size(); ++i) {
        out << i << "," << to_fraction_string(t.values[i]) << ",";
        bool first = true;
        for (const auto& s : t.stops) {
            if (s.step != i) continue;
            if (!first) out << ";";
            first = false;
            switch (s.kind) {
                case StopMark::Kind::SigmaUp: out << "up" << s.k; break;
                case StopMark::Kind::SigmaDown: out << "down" << s.k; break;
                case StopMark::Kind::Tau: out << "tau" << s.k; break;
            }
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace doob::lab
