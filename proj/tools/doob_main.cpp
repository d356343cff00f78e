// doob: exact martingale laboratory with a discretized Brownian backend.
// Subcommands: verify, transform, simulate. All randomness flows from one
// root seed (--seed, then config file, then DOOB_SEED); result files are a
// deterministic function of (config, seed).

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "doob/brownian.hpp"
#include "doob/convergence.hpp"
#include "doob/levy.hpp"
#include "doob/oracle.hpp"
#include "doob/quadrature.hpp"
#include "doob/serialize.hpp"

using namespace doob;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// run record plumbing

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    std::ostringstream o;
    o << std::hex << v;
    return o.str();
}

struct RunRecord {
    json config = json::object();
    json result = json::object();
    std::vector<std::pair<std::string, std::string>> outputs;  // path, digest
    std::chrono::system_clock::time_point started = std::chrono::system_clock::now();

    void write_output(const std::string& path, const std::string& bytes) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DomainError("cannot write " + path);
        out << bytes;
        outputs.emplace_back(path, hex64(fnv1a(bytes)));
    }

    // The record itself carries wall-clock timestamps and is therefore not
    // part of the byte-determinism contract; the digests above are.
    void emit(const std::string& anchor_path, bool enabled) const {
        if (!enabled || anchor_path.empty()) return;
        auto to_iso = [](std::chrono::system_clock::time_point tp) {
            const std::time_t t = std::chrono::system_clock::to_time_t(tp);
            char buf[32];
            std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
            return std::string(buf);
        };
        json files = json::array();
        for (const auto& [p, d] : outputs) files.push_back({{"path", p}, {"digest", d}});
        json rec{{"artifact_version", kVersion},
                 {"config", config},
                 {"result", result},
                 {"outputs", files},
                 {"timestamps",
                  {{"started", to_iso(started)},
                   {"finished", to_iso(std::chrono::system_clock::now())}}}};
        std::ofstream out(anchor_path + ".runrecord.json");
        out << rec.dump(2) << "\n";
    }
};

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file", path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), path);
    }
    return j;
}

// flags > config file > environment; each option records whether the command
// line actually set it
struct Settings {
    json config = json::object();
    template <typename T>
    void apply(const CLI::App* cmd, const std::string& flag, const char* key, T& value) {
        if (cmd->count(flag) == 0 && config.contains(key)) value = config.at(key).get<T>();
    }
};

std::uint64_t parse_seed_env() {
    if (const char* env = std::getenv("DOOB_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw ParseError("DOOB_SEED must be an unsigned integer");
        }
    }
    return 0;
}

lab::ScenarioSource make_source(const std::string& kind, std::uint64_t seed,
                                const std::vector<std::uint32_t>& g,
                                const std::string& file) {
    if (kind == "uniform") return lab::ScenarioSource::uniform(seed);
    if (kind == "zero-first-row") return lab::ScenarioSource::zero_first_row(seed);
    if (kind == "below-g") {
        if (g.empty()) throw DomainError("below-g needs --g thresholds");
        return lab::ScenarioSource::below_g(g, seed);
    }
    if (kind == "file") {
        if (file.empty()) throw DomainError("file source needs --scenario-file");
        return lab::ScenarioSource::from_file(file);
    }
    throw DomainError("unknown source '" + kind + "'");
}

std::shared_ptr<lab::RowStrategy> make_strategy(const std::string& name,
                                                std::uint32_t width) {
    if (name == "zero") return lab::zero_strategy();
    if (name == "bold") return lab::bold_zero_strategy();
    if (name == "bold-until") return lab::bold_until_strategy(8);
    if (name == "shrinking") return lab::shrinking_stake_strategy(rat(1, 2));
    if (name == "echo") return lab::row_echo_strategy(width);
    throw DomainError("unknown strategy '" + name + "'");
}

Rational parse_rat_flag(const std::string& s, const char* what) {
    try {
        return parse_fraction(s);
    } catch (const ParseError&) {
        throw DomainError(std::string(what) + " must be a rational like 3/2");
    }
}

// ---------------------------------------------------------------------------
// subcommand bodies

int cmd_verify(const std::string& spec_path, std::size_t horizon,
               const std::string& out_path, RunRecord& record) {
    auto spec = mart::spec_from_json(load_json_file(spec_path));
    auto report = mart::verify(spec, horizon);
    const std::string bytes = report.to_json().dump(2) + "\n";
    if (!out_path.empty()) record.write_output(out_path, bytes);
    std::cout << bytes;
    record.result = report.to_json();
    return report.ok ? 0 : 1;
}

int cmd_transform(const std::string& spec_path, const std::string& which,
                  const std::string& a_str, const std::string& b_str,
                  std::size_t horizon, const std::string& policy,
                  const std::string& out_path, RunRecord& record) {
    if (out_path.empty()) throw DomainError("transform needs --out");
    json out_spec;
    json extra = json::object();

    if (which == "convert-oracle") {
        auto om = mart::oracle_from_json(load_json_file(spec_path));
        const auto pol = policy == "warn" ? mart::SavingsPolicy::Warn
                                          : mart::SavingsPolicy::Require;
        auto conv = mart::convert_oracle_martingale(
            om, horizon == SIZE_MAX ? om.levels.size() : horizon, pol);
        out_spec = mart::to_json(conv.spec);
        extra["savings_ok"] = conv.savings_ok;
        extra["verify"] = mart::verify(conv.spec).to_json();
    } else {
        auto spec = mart::spec_from_json(load_json_file(spec_path));
        mart::MartingaleSpec result;
        if (which == "repair") {
            auto r = mart::repair(spec.chain, spec.levels);
            result = std::move(r.spec);
            json drift = json::array();
            for (const auto& d : r.drift) drift.push_back(to_fraction_string(d));
            extra["drift_sup_norm"] = drift;
        } else if (which == "upcross") {
            result = mart::upcrossing_transform(spec, parse_rat_flag(a_str, "--a"),
                                                parse_rat_flag(b_str, "--b"));
        } else if (which == "savings") {
            result = mart::savings_transform(spec);
        } else if (which == "extend") {
            result = mart::extend_to_array(spec);
        } else if (which == "restrict") {
            result = mart::restrict_rows(spec);
        } else {
            throw DomainError("unknown transform '" + which + "'");
        }
        out_spec = mart::to_json(result);
        extra["verify"] = mart::verify(result, horizon).to_json();
    }

    record.write_output(out_path, out_spec.dump(2) + "\n");
    const std::string report_path = out_path + ".verify.json";
    record.write_output(report_path, extra.dump(2) + "\n");
    record.result = extra;
    if (!extra["verify"]["ok"].get<bool>()) return 1;
    return 0;
}

int cmd_simulate_game(std::uint64_t seed, const std::string& strategy_name,
                      const std::string& source_kind,
                      const std::vector<std::uint32_t>& g, const std::string& file,
                      std::size_t steps, std::uint32_t width,
                      const std::string& start, const std::string& out_path,
                      RunRecord& record) {
    lab::GameConfig cfg;
    cfg.steps = steps;
    cfg.row_width = width;
    cfg.start_capital = parse_rat_flag(start, "--start");
    auto strategy = make_strategy(strategy_name, width);
    auto source = make_source(source_kind, rng::derive(seed, "game"), g, file);
    auto traj = lab::run_game(*strategy, source, cfg);
    const std::string csv = lab::trajectory_csv(traj);
    if (!out_path.empty()) record.write_output(out_path, csv);
    record.result = {{"final_capital", to_fraction_string(traj.values.back())},
                     {"steps", steps}};
    std::cout << "final capital " << to_fraction_string(traj.values.back()) << "\n";
    return 0;
}

int cmd_simulate_convergence(std::uint64_t seed, const std::string& strategy_name,
                             const std::string& spec_path,
                             const std::string& source_kind,
                             const std::vector<std::uint32_t>& g,
                             const std::string& file, std::size_t samples,
                             std::size_t horizon, double epsilon,
                             std::uint32_t width, bool serial,
                             const std::string& out_path, RunRecord& record) {
    lab::ConvergenceConfig cc;
    cc.samples = samples;
    cc.horizon = horizon;
    cc.epsilon = epsilon;
    cc.exec = serial ? mc::Exec::Serial : mc::Exec::Parallel;
    lab::PathSampler sampler;
    if (!spec_path.empty()) {
        auto spec = mart::spec_from_json(load_json_file(spec_path));
        auto check = mart::verify(spec);
        if (!check.ok) throw DomainError("input spec is not a martingale: " + check.message);
        cc.horizon = spec.size() == 0 ? 0 : spec.size() - 1;
        sampler = lab::spec_sampler(
            std::move(spec),
            make_source(source_kind, rng::derive(seed, "convergence"), g, file));
    } else {
        lab::GameConfig gcfg;
        gcfg.steps = horizon;
        gcfg.row_width = width;
        sampler = lab::game_sampler(
            make_strategy(strategy_name, width),
            make_source(source_kind, rng::derive(seed, "convergence"), g, file), gcfg);
    }
    auto rep = lab::convergence_report(sampler, cc);
    const std::string bytes = rep.to_json().dump(2) + "\n";
    if (!out_path.empty()) record.write_output(out_path, bytes);
    std::cout << bytes;
    record.result = rep.to_json();
    return 0;
}

int cmd_simulate_bm(std::uint64_t seed, const std::string& T_str,
                    const std::string& dt_str, std::size_t samples,
                    const std::string& out_path, RunRecord& record) {
    const Rational T = parse_rat_flag(T_str, "--T");
    const Rational dt = parse_rat_flag(dt_str, "--dt");
    // distribution of the endpoint and of a mid-time increment pair
    std::vector<double> endpoint(samples), first_half(samples), second_half(samples);
    mc::for_samples(samples, mc::Exec::Parallel, [&](std::size_t i) {
        auto w = bm::sample_path(T, dt, rng::derive(rng::derive(seed, "bm"), i));
        endpoint[i] = w.values().back();
        const std::size_t mid = w.steps() / 2;
        first_half[i] = w.values()[mid];
        second_half[i] = w.values().back() - w.values()[mid];
    });
    auto es = mc::mean_stats(endpoint);
    double cov = 0;
    for (std::size_t i = 0; i < samples; ++i) cov += first_half[i] * second_half[i];
    cov /= static_cast<double>(samples);
    json stats{{"samples", samples},
               {"endpoint_mean", es.mean},
               {"endpoint_stddev", es.stddev},
               {"halfway_covariance", cov}};
    auto example = bm::sample_path(T, dt, rng::derive(rng::derive(seed, "bm"), 0));
    if (!out_path.empty()) {
        record.write_output(out_path, example.to_csv());
        record.write_output(out_path + ".stats.json", stats.dump(2) + "\n");
    }
    std::cout << stats.dump(2) << "\n";
    record.result = stats;
    return 0;
}

int cmd_simulate_counterexample(double radius, const std::string& out_path,
                                RunRecord& record) {
    auto rep = bm::remark_counterexample(radius);
    const std::string bytes = rep.to_json().dump(2) + "\n";
    if (!out_path.empty()) record.write_output(out_path, bytes);
    std::cout << bytes;
    record.result = rep.to_json();
    return rep.converged ? 0 : 1;
}

int cmd_simulate_iso(std::uint64_t seed, unsigned depth, unsigned qbits,
                     std::size_t arrays, const std::string& out_path,
                     RunRecord& record) {
    rng::Stream stream(rng::derive(seed, "iso"));
    std::size_t exact = 0;
    double sum = 0, sumsq = 0;
    for (std::size_t i = 0; i < arrays; ++i) {
        bits::BitAssignment a;
        for (std::uint32_t c = 0; c < (1u << depth) * qbits; ++c)
            a.set(bits::Position{0, c}, stream.coin());
        auto path = bm::bits_to_path(a, depth, qbits);
        exact += bm::path_to_bits(path, depth, qbits) == a;
        const double w1 = path.values().back();
        sum += w1;
        sumsq += w1 * w1;
    }
    const double mean = sum / static_cast<double>(arrays);
    json out{{"arrays", arrays},
             {"depth", depth},
             {"qbits", qbits},
             {"roundtrip_exact", exact},
             {"all_exact", exact == arrays},
             {"endpoint_variance", sumsq / static_cast<double>(arrays) - mean * mean}};
    const std::string bytes = out.dump(2) + "\n";
    if (!out_path.empty()) record.write_output(out_path, bytes);
    std::cout << bytes;
    record.result = out;
    return exact == arrays ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"doob: exact martingale transforms on bit spaces and a discretized "
                 "Brownian backend"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    std::size_t support_cap = 20;
    bool no_record = false;
    app.add_option("--config", config_path, "JSON config file (flags override it)");
    auto* seed_opt = app.add_option("--seed", seed, "root RNG seed");
    app.add_option("--support-cap", support_cap, "max positions per exact table");
    app.add_flag("--no-record", no_record, "skip the .runrecord.json sidecar");

    // verify
    auto* verify = app.add_subcommand("verify", "exact martingale verification");
    std::string spec_path, out_path;
    std::size_t horizon = SIZE_MAX;
    verify->add_option("--spec", spec_path, "martingale spec JSON")->required();
    verify->add_option("--horizon", horizon, "check the first N levels");
    verify->add_option("--out", out_path, "write the verification report here");

    // transform
    auto* transform = app.add_subcommand("transform", "the martingale constructions");
    std::string which, a_str, b_str, policy = "require";
    std::string t_spec, t_out;
    std::size_t t_horizon = SIZE_MAX;
    transform->add_option("--spec", t_spec, "input spec (oracle spec for convert-oracle)")
        ->required();
    transform
        ->add_option("--which", which,
                     "repair | upcross | savings | extend | restrict | convert-oracle")
        ->required();
    transform->add_option("--a", a_str, "lower level (upcross)");
    transform->add_option("--b", b_str, "upper level (upcross)");
    transform->add_option("--horizon", t_horizon, "verification / conversion horizon");
    transform->add_option("--savings-policy", policy, "require | warn (convert-oracle)");
    transform->add_option("--out", t_out, "output spec path")->required();

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo experiments");
    simulate->require_subcommand(1);
    std::string strategy = "shrinking", source = "uniform", scenario_file, start = "1/1";
    std::vector<std::uint32_t> g;
    std::size_t steps = 16, samples = 10000, s_horizon = 64;
    std::uint32_t width = 8;
    double epsilon = 0.1, radius = 8.0;
    std::string T_str = "4/1", dt_str = "1/64";
    unsigned depth = 6, qbits = 8;
    std::size_t arrays = 1000;
    bool serial = false;
    std::string s_out;

    auto* game = simulate->add_subcommand("game", "one exact betting trajectory");
    game->add_option("--strategy", strategy, "zero | bold | bold-until | shrinking | echo");
    game->add_option("--source", source, "uniform | zero-first-row | below-g | file");
    game->add_option("--g", g, "below-g thresholds")->delimiter(',');
    game->add_option("--scenario-file", scenario_file, "bit matrix file");
    game->add_option("--steps", steps, "number of bets");
    game->add_option("--width", width, "materialized row width");
    game->add_option("--start", start, "starting capital p/q");
    game->add_option("--out", s_out, "trajectory CSV path");

    auto* conv = simulate->add_subcommand("convergence", "oscillation diagnostics");
    std::string conv_spec;
    conv->add_option("--strategy", strategy, "zero | bold | bold-until | shrinking | echo");
    conv->add_option("--spec", conv_spec, "martingale spec to evaluate pathwise instead");
    conv->add_option("--source", source, "uniform | zero-first-row | below-g | file");
    conv->add_option("--g", g, "below-g thresholds")->delimiter(',');
    conv->add_option("--scenario-file", scenario_file, "bit matrix file");
    conv->add_option("--samples", samples, "Monte Carlo samples");
    conv->add_option("--horizon", s_horizon, "trajectory length");
    conv->add_option("--epsilon", epsilon, "oscillation threshold");
    conv->add_option("--width", width, "materialized row width");
    conv->add_flag("--serial", serial, "run the serial reference kernel");
    conv->add_option("--out", s_out, "report JSON path");

    auto* bmx = simulate->add_subcommand("bm-experiment", "Brownian sampling checks");
    bmx->add_option("--T", T_str, "horizon (rational)");
    bmx->add_option("--dt", dt_str, "grid step (rational)");
    bmx->add_option("--samples", samples, "Monte Carlo samples");
    bmx->add_option("--out", s_out, "example path CSV (stats land beside it)");

    auto* cx = simulate->add_subcommand("counterexample",
                                        "the non-computability integrals");
    cx->add_option("--radius", radius, "truncation radius R");
    cx->add_option("--out", s_out, "report JSON path");

    auto* iso = simulate->add_subcommand("iso-roundtrip", "bit/path isomorphism check");
    iso->add_option("--depth", depth, "dyadic depth L");
    iso->add_option("--qbits", qbits, "bits per coefficient");
    iso->add_option("--samples", arrays, "number of random arrays");
    iso->add_option("--out", s_out, "report JSON path");

    CLI11_PARSE(app, argc, argv);

    RunRecord record;
    try {
        Settings settings;
        if (!config_path.empty()) settings.config = load_json_file(config_path);
        if (seed_opt->count() == 0) {
            if (settings.config.contains("seed"))
                seed = settings.config.at("seed").get<std::uint64_t>();
            else
                seed = parse_seed_env();
        }
        settings.apply(&app, "--support-cap", "support_cap", support_cap);
        bits::set_support_cap(support_cap);

        record.config = {{"seed", seed},
                         {"support_cap", support_cap},
                         {"argv", std::vector<std::string>(argv + 1, argv + argc)}};

        int rc = 0;
        std::string anchor;
        if (verify->parsed()) {
            settings.apply(verify, "--horizon", "horizon", horizon);
            rc = cmd_verify(spec_path, horizon, out_path, record);
            anchor = out_path;
        } else if (transform->parsed()) {
            settings.apply(transform, "--horizon", "horizon", t_horizon);
            rc = cmd_transform(t_spec, which, a_str, b_str, t_horizon, policy, t_out,
                               record);
            anchor = t_out;
        } else if (game->parsed()) {
            settings.apply(game, "--steps", "steps", steps);
            settings.apply(game, "--width", "width", width);
            rc = cmd_simulate_game(seed, strategy, source, g, scenario_file, steps,
                                   width, start, s_out, record);
            anchor = s_out;
        } else if (conv->parsed()) {
            settings.apply(conv, "--samples", "samples", samples);
            settings.apply(conv, "--horizon", "horizon", s_horizon);
            rc = cmd_simulate_convergence(seed, strategy, conv_spec, source, g,
                                          scenario_file, samples, s_horizon, epsilon,
                                          width, serial, s_out, record);
            anchor = s_out;
        } else if (bmx->parsed()) {
            settings.apply(bmx, "--samples", "samples", samples);
            rc = cmd_simulate_bm(seed, T_str, dt_str, samples, s_out, record);
            anchor = s_out;
        } else if (cx->parsed()) {
            settings.apply(cx, "--radius", "radius", radius);
            rc = cmd_simulate_counterexample(radius, s_out, record);
            anchor = s_out;
        } else if (iso->parsed()) {
            settings.apply(iso, "--depth", "depth", depth);
            settings.apply(iso, "--qbits", "qbits", qbits);
            settings.apply(iso, "--samples", "samples", arrays);
            rc = cmd_simulate_iso(seed, depth, qbits, arrays, s_out, record);
            anchor = s_out;
        }
        record.emit(anchor, !no_record);
        return rc;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
