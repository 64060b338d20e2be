#include "iplab/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include "iplab/analytics.hpp"
#include "iplab/builder.hpp"
#include "iplab/generator.hpp"
#include "iplab/imprecision.hpp"
#include "iplab/io.hpp"
#include "iplab/selection.hpp"

namespace iplab {

namespace {

Measure coin(double heads) { return make_measure({heads, 1.0 - heads}); }

CredalSet simplex_vertices(std::size_t k) {
    std::vector<Measure> ms;
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<double> w(k, 0.0);
        w[j] = 1.0;
        ms.push_back(Measure{std::move(w)});
    }
    return make_credal_set(std::move(ms));
}

std::string scenario_dir(const ExperimentConfig& cfg) {
    return cfg.out_dir + "/" + cfg.scenario;
}

nlohmann::json measure_json(const Measure& m) { return nlohmann::json(m.w); }

std::uint64_t now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::uint64_t wall_unix_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

struct SummaryBuilder {
    nlohmann::json j;
    std::vector<std::string> artifacts;
    std::uint64_t t0 = now_ms();

    explicit SummaryBuilder(const ExperimentConfig& cfg) {
        j["scenario"] = cfg.scenario;
        j["version"] = kVersion;
        j["config"] = cfg.to_json();
    }

    ScenarioResult finish(const ExperimentConfig& cfg, bool pass) {
        j["pass"] = pass;
        j["wall_ms"] = now_ms() - t0;          // isolated timing fields:
        j["generated_unix_ms"] = wall_unix_ms();  // not part of the data CSVs
        const std::string path = scenario_dir(cfg) + "/summary.json";
        std::filesystem::create_directories(scenario_dir(cfg));
        std::ofstream out(path);
        out << j.dump(2) << "\n";
        artifacts.push_back(path);
        return ScenarioResult{pass, j, artifacts};
    }
};

// ---------------------------------------------------------------- presets

constexpr double kAltAggregateTol = 0.01;
constexpr double kAltSubseqTol = 0.02;
constexpr double kWeirdTailTol = 0.02;
constexpr double kWeirdCloudTol = 0.02;
constexpr double kTheorem1Hausdorff = 0.05;
constexpr double kTheorem1OracleTol = 1e-10;
constexpr double kSlowAttainFraction = 0.05;  // of the interval length
constexpr double kSlowSpanFraction = 0.5;
constexpr double kMhatTol = 0.02;

ExperimentConfig scenario_defaults(const std::string& id) {
    ExperimentConfig cfg;
    cfg.scenario = id;
    if (id == "alternating-coins") {
        cfg.horizon = 100000;
        cfg.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20};
        cfg.log_stride = 1000;
        cfg.rules = {"mod:2,1", "mod:2,0"};
    } else if (id == "weird-coin") {
        cfg.horizon = 1ull << 22;
        cfg.burn_in = 1ull << 18;
        cfg.seeds = {1, 2, 3, 4, 5};
        cfg.log_stride = 1ull << 12;
    } else if (id == "theorem1-singleton") {
        cfg.horizon = 10000000;
        cfg.burn_in = 200000;
        cfg.log_stride = 10000;
        cfg.seeds = {0};  // deterministic; seed unused
        cfg.credal_set = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        cfg.target_path = {{0.40, 0.35, 0.25}};
        cfg.schedule = ToleranceSchedule{0.5, 0.5, 0.0, 0.5};
    } else if (id == "theorem1-segment") {
        cfg.horizon = 10000000;
        cfg.burn_in = 200000;
        cfg.log_stride = 10000;
        cfg.seeds = {0};
        cfg.credal_set = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        cfg.target_path = {{0.50, 0.30, 0.20}, {0.36, 0.44, 0.20}};
        cfg.schedule = ToleranceSchedule{0.93, 0.5, 0.0, 0.5};
    } else if (id == "theorem1-vpath") {
        cfg.horizon = 10000000;
        cfg.burn_in = 200000;
        cfg.log_stride = 10000;
        cfg.seeds = {0};
        cfg.credal_set = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        cfg.target_path = {{0.50, 0.30, 0.20}, {0.42, 0.38, 0.20}, {0.42, 0.30, 0.28}};
        cfg.schedule = ToleranceSchedule{0.93, 0.5, 0.0, 0.5};
    } else if (id == "slow-divergence") {
        cfg.horizon = 10000000;
        cfg.burn_in = 1000000;  // window of horizons examined for the traces
        cfg.log_stride = 10000;
        cfg.seeds = {0};
        cfg.credal_set = {{1, 0}, {0, 1}};
        cfg.target_path = {{0.20, 0.80}, {0.80, 0.20}};
        cfg.schedule = ToleranceSchedule{0.985, 0.30, 0.0, 0.5};
        cfg.kappa = "sqrt";
    } else if (id == "mhat-recovery") {
        cfg.horizon = 100000;
        cfg.seeds = {1, 2, 3, 4, 5};
        cfg.log_stride = 1000;
        cfg.rules = {"mod:2,1", "mod:2,0", "all"};
        cfg.min_count = 1000;
    } else if (id == "fierens-fine-grid") {
        cfg.trials = 1000;
        cfg.seeds = {424242};
    } else {
        throw ConfigError("scenario", "unknown scenario id '" + id + "'");
    }
    return cfg;
}

// Levenshtein distance for nearest-match suggestions on bad ids.
std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

ExperimentConfig merged(const ExperimentConfig& user) {
    ExperimentConfig cfg = scenario_defaults(user.scenario);
    if (!user.seeds.empty()) cfg.seeds = user.seeds;
    if (user.horizon) cfg.horizon = user.horizon;
    if (user.burn_in) cfg.burn_in = user.burn_in;
    if (user.log_stride) cfg.log_stride = user.log_stride;
    if (!user.out_dir.empty()) cfg.out_dir = user.out_dir;
    if (!user.kappa.empty()) cfg.kappa = user.kappa;
    if (!user.rules.empty()) cfg.rules = user.rules;
    if (user.min_count) cfg.min_count = user.min_count;
    if (user.trials) cfg.trials = user.trials;
    if (user.credal_set) cfg.credal_set = user.credal_set;
    if (user.target_path) cfg.target_path = user.target_path;
    if (user.schedule) cfg.schedule = user.schedule;
    return cfg;
}

CredalSet credal_from_config(const ExperimentConfig& cfg) {
    std::vector<Measure> ms;
    for (const auto& row : *cfg.credal_set) ms.push_back(make_measure(row));
    return make_credal_set(std::move(ms));
}

TargetPath path_from_config(const CredalSet& m, const ExperimentConfig& cfg) {
    std::vector<ConvexWeights> wps;
    for (const auto& row : *cfg.target_path) wps.push_back(make_convex_weights(row, m.size()));
    return make_target_path(m, std::move(wps));
}

// ------------------------------------------------- alternating-coins

ScenarioResult run_alternating(const ExperimentConfig& cfg) {
    SummaryBuilder sb(cfg);
    auto stream = cycle_stream({coin(1.0 / 3.0), coin(2.0 / 3.0)});
    const KappaFn kappa = parse_kappa(cfg.kappa);
    const SelectionRule odd = SelectionRule::parse(cfg.rules.at(0));
    const SelectionRule even = SelectionRule::parse(cfg.rules.at(1));

    bool pass = true;
    nlohmann::json per_seed = nlohmann::json::array();
    for (std::uint64_t seed : cfg.seeds) {
        FreqTracker freq(2);
        SubseqTracker odd_t(odd, 2), even_t(even, 2);
        GambleAverageTracker heads(Gamble{{1.0, 0.0}}, kappa);
        CsvWriter csv(scenario_dir(cfg) + "/seed" + std::to_string(seed) + "_series.csv");
        csv.row("n", "r_heads", "wf_lower", "wf_upper");
        for (std::uint64_t i = 1; i <= cfg.horizon; ++i) {
            const auto o = draw_outcome(stream->at(i), uniform_at(Seed{seed}, i));
            freq.update(o);
            odd_t.update(o);
            even_t.update(o);
            heads.update(o);
            if (i % cfg.log_stride == 0) {
                const auto [lo, hi] = heads.wf_estimate();
                csv.row(i, format_double(freq.event_frequency(1u)), format_double(lo),
                        format_double(hi));
            }
        }
        const double rn = freq.event_frequency(1u);
        const double odd_f = odd_t.selected_freq().w[0];
        const double even_f = even_t.selected_freq().w[0];
        const bool okA = std::abs(rn - 0.5) < kAltAggregateTol;
        const bool okO = std::abs(odd_f - 1.0 / 3.0) < kAltSubseqTol;
        const bool okE = std::abs(even_f - 2.0 / 3.0) < kAltSubseqTol;
        pass = pass && okA && okO && okE;
        per_seed.push_back({{"seed", seed},
                            {"r_heads", rn},
                            {"odd_heads", odd_f},
                            {"even_heads", even_f},
                            {"aggregate_ok", okA},
                            {"odd_ok", okO},
                            {"even_ok", okE}});
        sb.artifacts.push_back(scenario_dir(cfg) + "/seed" + std::to_string(seed) + "_series.csv");
    }
    sb.j["per_seed"] = per_seed;
    sb.j["flags"] = {{"aggregate_tol", kAltAggregateTol}, {"subsequence_tol", kAltSubseqTol}};
    return sb.finish(cfg, pass);
}

// ------------------------------------------------------- weird-coin

ScenarioResult run_weird_coin(const ExperimentConfig& cfg) {
    SummaryBuilder sb(cfg);
    auto stream = weird_coin_stream();
    const double lo_ref = 4.0 / 9.0, hi_ref = 0.5;
    const CredalSet coins = make_credal_set({coin(4.0 / 9.0), coin(0.5)});
    const TargetPath ref_path = make_target_path(
        coins, {make_convex_weights({1, 0}, 2), make_convex_weights({0, 1}, 2)});
    const Polyline reference = induced_polyline(coins, ref_path);

    bool pass = true;
    nlohmann::json per_seed = nlohmann::json::array();
    for (std::uint64_t seed : cfg.seeds) {
        FreqTracker freq(2);
        double tail_min = 2.0, tail_max = -1.0;
        CloudCollector cloud(cfg.burn_in, cfg.horizon);
        CsvWriter csv(scenario_dir(cfg) + "/seed" + std::to_string(seed) + "_series.csv");
        csv.row("n", "r_heads");
        for (std::uint64_t i = 1; i <= cfg.horizon; ++i) {
            const auto o = draw_outcome(stream->at(i), uniform_at(Seed{seed}, i));
            freq.update(o);
            const double rh = freq.event_frequency(1u);
            if (i >= cfg.burn_in) {
                tail_min = std::min(tail_min, rh);
                tail_max = std::max(tail_max, rh);
                cloud.push(i, freq.relative_frequency());
            }
            if (i % cfg.log_stride == 0) csv.row(i, format_double(rh));
        }
        const double hd = cloud.hausdorff_to(reference);
        const bool ok_min = std::abs(tail_min - lo_ref) < kWeirdTailTol;
        const bool ok_max = std::abs(tail_max - hi_ref) < kWeirdTailTol;
        const bool ok_cloud = hd < kWeirdCloudTol;
        pass = pass && ok_min && ok_max && ok_cloud;
        per_seed.push_back({{"seed", seed},
                            {"tail_min", tail_min},
                            {"tail_max", tail_max},
                            {"hausdorff", hd},
                            {"tail_ok", ok_min && ok_max},
                            {"cloud_ok", ok_cloud}});
        sb.artifacts.push_back(scenario_dir(cfg) + "/seed" + std::to_string(seed) + "_series.csv");
    }
    sb.j["per_seed"] = per_seed;
    sb.j["flags"] = {{"tail_tol", kWeirdTailTol},
                     {"cloud_tol", kWeirdCloudTol},
                     {"reference", {lo_ref, hi_ref}}};
    return sb.finish(cfg, pass);
}

// ------------------------------------------------------ theorem1 runs

struct BuilderRunStats {
    std::uint64_t excursion_violations = 0;
    double worst_excursion_slack = 1e9;  // min over emissions of bound - dist
    double hausdorff = 0.0;
    double oracle_gap = 0.0;  // builder average vs independent fold
    std::uint64_t final_iteration = 0;
};

BuilderRunStats run_builder_analysis(SequenceBuilder& b, std::uint64_t horizon,
                                     std::uint64_t burn_in, std::uint64_t stride,
                                     CsvWriter* csv) {
    const std::size_t k = b.credal_set().k();
    std::vector<double> sum(k, 0.0), comp(k, 0.0);  // independent Kahan fold
    Measure avg;
    avg.w.assign(k, 0.0);
    CloudCollector cloud(burn_in, horizon);
    BuilderRunStats st;
    for (std::uint64_t i = 1; i <= horizon; ++i) {
        const std::uint32_t idx = b.next_index();
        const Measure& m = b.credal_set().members[idx];
        for (std::size_t j = 0; j < k; ++j) {
            const double y = m.w[j] - comp[j];
            const double t = sum[j] + y;
            comp[j] = (t - sum[j]) - y;
            sum[j] = t;
        }
        for (std::size_t j = 0; j < k; ++j) avg.w[j] = sum[j] / double(i);
        const double dist = b.target().distance_to(avg);
        const double bound = b.excursion_bound();
        st.worst_excursion_slack = std::min(st.worst_excursion_slack, bound - dist);
        if (dist > bound) ++st.excursion_violations;
        cloud.push(i, avg);
        if (csv && i % stride == 0) {
            std::vector<std::string> row{std::to_string(i)};
            for (double x : avg.w) row.push_back(format_double(x));
            row.push_back(format_double(dist));
            row.push_back(format_double(bound));
            csv->row_vec(row);
        }
    }
    st.hausdorff = cloud.hausdorff_to(b.target());
    st.oracle_gap = distance(b.running_average(), avg);
    st.final_iteration = b.iteration();
    return st;
}

ScenarioResult run_theorem1(const ExperimentConfig& cfg) {
    SummaryBuilder sb(cfg);
    CredalSet m = credal_from_config(cfg);
    TargetPath path = path_from_config(m, cfg);
    SequenceBuilder b(m, path, *cfg.schedule);

    CsvWriter csv(scenario_dir(cfg) + "/trajectory.csv");
    std::vector<std::string> header{"n"};
    for (std::size_t j = 0; j < m.k(); ++j) header.push_back("avg" + std::to_string(j));
    header.push_back("dist_to_target");
    header.push_back("excursion_bound");
    csv.row_vec(header);

    BuilderRunStats st =
        run_builder_analysis(b, cfg.horizon, cfg.burn_in, cfg.log_stride, &csv);
    const bool ok_h = st.hausdorff < kTheorem1Hausdorff;
    const bool ok_e = st.excursion_violations == 0;
    const bool ok_o = st.oracle_gap < kTheorem1OracleTol;
    sb.artifacts.push_back(scenario_dir(cfg) + "/trajectory.csv");
    sb.j["stats"] = {{"hausdorff", st.hausdorff},
                     {"excursion_violations", st.excursion_violations},
                     {"worst_excursion_slack", st.worst_excursion_slack},
                     {"oracle_gap", st.oracle_gap},
                     {"final_iteration", st.final_iteration}};
    sb.j["flags"] = {{"hausdorff_tol", kTheorem1Hausdorff},
                     {"hausdorff_ok", ok_h},
                     {"excursion_ok", ok_e},
                     {"oracle_ok", ok_o}};
    return sb.finish(cfg, ok_h && ok_e && ok_o);
}

// --------------------------------------------------- slow-divergence

ScenarioResult run_slow_divergence(const ExperimentConfig& cfg) {
    SummaryBuilder sb(cfg);
    CredalSet m = credal_from_config(cfg);
    TargetPath path = path_from_config(m, cfg);
    const Polyline poly = induced_polyline(m, path);
    const double head_a = poly.points().front().w[0];
    const double head_b = poly.points().back().w[0];
    const double lo_end = std::min(head_a, head_b), hi_end = std::max(head_a, head_b);
    const double interval_len = hi_end - lo_end;

    const KappaFn kappa = parse_kappa(cfg.kappa);
    SequenceBuilder b(m, path, *cfg.schedule, kappa);

    WalleyFineTracker wf(kappa);
    double sum0 = 0.0, comp0 = 0.0;
    const std::uint64_t window_start = cfg.burn_in;  // horizons examined
    double best_lower_gap = 2.0, best_upper_gap = 2.0;
    double attained_min = 2.0, attained_max = -2.0;

    CsvWriter csv(scenario_dir(cfg) + "/wf_trace.csv");
    csv.row("n", "avg_heads", "wf_lower", "wf_upper");
    for (std::uint64_t i = 1; i <= cfg.horizon; ++i) {
        const std::uint32_t idx = b.next_index();
        const double y = m.members[idx].w[0] - comp0;
        const double t = sum0 + y;
        comp0 = (t - sum0) - y;
        sum0 = t;
        wf.push(sum0 / double(i));
        if (i >= window_start) {
            const auto [lo, hi] = wf.estimate();
            best_lower_gap = std::min(best_lower_gap, std::abs(lo - lo_end));
            best_upper_gap = std::min(best_upper_gap, std::abs(hi - hi_end));
            attained_min = std::min(attained_min, lo);
            attained_max = std::max(attained_max, hi);
        }
        if (i % cfg.log_stride == 0) {
            const auto [lo, hi] = wf.estimate();
            csv.row(i, format_double(sum0 / double(i)), format_double(lo), format_double(hi));
        }
    }
    const double span = attained_max - attained_min;
    const bool ok_lo = best_lower_gap <= kSlowAttainFraction * interval_len;
    const bool ok_hi = best_upper_gap <= kSlowAttainFraction * interval_len;
    const bool ok_span = span >= kSlowSpanFraction * interval_len;
    sb.artifacts.push_back(scenario_dir(cfg) + "/wf_trace.csv");
    sb.j["stats"] = {{"interval", {lo_end, hi_end}},
                     {"best_lower_gap", best_lower_gap},
                     {"best_upper_gap", best_upper_gap},
                     {"tail_span", span},
                     {"final_iteration", b.iteration()}};
    sb.j["flags"] = {{"attain_fraction", kSlowAttainFraction},
                     {"span_fraction", kSlowSpanFraction},
                     {"attain_lower_ok", ok_lo},
                     {"attain_upper_ok", ok_hi},
                     {"span_ok", ok_span}};
    return sb.finish(cfg, ok_lo && ok_hi && ok_span);
}

// ----------------------------------------------------- mhat-recovery

ScenarioResult run_mhat(const ExperimentConfig& cfg) {
    SummaryBuilder sb(cfg);
    auto stream = cycle_stream({coin(1.0 / 3.0), coin(2.0 / 3.0)});
    std::vector<SelectionRule> rules;
    for (const std::string& spec : cfg.rules) rules.push_back(SelectionRule::parse(spec));

    bool pass = true;
    nlohmann::json per_seed = nlohmann::json::array();
    for (std::uint64_t seed : cfg.seeds) {
        std::vector<SubseqTracker> trackers;
        for (const SelectionRule& r : rules) trackers.emplace_back(r, 2);
        for (std::uint64_t i = 1; i <= cfg.horizon; ++i) {
            const auto o = draw_outcome(stream->at(i), uniform_at(Seed{seed}, i));
            for (SubseqTracker& t : trackers) t.update(o);
        }
        const std::vector<Measure> hat = estimate_m_hat(trackers, cfg.min_count);
        // The two generating coins must both be recovered by some estimate.
        bool found_lo = false, found_hi = false;
        nlohmann::json pts = nlohmann::json::array();
        for (const Measure& p : hat) {
            pts.push_back(measure_json(p));
            found_lo |= max_coord_distance(p, coin(1.0 / 3.0)) < kMhatTol;
            found_hi |= max_coord_distance(p, coin(2.0 / 3.0)) < kMhatTol;
        }
        pass = pass && found_lo && found_hi;
        per_seed.push_back({{"seed", seed},
                            {"estimates", pts},
                            {"low_coin_found", found_lo},
                            {"high_coin_found", found_hi}});
    }
    sb.j["per_seed"] = per_seed;
    sb.j["flags"] = {{"tol", kMhatTol}, {"min_count", cfg.min_count}};
    return sb.finish(cfg, pass);
}

// ------------------------------------------------- fierens-fine-grid

ScenarioResult run_fierens_fine(const ExperimentConfig& cfg) {
    SummaryBuilder sb(cfg);
    const std::vector<std::string> pool = {"all",     "mod:2,1", "mod:2,0", "bit:1,0",
                                           "bit:1,1", "bit:2,0", "bit:2,1", "mod:4,1"};
    bool pass = true;
    nlohmann::json cells = nlohmann::json::array();
    std::uint64_t cell_id = 0;
    CsvWriter csv(scenario_dir(cfg) + "/cells.csv");
    csv.row("k", "stream", "num_rules", "n", "eps", "m", "bound", "empirical", "std_error", "ok");

    for (std::size_t k : {2u, 4u}) {
        std::vector<std::unique_ptr<MeasureStream>> streams;
        if (k == 2) {
            streams.push_back(constant_stream(coin(1.0 / 3.0)));
            streams.push_back(cycle_stream({coin(1.0 / 3.0), coin(2.0 / 3.0)}));
        } else {
            streams.push_back(constant_stream(make_measure({0.4, 0.3, 0.2, 0.1})));
            streams.push_back(cycle_stream(
                {make_measure({0.4, 0.3, 0.2, 0.1}), make_measure({0.1, 0.2, 0.3, 0.4})}));
        }
        for (auto& stream : streams) {
            for (std::size_t num_rules : {1u, 4u, 8u}) {
                std::vector<SelectionRule> rules;
                for (std::size_t r = 0; r < num_rules; ++r)
                    rules.push_back(SelectionRule::parse(pool[r]));
                for (std::uint64_t n : {std::uint64_t(1000), std::uint64_t(10000)}) {
                    const std::uint64_t m = n / 2;
                    for (double eps : {0.05, 0.1}) {
                        const Seed seed{cfg.seeds.front() + 7919 * cell_id};
                        ConcentrationResult res =
                            check_concentration(*stream, rules, n, m, eps, cfg.trials, seed);
                        const bool ok = res.within_bound();
                        pass = pass && ok;
                        csv.row(k, stream->describe(), num_rules, n, format_double(eps), m,
                                format_double(res.bound), format_double(res.empirical),
                                format_double(res.std_error), ok ? 1 : 0);
                        cells.push_back({{"k", k},
                                         {"stream", stream->describe()},
                                         {"num_rules", num_rules},
                                         {"n", n},
                                         {"eps", eps},
                                         {"m", m},
                                         {"bound", res.bound},
                                         {"empirical", res.empirical},
                                         {"std_error", res.std_error},
                                         {"ok", ok}});
                        ++cell_id;
                    }
                }
            }
        }
    }
    sb.artifacts.push_back(scenario_dir(cfg) + "/cells.csv");
    sb.j["cells"] = cells;
    sb.j["flags"] = {{"trials", cfg.trials}, {"tolerance", "bound + 3 standard errors"}};
    return sb.finish(cfg, pass);
}

}  // namespace

KappaFn parse_kappa(const std::string& name) {
    KappaFn kf;
    if (name == "sqrt") {
        kf.kind = KappaFn::Kind::Sqrt;
    } else if (name == "identity" || name == "linear") {
        kf.kind = KappaFn::Kind::Identity;
    } else {
        throw ConfigError("kappa", "unknown kappa spec '" + name + "' (use sqrt or identity)");
    }
    return kf;
}

std::vector<ScenarioInfo> list_scenarios() {
    return {
        {"alternating-coins",
         "Two coins with distinct biases in strict alternation: the aggregate frequency settles "
         "at the midpoint while the odd/even subsequences expose the two biases."},
        {"weird-coin",
         "Coin choice keyed to the second-highest bit of the step index; prefix frequencies "
         "oscillate forever between 4/9 and 1/2 instead of converging."},
        {"theorem1-singleton",
         "Builder run whose running averages converge to a single interior point of the "
         "simplex, with the per-step excursion bound checked at every emission."},
        {"theorem1-segment",
         "Builder run whose running averages cluster exactly on a target segment."},
        {"theorem1-vpath",
         "Builder run whose running averages cluster on a two-segment V-shaped path."},
        {"slow-divergence",
         "Adversarially slowed builder under which the windowed min/max estimator never "
         "settles: its trace reaches both interval endpoints and its span stays wide."},
        {"mhat-recovery",
         "Union-of-subsequence-frequency estimate recovering both generating coins of the "
         "alternating stream from outcome data alone."},
        {"fierens-fine-grid",
         "Monte-Carlo grid validating the concentration bound for subsequence frequency "
         "deviations across rule sets, horizons and tolerances."},
    };
}

void validate(const ExperimentConfig& cfg) {
    bool known = false;
    for (const ScenarioInfo& s : list_scenarios()) known |= (s.id == cfg.scenario);
    if (!known) {
        std::string best;
        std::size_t best_d = SIZE_MAX;
        for (const ScenarioInfo& s : list_scenarios()) {
            const std::size_t d = edit_distance(cfg.scenario, s.id);
            if (d < best_d) {
                best_d = d;
                best = s.id;
            }
        }
        throw ConfigError("scenario",
                          "unknown scenario '" + cfg.scenario + "' (nearest match: " + best + ")");
    }
    if (cfg.seeds.empty()) throw ConfigError("seeds", "must be nonempty");
    if (cfg.kappa != "sqrt" && cfg.kappa != "identity" && cfg.kappa != "linear" &&
        !cfg.kappa.empty())
        throw ConfigError("kappa", "unknown kappa spec '" + cfg.kappa + "'");
    if (cfg.credal_set) {
        if (cfg.credal_set->empty()) throw ConfigError("credal_set", "must be nonempty");
        try {
            CredalSet m = credal_from_config(cfg);
            if (cfg.target_path) path_from_config(m, cfg);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("credal_set/target_path", e.what());
        }
    } else if (cfg.target_path) {
        throw ConfigError("target_path", "requires credal_set");
    }
    if (cfg.schedule) {
        try {
            cfg.schedule->validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError("schedule", e.what());
        }
    }
    for (const std::string& spec : cfg.rules) {
        try {
            SelectionRule::parse(spec);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("rules", e.what());
        }
    }
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    if (!j.contains("scenario")) throw ConfigError("scenario", "missing");
    cfg.scenario = j.at("scenario").get<std::string>();
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("seeds", cfg.seeds);
    get("horizon", cfg.horizon);
    get("burn_in", cfg.burn_in);
    get("log_stride", cfg.log_stride);
    get("out_dir", cfg.out_dir);
    get("kappa", cfg.kappa);
    get("rules", cfg.rules);
    get("min_count", cfg.min_count);
    get("trials", cfg.trials);
    if (j.contains("credal_set"))
        cfg.credal_set = j.at("credal_set").get<std::vector<std::vector<double>>>();
    if (j.contains("target_path"))
        cfg.target_path = j.at("target_path").get<std::vector<std::vector<double>>>();
    if (j.contains("schedule")) {
        ToleranceSchedule s;
        const auto& js = j.at("schedule");
        if (js.contains("eps_decay")) s.eps_decay = js.at("eps_decay").get<double>();
        if (js.contains("delta_decay")) s.delta_decay = js.at("delta_decay").get<double>();
        if (js.contains("zeta0")) s.zeta0 = js.at("zeta0").get<double>();
        if (js.contains("zeta_decay")) s.zeta_decay = js.at("zeta_decay").get<double>();
        cfg.schedule = s;
    }
    return cfg;
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["scenario"] = scenario;
    j["seeds"] = seeds;
    j["horizon"] = horizon;
    j["burn_in"] = burn_in;
    j["log_stride"] = log_stride;
    j["out_dir"] = out_dir;
    j["kappa"] = kappa;
    j["rules"] = rules;
    j["min_count"] = min_count;
    j["trials"] = trials;
    if (credal_set) j["credal_set"] = *credal_set;
    if (target_path) j["target_path"] = *target_path;
    if (schedule)
        j["schedule"] = {{"eps_decay", schedule->eps_decay},
                         {"delta_decay", schedule->delta_decay},
                         {"zeta0", schedule->zeta0},
                         {"zeta_decay", schedule->zeta_decay}};
    return j;
}

ScenarioResult run_scenario(const ExperimentConfig& user_cfg) {
    validate(user_cfg);
    ExperimentConfig cfg = merged(user_cfg);
    validate(cfg);
    std::filesystem::create_directories(scenario_dir(cfg));

    if (cfg.scenario == "alternating-coins") return run_alternating(cfg);
    if (cfg.scenario == "weird-coin") return run_weird_coin(cfg);
    if (cfg.scenario == "theorem1-singleton" || cfg.scenario == "theorem1-segment" ||
        cfg.scenario == "theorem1-vpath")
        return run_theorem1(cfg);
    if (cfg.scenario == "slow-divergence") return run_slow_divergence(cfg);
    if (cfg.scenario == "mhat-recovery") return run_mhat(cfg);
    if (cfg.scenario == "fierens-fine-grid") return run_fierens_fine(cfg);
    throw ConfigError("scenario", "unhandled scenario " + cfg.scenario);
}

}  // namespace iplab
