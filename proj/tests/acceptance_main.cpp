// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances are pinned in code next to each check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "streamsim/config_io.hpp"
#include "streamsim/controller.hpp"
#include "streamsim/models.hpp"
#include "streamsim/report.hpp"
#include "streamsim/scenario.hpp"
#include "streamsim/sim.hpp"

using namespace streamsim;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail = "") {
    std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", id, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

bool close_rel(double got, double want, double rel) {
    return std::abs(got - want) <= rel * std::abs(want);
}

// criterion 1: bitrate chain goldens
bool bitrate_chain() {
    const models::CompressionParams params{150.0, 0.10, 0.05};
    const double net =
        models::net_bitrate(models::effective_bitrate(1500e6, params), params);
    if (!close_rel(net, 8.55e6, 1e-9)) return false;
    return models::raw_bitrate({1920, 1080, 30.0, 24}) == 1'492'992'000.0;
}

// criterion 2: connectivity probability vs the worked value
bool connectivity() {
    const double p = models::connectivity_probability(0.05, {10.0});
    return std::abs(p - 0.6065) <= 1e-4 && std::abs(p - 0.606531) <= 1e-6;
}

// criterion 3: interface selection distribution and argmax
bool interface_selection() {
    models::SelectionContext ctx{{{20.0, 0.0, 0.0}, {70.0, 0.0, 0.0}}, 5.0};
    const auto p = models::selection_distribution(ctx);
    if (std::abs(p[0] - 0.75) > 1e-9 || std::abs(p[1] - 0.25) > 1e-9) return false;
    return models::select_interface(ctx) == 0;
}

// criterion 4: FEC residual loss vs the worked value
bool fec_loss() {
    const double l_eff = models::fec_effective_loss(0.05, {2.0, 0.0, 0.0});
    return std::abs(l_eff - 0.0333) <= 1e-4 && std::abs(l_eff - 0.033333) <= 1e-5;
}

// criterion 5: demography and cost goldens, exact
bool demography_costs() {
    if (scenario::district_population({"dhanmondi", 75000.0, 5.0, 40}) != 375000.0) return false;
    if (scenario::persons_per_tower(375000.0, 40) != 9375.0) return false;
    if (scenario::active_connections({21'000'000.0, 0.9, 4.0}) != 75'600'000.0) return false;
    const scenario::CostModel cost{2.5, 0.9, 0.15};
    const double baseline = scenario::baseline_cost(5000.0, cost);
    if (baseline != 11250.0) return false;
    const double reduced = scenario::reduced_cost(baseline, cost);
    if (reduced != 9562.5) return false;
    if (scenario::display_cost_units(reduced) != 9563) return false;
    if (scenario::offloaded_volume({50, 70.0, 5000.0}) != 3500.0) return false;
    return scenario::offload_ratio(3500.0, 5000.0) == 0.70;
}

// criterion 6: GOP property suite plus the worked clamp cases
bool gop_properties() {
    if (models::optimal_gop({500.0, 200.0, 30.0, 5, 60}) != 9) return false;
    if (models::optimal_gop({300.0, 200.0, 30.0, 5, 60}) != 5) return false;
    if (models::optimal_gop({10000.0, 0.0, 30.0, 5, 60}) != 60) return false;

    std::mt19937 gen(20250810);
    std::uniform_real_distribution<double> time_dist(0.0, 5000.0);
    std::uniform_real_distribution<double> rate_dist(1.0, 120.0);
    std::uniform_int_distribution<int> gop_dist(1, 120);
    for (int i = 0; i < 1500; ++i) {
        models::GopParams params;
        params.t_buffer_ms = time_dist(gen);
        params.frame_rate = rate_dist(gen);
        params.g_min = gop_dist(gen);
        params.g_max = params.g_min + gop_dist(gen);
        double t1 = time_dist(gen);
        double t2 = time_dist(gen);
        if (t1 > t2) std::swap(t1, t2);
        params.t_max_ms = t1;
        const int gop1 = models::optimal_gop(params);
        params.t_max_ms = t2;
        const int gop2 = models::optimal_gop(params);
        if (gop1 < params.g_min || gop1 > params.g_max) return false;
        if (gop2 < params.g_min || gop2 > params.g_max) return false;
        if (gop1 > gop2) return false;
    }
    return true;
}

// criterion 7: model property suite
bool model_properties() {
    std::mt19937 gen(424242);
    std::uniform_int_distribution<int> count_dist(1, 8);
    std::uniform_real_distribution<double> rtt_dist(0.5, 400.0);
    std::uniform_real_distribution<double> proc_dist(0.1, 30.0);
    std::uniform_real_distribution<double> scale_dist(0.01, 100.0);
    std::uniform_real_distribution<double> raw_dist(0.0, 1e10);
    std::uniform_real_distribution<double> eta_dist(1.0, 1000.0);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    std::uniform_real_distribution<double> beta_dist(0.0, 5.0);

    for (int i = 0; i < 1500; ++i) {
        // selection distribution: normalization, positivity, monotonicity,
        // scale invariance
        models::SelectionContext ctx;
        const int n = count_dist(gen);
        for (int k = 0; k < n; ++k) ctx.candidates.push_back({rtt_dist(gen), 0.0, 0.0});
        ctx.processing_delay_ms = proc_dist(gen);
        const auto p = models::selection_distribution(ctx);
        double sum = 0.0;
        for (double w : p) {
            if (w <= 0.0) return false;
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-9) return false;
        for (std::size_t a = 0; a < p.size(); ++a)
            for (std::size_t b = 0; b < p.size(); ++b)
                if (ctx.candidates[a].rtt_ms < ctx.candidates[b].rtt_ms && p[a] <= p[b])
                    return false;

        const double c = scale_dist(gen);
        models::SelectionContext scaled = ctx;
        scaled.processing_delay_ms *= c;
        for (auto& link : scaled.candidates) link.rtt_ms *= c;
        const auto q = models::selection_distribution(scaled);
        for (std::size_t k = 0; k < p.size(); ++k)
            if (std::abs(p[k] - q[k]) > 1e-9) return false;

        // bitrate chain monotonicity
        const models::CompressionParams comp{eta_dist(gen), frac(gen), frac(gen)};
        const double raw = raw_dist(gen);
        const double eff = models::effective_bitrate(raw, comp);
        const double net = models::net_bitrate(eff, comp);
        if (net > eff || eff > raw || net < 0.0) return false;

        // combined loss clamping
        const double l_eff = frac(gen);
        const double combined = models::combined_loss(l_eff, {0.0, beta_dist(gen), frac(gen)});
        if (combined < 0.0 || combined > l_eff) return false;
    }
    return true;
}

// criterion 8: byte-identical csv journals for the default scenario, twice
bool determinism(double* elapsed_seconds) {
    const auto start = std::chrono::steady_clock::now();
    const sim::ScenarioConfig config = cli::default_scenario();
    const std::string a = cli::render_csv(config, sim::run(config));
    const std::string b = cli::render_csv(config, sim::run(config));
    *elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return a == b && *elapsed_seconds < 10.0;
}

// Independent aggregation fold used by criterion 9.
bool report_matches_fold(const sim::RunResult& result, const sim::ScenarioConfig& config) {
    const auto& journal = result.journal;
    if (journal.empty()) return false;
    double generated = 0.0, offloaded = 0.0, latency_sum = 0.0, throughput_sum = 0.0;
    double baseline_sum = 0.0, reduced_sum = 0.0;
    std::int64_t optimal = 0, congested = 0;
    std::vector<double> latencies;
    for (const auto& rec : journal) {
        generated += rec.generated_mb;
        offloaded += rec.offloaded_mb;
        latency_sum += rec.latency_ms;
        latencies.push_back(rec.latency_ms);
        throughput_sum += rec.net_bitrate_bps / 1e6;
        const double base =
            config.cost.handled_fraction * rec.generated_mb * config.cost.unit_cost_per_mb;
        baseline_sum += base;
        reduced_sum += base * (1.0 - config.cost.reduction);
        if (rec.condition == controller::NetworkCondition::optimal)
            ++optimal;
        else
            ++congested;
        if (rec.offloaded_mb + rec.carried_mb != rec.generated_mb) return false;
    }
    const double n = static_cast<double>(journal.size());
    std::sort(latencies.begin(), latencies.end());
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * n));
    const double p95 = latencies[std::min(rank - 1, latencies.size() - 1)];

    const sim::MetricsReport& r = result.report;
    return close_rel(r.offload_ratio, offloaded / generated, 1e-9) &&
           close_rel(r.total_offloaded_mb, offloaded, 1e-9) &&
           close_rel(r.baseline_cost_units, baseline_sum / n, 1e-9) &&
           close_rel(r.reduced_cost_units, reduced_sum / n, 1e-9) &&
           close_rel(r.mean_latency_ms, latency_sum / n, 1e-9) &&
           close_rel(r.p95_latency_ms, p95, 1e-9) &&
           close_rel(r.mean_throughput_mbps, throughput_sum / n, 1e-9) &&
           r.condition_breakdown.optimal == optimal && r.condition_breakdown.congested == congested;
}

// criterion 9: oracle aggregation on three scenarios
bool oracle_aggregation() {
    sim::ScenarioConfig base = cli::default_scenario();
    if (!report_matches_fold(sim::run(base), base)) return false;

    sim::ScenarioConfig quiet = base;
    quiet.congestion_windows.clear();
    if (!report_matches_fold(sim::run(quiet), quiet)) return false;

    sim::ScenarioConfig storm = base;
    storm.congestion_windows = {{0, storm.slots, 0.40, 60.0, 0.04}};
    return report_matches_fold(sim::run(storm), storm);
}

// criterion 10: paper-scale experiment on the default scenario
bool paper_scale() {
    const sim::ScenarioConfig config = cli::default_scenario();
    const sim::RunResult result = sim::run(config);
    return result.report.offload_ratio == 0.70 &&
           result.report.baseline_cost_units == 11250.0 &&
           result.report.reduced_cost_units == 9562.5;
}

// criterion 11: adaptive-vs-static properties (the paper's 25 ms / 10-15%
// figures have no defined baseline or trace; these are the substituted
// acceptance properties, with the figures kept as qualitative targets only)
bool adaptive_vs_static() {
    const sim::ScenarioConfig config = cli::default_scenario();
    const sim::RunResult compared = sim::compare_baseline(config);
    if (!compared.report.comparison) return false;
    const sim::Comparison& cmp = *compared.report.comparison;
    if (compared.report.mean_latency_ms > cmp.baseline_mean_latency_ms) return false;
    if (cmp.throughput_gain_fraction < 0.0) return false;

    // hand-constructed dominance trace: index 1 strictly better than index 0
    sim::ScenarioConfig dominance = cli::default_scenario();
    dominance.slots = 100;
    dominance.noise = {0.0, 0.0};
    dominance.congestion_windows = {{25, 50, 0.40, 60.0, 0.04}};
    dominance.interfaces = {
        {"slow", 0, {80.0, 0.05, 10e6}},
        {"fast", 0, {15.0, 0.005, 50e6}},
    };
    const sim::Trace trace = sim::generate_trace(dominance);
    const sim::RunResult adaptive = sim::run_on_trace(dominance, trace);
    const sim::RunResult baseline = sim::run_static_baseline(dominance, trace);
    for (const auto& rec : adaptive.journal)
        if (rec.interface_chosen != 1) return false;
    return adaptive.report.mean_latency_ms < baseline.report.mean_latency_ms &&
           adaptive.report.mean_throughput_mbps >= baseline.report.mean_throughput_mbps;
}

// criterion 12: stochastic selection frequencies match the analytic
// distribution within +/-0.02 over 10,000 seeded draws
bool stochastic_frequencies() {
    models::SelectionContext ctx{{{70.0, 0.0, 0.0}, {20.0, 0.0, 0.0}}, 5.0};
    const auto p = models::selection_distribution(ctx);  // [0.25, 0.75]
    RandomSource rng(1u);
    const int draws = 10000;
    std::vector<int> counts(p.size(), 0);
    for (int i = 0; i < draws; ++i)
        ++counts[models::select_interface(ctx, models::SelectionMode::stochastic, &rng)];
    for (std::size_t i = 0; i < p.size(); ++i)
        if (std::abs(counts[i] / static_cast<double>(draws) - p[i]) > 0.02) return false;
    return true;
}

}  // namespace

int main() {
    report(1, "bitrate chain goldens (8.55 Mbps, 1492992000 bits/s)", bitrate_chain());
    report(2, "connectivity probability 0.6065 within 1e-4", connectivity());
    report(3, "selection [0.75, 0.25] within 1e-9, argmax index 0", interface_selection());
    report(4, "FEC residual loss 0.0333 within 1e-4", fec_loss());
    report(5, "demography/cost goldens exact (375000, 9375, 75.6M, 11250, 9562.5, 3500, 0.70)",
           demography_costs());
    report(6, "GOP property suite (range + monotone, 1500 draws, clamp cases)", gop_properties());
    report(7, "model property suite (selection, chain, clamping, 1500 draws)",
           model_properties());

    double elapsed = 0.0;
    const bool deterministic = determinism(&elapsed);
    {
        char detail[64];
        std::snprintf(detail, sizeof(detail), "2x1000 slots in %.2fs", elapsed);
        report(8, "byte-identical csv journals for the default run", deterministic, detail);
    }

    report(9, "report fields equal an independent journal fold on 3 scenarios",
           oracle_aggregation());
    report(10, "default run: offload 0.70 exact, costs 11250 / 9562.5", paper_scale());
    report(11, "adaptive <= static latency, >= throughput; strict on dominance trace",
           adaptive_vs_static());
    report(12, "stochastic selection within +/-0.02 of analytic over 10k draws",
           stochastic_frequencies());

    if (g_failures == 0) {
        std::printf("acceptance: 12/12 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return 1;
}
