#include "streamsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>
#include <string>

#include "streamsim/random.hpp"
#include "streamsim/scenario.hpp"
#include "streamsim/text.hpp"

namespace streamsim::sim {

namespace {

void check(std::vector<std::string>& out, bool ok, const std::string& path,
           const std::string& message) {
    if (!ok) out.push_back(path + ": " + message);
}

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

std::vector<std::string> config_violations(const ScenarioConfig& c) {
    std::vector<std::string> v;

    check(v, c.slots >= 1, "slots", "must be >= 1");
    check(v, c.processing_delay_ms >= 0.0, "processing_delay_ms", "must be >= 0");
    check(v, c.noise.jitter >= 0.0 && c.noise.jitter < 1.0, "noise.jitter", "must be in [0,1)");
    check(v, in_unit_interval(c.noise.loss_jitter), "noise.loss_jitter", "must be in [0,1]");
    check(v, !c.recording.enabled || !c.recording.path.empty(), "recording.path",
          "must be set when recording is enabled");

    check(v, !c.interfaces.empty(), "interfaces", "at least one interface required");
    for (std::size_t i = 0; i < c.interfaces.size(); ++i) {
        const std::string path = "interfaces[" + std::to_string(i) + "]";
        const auto& base = c.interfaces[i].base;
        check(v, base.rtt_ms >= 0.0, path + ".rtt_ms", "must be >= 0");
        check(v, in_unit_interval(base.loss), path + ".loss", "must be in [0,1]");
        check(v, base.capacity_bps >= 0.0, path + ".capacity_mbps", "must be >= 0");
        check(v, c.interfaces[i].towers >= 0, path + ".towers", "must be >= 0");
        // Jitter only shrinks RTT by (1 - jitter); the floor must stay positive.
        check(v, base.rtt_ms * (1.0 - c.noise.jitter) + c.processing_delay_ms > 0.0,
              path + ".rtt_ms", "effective latency rtt + processing delay must stay > 0");
    }

    const double mix_sum = c.traffic_mix.video + c.traffic_mix.audio + c.traffic_mix.text;
    check(v, in_unit_interval(c.traffic_mix.video), "traffic_mix.video", "must be in [0,1]");
    check(v, in_unit_interval(c.traffic_mix.audio), "traffic_mix.audio", "must be in [0,1]");
    check(v, in_unit_interval(c.traffic_mix.text), "traffic_mix.text", "must be in [0,1]");
    check(v, std::abs(mix_sum - 1.0) <= 1e-9, "traffic_mix",
          "fractions sum to " + text::format_double(mix_sum) + ", expected 1");

    for (std::size_t i = 0; i < c.congestion_windows.size(); ++i) {
        const std::string path = "congestion_windows[" + std::to_string(i) + "]";
        const auto& w = c.congestion_windows[i];
        check(v, w.start_slot >= 0 && w.start_slot < w.end_slot && w.end_slot <= c.slots, path,
              "window must satisfy 0 <= start_slot < end_slot <= slots");
        check(v, in_unit_interval(w.speed_drop), path + ".speed_drop", "must be in [0,1]");
        check(v, w.rtt_spike_ms >= 0.0, path + ".rtt_spike_ms", "must be >= 0");
        check(v, in_unit_interval(w.loss_add), path + ".loss_add", "must be in [0,1]");
    }

    for (std::size_t i = 0; i < c.districts.size(); ++i) {
        const std::string path = "districts[" + std::to_string(i) + "]";
        const auto& d = c.districts[i];
        check(v, d.density_per_km2 >= 0.0, path + ".density_per_km2", "must be >= 0");
        check(v, d.area_km2 > 0.0, path + ".area_km2", "must be > 0");
        check(v, d.towers >= 0, path + ".towers", "must be >= 0");
    }

    check(v, c.social.population >= 0.0, "social.population", "must be >= 0");
    check(v, in_unit_interval(c.social.penetration), "social.penetration", "must be in [0,1]");
    check(v, c.social.platforms_per_user >= 0.0, "social.platforms_per_user", "must be >= 0");

    check(v, c.offload.ap_count >= 0, "offload.ap_count", "must be >= 0");
    check(v, c.offload.avg_offload_mb >= 0.0, "offload.avg_offload_mb", "must be >= 0");
    check(v, c.offload.generated_mb >= 0.0, "offload.generated_mb", "must be >= 0");

    check(v, c.cost.unit_cost_per_mb >= 0.0, "cost.unit_cost_per_mb", "must be >= 0");
    check(v, in_unit_interval(c.cost.handled_fraction), "cost.handled_fraction",
          "must be in [0,1]");
    check(v, in_unit_interval(c.cost.reduction), "cost.reduction", "must be in [0,1]");

    check(v, c.video.width > 0, "video.width", "must be > 0");
    check(v, c.video.height > 0, "video.height", "must be > 0");
    check(v, c.video.frame_rate > 0.0, "video.frame_rate", "must be > 0");
    check(v, c.video.color_depth > 0, "video.color_depth", "must be > 0");

    check(v, c.compression.eta >= 1.0, "compression.eta", "must be >= 1");
    check(v, in_unit_interval(c.compression.overhead), "compression.overhead",
          "must be in [0,1]");
    check(v, in_unit_interval(c.compression.retransmission_loss),
          "compression.retransmission_loss", "must be in [0,1]");

    check(v, c.correction.gamma >= 0.0, "correction.gamma", "must be >= 0");
    check(v, c.correction.beta >= 0.0, "correction.beta", "must be >= 0");
    check(v, in_unit_interval(c.correction.nack_rate), "correction.nack_rate",
          "must be in [0,1]");

    check(v, c.gop.g_min > 0 && c.gop.g_min <= c.gop.g_max, "gop",
          "requires 0 < g_min <= g_max");
    check(v, c.gop.frame_rate > 0.0, "gop.frame_rate", "must be > 0");
    check(v, c.gop.t_buffer_ms >= 0.0, "gop.t_buffer_ms", "must be >= 0");
    check(v, c.gop.t_max_ms >= 0.0, "gop.t_max_ms", "must be >= 0");

    check(v, in_unit_interval(c.thresholds.max_loss_optimal), "thresholds.max_loss_optimal",
          "must be in [0,1]");
    check(v, c.thresholds.max_rtt_optimal_ms > 0.0, "thresholds.max_rtt_optimal_ms",
          "must be > 0");
    check(v, c.thresholds.low_latency_bitrate_bps <= c.thresholds.high_quality_bitrate_bps,
          "thresholds.low_latency_bitrate_mbps", "must not exceed high_quality_bitrate_mbps");
    check(v, c.thresholds.high_quality_bitrate_bps > 0.0,
          "thresholds.high_quality_bitrate_mbps", "must be > 0");
    check(v, c.thresholds.low_latency_bitrate_bps > 0.0, "thresholds.low_latency_bitrate_mbps",
          "must be > 0");
    check(v,
          c.thresholds.congestion_tmax_factor > 0.0 && c.thresholds.congestion_tmax_factor <= 1.0,
          "thresholds.congestion_tmax_factor", "must be in (0,1]");

    check(v, c.reliability.alpha >= 0.0, "reliability.alpha", "must be >= 0");
    return v;
}

void validate(const ScenarioConfig& config) {
    const std::vector<std::string> violations = config_violations(config);
    if (violations.empty()) return;
    std::ostringstream msg;
    msg << "invalid scenario";
    if (!config.name.empty()) msg << " '" << config.name << "'";
    msg << ":";
    for (const auto& violation : violations) msg << "\n  " << violation;
    throw ConfigValidationError(msg.str());
}

// ---------------------------------------------------------------------------
// Trace generation
// ---------------------------------------------------------------------------

namespace {

// Draw channels for the position-keyed jitter.
enum JitterChannel : std::uint64_t { kRtt = 0, kCapacity = 1, kLoss = 2 };

}  // namespace

Trace generate_trace(const ScenarioConfig& config) {
    validate(config);
    const double j = config.noise.jitter;
    const double lj = config.noise.loss_jitter;

    Trace trace(static_cast<std::size_t>(config.slots));
    for (std::int64_t s = 0; s < config.slots; ++s) {
        TraceRow& row = trace[static_cast<std::size_t>(s)];
        row.resize(config.interfaces.size());
        for (std::size_t i = 0; i < config.interfaces.size(); ++i) {
            const models::LinkMetrics& base = config.interfaces[i].base;
            const auto slot = static_cast<std::uint64_t>(s);

            const double rtt_factor = 1.0 - j + 2.0 * j * keyed_unit(config.seed, slot, i, kRtt);
            const double cap_factor =
                1.0 - j + 2.0 * j * keyed_unit(config.seed, slot, i, kCapacity);
            const double loss_shift = -lj + 2.0 * lj * keyed_unit(config.seed, slot, i, kLoss);

            double rtt_ms = base.rtt_ms * rtt_factor;
            double capacity_bps = base.capacity_bps * cap_factor;
            double loss = base.loss + loss_shift;

            for (const CongestionWindow& w : config.congestion_windows) {
                if (s >= w.start_slot && s < w.end_slot) {
                    capacity_bps *= 1.0 - w.speed_drop;
                    rtt_ms += w.rtt_spike_ms;
                    loss += w.loss_add;
                }
            }
            row[i] = {rtt_ms, std::clamp(loss, 0.0, 1.0), capacity_bps};
        }
    }
    return trace;
}

// ---------------------------------------------------------------------------
// Per-slot stepping
// ---------------------------------------------------------------------------

namespace {

// Volume and cost bookkeeping shared by the adaptive and static paths.
void fill_volumes(SlotRecord& rec, const ScenarioConfig& config) {
    rec.generated_mb = config.offload.generated_mb;
    rec.offloaded_mb = scenario::offloaded_volume(config.offload);
    rec.carried_mb = rec.generated_mb - rec.offloaded_mb;
    rec.cost_units = scenario::baseline_cost(rec.carried_mb, config.cost);
}

double source_chain_net_bps(const ScenarioConfig& config) {
    return models::net_bitrate(
        models::effective_bitrate(models::raw_bitrate(config.video), config.compression),
        config.compression);
}

SlotRecord static_baseline_step(std::int64_t slot_index, const TraceRow& row,
                                const ScenarioConfig& config) {
    if (row.size() != config.interfaces.size())
        throw SimError("trace row does not cover all configured interfaces");
    const models::LinkMetrics& link = row[0];
    SlotRecord rec;
    rec.slot_index = slot_index;
    rec.interface_chosen = 0;
    rec.condition = controller::classify_condition(link, config.thresholds);
    rec.rtt_ms = link.rtt_ms;
    rec.loss = link.loss;
    rec.l_combined = models::combined_loss(
        models::fec_effective_loss(link.loss, config.correction), config.correction);
    rec.gop_size = config.gop.g_max;
    rec.quality_tier = controller::QualityTier::high_quality;
    rec.net_bitrate_bps = std::min(source_chain_net_bps(config),
                                   link.capacity_bps * (1.0 - rec.l_combined));
    rec.latency_ms = models::buffering_latency_ms(config.gop.g_max, config.gop) +
                     models::effective_latency_ms(link, config.processing_delay_ms);
    fill_volumes(rec, config);
    return rec;
}

}  // namespace

SlotRecord step_slot(std::int64_t slot_index, const TraceRow& row,
                     const ScenarioConfig& config) {
    if (row.size() != config.interfaces.size())
        throw SimError("trace row does not cover all configured interfaces");

    models::SelectionContext ctx{row, config.processing_delay_ms};
    const controller::ControlDecision decision =
        controller::control_step(ctx, config.video, config.compression, config.correction,
                                 config.gop, config.thresholds);
    const models::LinkMetrics& link = row[decision.chosen_interface];

    SlotRecord rec;
    rec.slot_index = slot_index;
    rec.interface_chosen = decision.chosen_interface;
    rec.condition = decision.condition;
    rec.rtt_ms = link.rtt_ms;
    rec.loss = link.loss;
    rec.l_combined = models::combined_loss(
        models::fec_effective_loss(link.loss, config.correction), config.correction);
    rec.gop_size = decision.settings.gop_size;
    rec.quality_tier = decision.settings.quality_tier;
    rec.net_bitrate_bps = decision.predicted_net_bitrate_bps;
    rec.latency_ms = decision.predicted_latency_ms;
    fill_volumes(rec, config);
    return rec;
}

// ---------------------------------------------------------------------------
// Frame journal
// ---------------------------------------------------------------------------

std::vector<FrameJournalEntry> record_frames(const SlotRecord& record,
                                             const ScenarioConfig& config) {
    if (!config.recording.enabled) return {};
    const double frame_rate = config.video.frame_rate;
    const int frames_per_slot = static_cast<int>(std::llround(frame_rate));

    std::vector<FrameJournalEntry> entries;
    entries.reserve(static_cast<std::size_t>(frames_per_slot));
    for (int f = 0; f < frames_per_slot; ++f) {
        FrameJournalEntry e;
        e.slot_index = record.slot_index;
        e.frame_index = f;
        e.timestamp_ms = static_cast<double>(record.slot_index) * 1000.0 + f * 1000.0 / frame_rate;
        e.encoded_size_bits = record.net_bitrate_bps / frame_rate;
        e.quality_tier = record.quality_tier;
        e.gop_position = record.gop_size > 0 ? f % record.gop_size : 0;
        entries.push_back(e);
    }
    return entries;
}

FrameJournalSink::FrameJournalSink(const std::string& path) : path_(path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (f == nullptr) throw JournalIoError("frame journal: cannot open '" + path + "' for writing");
    stream_ = f;
}

FrameJournalSink::~FrameJournalSink() {
    if (stream_ != nullptr) std::fclose(static_cast<std::FILE*>(stream_));
}

void FrameJournalSink::write(const FrameJournalEntry& entry) {
    if (stream_ == nullptr || finalized_)
        throw JournalIoError("frame journal: write after finalize on '" + path_ + "'");
    const std::string line = std::to_string(entry.slot_index) + "," +
                             std::to_string(entry.frame_index) + "," +
                             text::format_double(entry.timestamp_ms) + "," +
                             text::format_double(entry.encoded_size_bits) + "," +
                             controller::to_string(entry.quality_tier) + "," +
                             std::to_string(entry.gop_position) + "\n";
    if (std::fwrite(line.data(), 1, line.size(), static_cast<std::FILE*>(stream_)) != line.size())
        throw JournalIoError("frame journal: write failed on '" + path_ + "'");
    ++total_frames_;
    total_bits_ += entry.encoded_size_bits;
}

void FrameJournalSink::finalize() {
    if (finalized_) return;
    auto* f = static_cast<std::FILE*>(stream_);
    const std::string footer = "#footer total_frames=" + std::to_string(total_frames_) +
                               " total_bytes=" + text::format_double(total_bits_ / 8.0) + "\n";
    if (std::fwrite(footer.data(), 1, footer.size(), f) != footer.size() || std::fflush(f) != 0)
        throw JournalIoError("frame journal: finalize failed on '" + path_ + "'");
    finalized_ = true;
}

// ---------------------------------------------------------------------------
// Run and aggregate
// ---------------------------------------------------------------------------

MetricsReport aggregate(const std::vector<SlotRecord>& journal, const ScenarioConfig& config) {
    MetricsReport report;
    if (journal.empty()) return report;

    const auto n = static_cast<double>(journal.size());
    double total_generated = 0.0;
    double total_offloaded = 0.0;
    double latency_sum = 0.0;
    double throughput_sum_mbps = 0.0;
    double baseline_sum = 0.0;
    double reduced_sum = 0.0;
    std::vector<double> latencies;
    latencies.reserve(journal.size());

    for (const SlotRecord& rec : journal) {
        total_generated += rec.generated_mb;
        total_offloaded += rec.offloaded_mb;
        latency_sum += rec.latency_ms;
        latencies.push_back(rec.latency_ms);
        throughput_sum_mbps += rec.net_bitrate_bps / 1e6;
        const double baseline = scenario::baseline_cost(rec.generated_mb, config.cost);
        baseline_sum += baseline;
        reduced_sum += scenario::reduced_cost(baseline, config.cost);
        if (rec.condition == controller::NetworkCondition::optimal)
            ++report.condition_breakdown.optimal;
        else
            ++report.condition_breakdown.congested;
    }

    report.offload_ratio = total_generated > 0.0 ? total_offloaded / total_generated : 0.0;
    report.total_offloaded_mb = total_offloaded;
    report.baseline_cost_units = baseline_sum / n;
    report.reduced_cost_units = reduced_sum / n;
    report.mean_latency_ms = latency_sum / n;
    report.mean_throughput_mbps = throughput_sum_mbps / n;

    std::sort(latencies.begin(), latencies.end());
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * n));
    report.p95_latency_ms = latencies[std::min(rank > 0 ? rank - 1 : 0, latencies.size() - 1)];
    return report;
}

namespace {

enum class StepMode { adaptive, static_baseline };

RunResult execute(const ScenarioConfig& config, const Trace& trace, StepMode mode,
                  bool honor_recording) {
    RunResult result;
    result.journal.reserve(trace.size());

    std::unique_ptr<FrameJournalSink> sink;
    if (honor_recording && config.recording.enabled)
        sink = std::make_unique<FrameJournalSink>(config.recording.path);

    for (std::int64_t s = 0; s < static_cast<std::int64_t>(trace.size()); ++s) {
        try {
            const TraceRow& row = trace[static_cast<std::size_t>(s)];
            SlotRecord rec = mode == StepMode::adaptive
                                 ? step_slot(s, row, config)
                                 : static_baseline_step(s, row, config);
            if (sink) {
                for (const FrameJournalEntry& entry : record_frames(rec, config))
                    sink->write(entry);
            }
            result.journal.push_back(rec);
        } catch (const JournalIoError&) {
            throw;
        } catch (const std::exception& e) {
            throw SimError("slot " + std::to_string(s) + ": " + e.what());
        }
    }
    if (sink) sink->finalize();

    result.report = aggregate(result.journal, config);
    return result;
}

}  // namespace

RunResult run(const ScenarioConfig& config) {
    const Trace trace = generate_trace(config);  // validates the config
    return execute(config, trace, StepMode::adaptive, true);
}

RunResult run_on_trace(const ScenarioConfig& config, const Trace& trace) {
    validate(config);
    return execute(config, trace, StepMode::adaptive, false);
}

RunResult run_static_baseline(const ScenarioConfig& config, const Trace& trace) {
    validate(config);
    return execute(config, trace, StepMode::static_baseline, false);
}

RunResult compare_baseline(const ScenarioConfig& config) {
    const Trace trace = generate_trace(config);
    RunResult adaptive = execute(config, trace, StepMode::adaptive, false);
    const RunResult baseline = execute(config, trace, StepMode::static_baseline, false);

    Comparison comparison;
    comparison.baseline_mean_latency_ms = baseline.report.mean_latency_ms;
    comparison.latency_delta_ms =
        baseline.report.mean_latency_ms - adaptive.report.mean_latency_ms;
    comparison.throughput_gain_fraction =
        baseline.report.mean_throughput_mbps > 0.0
            ? (adaptive.report.mean_throughput_mbps - baseline.report.mean_throughput_mbps) /
                  baseline.report.mean_throughput_mbps
            : 0.0;
    adaptive.report.comparison = comparison;
    return adaptive;
}

}  // namespace streamsim::sim
