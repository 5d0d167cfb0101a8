// sim.hpp - Deterministic time-slotted simulation engine.
//
// One slot = one second of constant conditions and one control decision.
// generate_trace derives per-slot link metrics from the scenario (seeded
// jitter + congestion windows), step_slot drives the controller and the
// volume/cost bookkeeping, run executes all slots and aggregates the
// metrics report. Everything is a pure function of (config, seed): two runs
// of the same scenario are byte-identical.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "streamsim/config.hpp"
#include "streamsim/controller.hpp"
#include "streamsim/models.hpp"

namespace streamsim::sim {

// Frame journal write failure; aborts the run.
struct JournalIoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Slot failure wrapper; carries the slot index in the message.
struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Per-slot journal row. Conservation holds exactly:
// generated_mb = offloaded_mb + carried_mb.
struct SlotRecord {
    std::int64_t slot_index = 0;
    std::size_t interface_chosen = 0;
    controller::NetworkCondition condition = controller::NetworkCondition::optimal;
    double rtt_ms = 0.0;           // chosen link, this slot
    double loss = 0.0;             // chosen link, this slot
    double l_combined = 0.0;       // loss after FEC + NACK
    int gop_size = 0;              // frames
    controller::QualityTier quality_tier = controller::QualityTier::high_quality;
    double net_bitrate_bps = 0.0;  // predicted deliverable bitrate
    double latency_ms = 0.0;       // buffering + effective link latency
    double generated_mb = 0.0;
    double offloaded_mb = 0.0;
    double carried_mb = 0.0;       // cellular remainder
    double cost_units = 0.0;       // pricing on the carried volume
};

struct FrameJournalEntry {
    std::int64_t slot_index = 0;
    int frame_index = 0;
    double timestamp_ms = 0.0;
    double encoded_size_bits = 0.0;  // net_bitrate_bps / frame_rate
    controller::QualityTier quality_tier = controller::QualityTier::high_quality;
    int gop_position = 0;
};

struct ConditionBreakdown {
    std::int64_t optimal = 0;
    std::int64_t congested = 0;
};

// Adaptive-vs-static deltas, populated by compare_baseline.
struct Comparison {
    double baseline_mean_latency_ms = 0.0;
    double latency_delta_ms = 0.0;          // static minus adaptive; positive = saving
    double throughput_gain_fraction = 0.0;  // (adaptive - static) / static
};

// Aggregated run summary. Every field is a deterministic fold over the
// slot journal; baseline/reduced costs are per-slot means priced on the
// generated volume.
struct MetricsReport {
    double offload_ratio = 0.0;
    double total_offloaded_mb = 0.0;
    double baseline_cost_units = 0.0;  // mean units/slot
    double reduced_cost_units = 0.0;   // mean units/slot
    double mean_latency_ms = 0.0;
    double p95_latency_ms = 0.0;       // nearest-rank percentile
    double mean_throughput_mbps = 0.0;
    ConditionBreakdown condition_breakdown;
    std::optional<Comparison> comparison;
};

using TraceRow = std::vector<models::LinkMetrics>;  // one LinkMetrics per interface
using Trace = std::vector<TraceRow>;                // indexed by slot

struct RunResult {
    std::vector<SlotRecord> journal;
    MetricsReport report;
};

// Per-slot, per-interface link metrics: base values with seeded jitter,
// degraded inside congestion windows. Identical seed, identical trace.
Trace generate_trace(const ScenarioConfig& config);

// One slot: control decision, volumes, cost. Conservation holds exactly.
SlotRecord step_slot(std::int64_t slot_index, const TraceRow& row, const ScenarioConfig& config);

// Frame entries for one slot (frame_rate entries, one second of video), or
// none when recording is disabled.
std::vector<FrameJournalEntry> record_frames(const SlotRecord& record,
                                             const ScenarioConfig& config);

// Newline-delimited frame journal with a totals footer.
// Line: slot,frame,timestamp_ms,encoded_size_bits,quality_tier,gop_position
// Footer: #footer total_frames=<n> total_bytes=<b>
class FrameJournalSink {
public:
    explicit FrameJournalSink(const std::string& path);
    ~FrameJournalSink();
    FrameJournalSink(const FrameJournalSink&) = delete;
    FrameJournalSink& operator=(const FrameJournalSink&) = delete;

    void write(const FrameJournalEntry& entry);
    void finalize();  // writes the footer; idempotent

    std::int64_t total_frames() const { return total_frames_; }
    double total_bits() const { return total_bits_; }

private:
    std::string path_;
    void* stream_ = nullptr;  // FILE*
    std::int64_t total_frames_ = 0;
    double total_bits_ = 0.0;
    bool finalized_ = false;
};

// Fold a slot journal into the metrics report.
MetricsReport aggregate(const std::vector<SlotRecord>& journal, const ScenarioConfig& config);

// Full scenario run: validate, trace, slots in order, aggregate. Writes the
// frame journal when recording is enabled.
RunResult run(const ScenarioConfig& config);

// Adaptive run over a precomputed trace (no recording side effects).
RunResult run_on_trace(const ScenarioConfig& config, const Trace& trace);

// Static comparator: fixed high-quality tier, GOP pinned to g_max,
// interface pinned to index 0, same trace.
RunResult run_static_baseline(const ScenarioConfig& config, const Trace& trace);

// Runs adaptive and static on the identical trace and reports the deltas
// in the adaptive report's comparison block.
RunResult compare_baseline(const ScenarioConfig& config);

}  // namespace streamsim::sim
