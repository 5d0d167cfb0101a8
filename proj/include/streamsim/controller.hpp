// controller.hpp - Per-slot adaptive transcoding control.
//
// Deterministic pipeline from measured link conditions to encoder settings,
// GOP size, and interface choice: select interface (lowest effective
// latency), classify the selected link, pick the tier, recompute the GOP.
// No state is kept between calls; identical inputs give identical decisions.

#pragma once

#include <cstddef>

#include "streamsim/models.hpp"

namespace streamsim::controller {

enum class NetworkCondition { optimal, congested };
enum class QualityTier { high_quality, low_latency };

inline const char* to_string(NetworkCondition c) {
    return c == NetworkCondition::optimal ? "optimal" : "congested";
}
inline const char* to_string(QualityTier t) {
    return t == QualityTier::high_quality ? "high_quality" : "low_latency";
}

struct EncoderSettings {
    QualityTier quality_tier = QualityTier::high_quality;
    double target_bitrate_bps = 0.0;
    int gop_size = 1;  // frames, within the configured [g_min, g_max]
};

// Classification thresholds and per-tier encoder targets. The defaults keep
// an undisturbed urban 4G link in the optimal band and push a 40%-degraded
// one into the congested band.
struct ControllerThresholds {
    double max_loss_optimal = 0.02;          // loss above this is congested
    double max_rtt_optimal_ms = 50.0;        // RTT above this is congested
    double high_quality_bitrate_bps = 10e6;  // encoder target, optimal tier
    double low_latency_bitrate_bps = 4e6;    // encoder target, congested tier
    double congestion_tmax_factor = 0.6;     // tightens t_max before GOP recomputation
};

struct ControlDecision {
    NetworkCondition condition = NetworkCondition::optimal;
    EncoderSettings settings;
    std::size_t chosen_interface = 0;
    double predicted_latency_ms = 0.0;      // buffering + effective link latency
    double predicted_net_bitrate_bps = 0.0; // min(source net chain, link delivery)
};

inline void validate_thresholds(const ControllerThresholds& t) {
    if (t.max_loss_optimal < 0.0 || t.max_loss_optimal > 1.0)
        throw std::invalid_argument("ControllerThresholds: max_loss_optimal must be in [0,1]");
    if (t.max_rtt_optimal_ms <= 0.0)
        throw std::invalid_argument("ControllerThresholds: max_rtt_optimal_ms must be > 0");
    if (t.low_latency_bitrate_bps > t.high_quality_bitrate_bps)
        throw std::invalid_argument(
            "ControllerThresholds: low_latency_bitrate_bps must not exceed "
            "high_quality_bitrate_bps");
    if (t.congestion_tmax_factor <= 0.0 || t.congestion_tmax_factor > 1.0)
        throw std::invalid_argument(
            "ControllerThresholds: congestion_tmax_factor must be in (0,1]");
}

// Optimal iff loss and RTT are both within their thresholds. No hysteresis;
// every slot is classified afresh.
inline NetworkCondition classify_condition(const models::LinkMetrics& link,
                                           const ControllerThresholds& thresholds) {
    validate_thresholds(thresholds);
    const bool optimal =
        link.loss <= thresholds.max_loss_optimal && link.rtt_ms <= thresholds.max_rtt_optimal_ms;
    return optimal ? NetworkCondition::optimal : NetworkCondition::congested;
}

// Encoder settings for a condition. Under congestion the latency budget is
// tightened by congestion_tmax_factor before the GOP is recomputed.
inline EncoderSettings settings_for(NetworkCondition condition, const models::GopParams& gop,
                                    const ControllerThresholds& thresholds) {
    validate_thresholds(thresholds);
    if (condition == NetworkCondition::optimal) {
        return {QualityTier::high_quality, thresholds.high_quality_bitrate_bps,
                models::optimal_gop(gop)};
    }
    models::GopParams tightened = gop;
    tightened.t_max_ms = gop.t_max_ms * thresholds.congestion_tmax_factor;
    return {QualityTier::low_latency, thresholds.low_latency_bitrate_bps,
            models::optimal_gop(tightened)};
}

// One control step: select the interface first, classify on the selected
// link's metrics, then derive settings and predictions.
//
// predicted_net_bitrate is min(source net chain, capacity x (1 - combined
// loss)) on the chosen link; the tier's target bitrate is the encoder
// request and does not cap the modeled wire throughput.
inline ControlDecision control_step(const models::SelectionContext& candidates,
                                    const models::VideoProfile& video,
                                    const models::CompressionParams& compression,
                                    const models::CorrectionParams& correction,
                                    const models::GopParams& gop,
                                    const ControllerThresholds& thresholds) {
    ControlDecision decision;
    decision.chosen_interface = models::select_interface(candidates);
    const models::LinkMetrics& link = candidates.candidates[decision.chosen_interface];

    decision.condition = classify_condition(link, thresholds);
    decision.settings = settings_for(decision.condition, gop, thresholds);

    decision.predicted_latency_ms =
        models::buffering_latency_ms(decision.settings.gop_size, gop) +
        models::effective_latency_ms(link, candidates.processing_delay_ms);

    const double chain_net_bps = models::net_bitrate(
        models::effective_bitrate(models::raw_bitrate(video), compression), compression);
    const double l_combined =
        models::combined_loss(models::fec_effective_loss(link.loss, correction), correction);
    decision.predicted_net_bitrate_bps =
        std::min(chain_net_bps, link.capacity_bps * (1.0 - l_combined));
    return decision;
}

}  // namespace streamsim::controller
