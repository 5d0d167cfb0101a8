// models.hpp - Closed-form streaming and link models.
//
// Pure functions over plain value types: the bitrate chain, link reliability,
// RTT-weighted interface selection, hybrid FEC/NACK loss, and GOP sizing.
// Canonical units throughout: bits/second for rates, milliseconds for times,
// dimensionless fractions in [0,1] for losses and percentages. Unit
// conversions happen at I/O boundaries only.
//
// Everything here is reentrant and safe to call concurrently.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "streamsim/random.hpp"

namespace streamsim::models {

// Raw frame geometry and rate feeding the bitrate chain.
struct VideoProfile {
    int width = 0;            // pixels
    int height = 0;           // pixels
    double frame_rate = 0.0;  // frames/second
    int color_depth = 0;      // bits/pixel
};

struct CompressionParams {
    double eta = 1.0;                  // compression factor, >= 1
    double overhead = 0.0;             // protocol overhead fraction in [0,1]
    double retransmission_loss = 0.0;  // retransmission loss fraction in [0,1]
};

// Per-interface network state: the simulator's unit of measurement.
struct LinkMetrics {
    double rtt_ms = 0.0;        // round-trip time
    double loss = 0.0;          // packet loss fraction in [0,1]
    double capacity_bps = 0.0;  // deliverable link capacity
};

struct ReliabilityParams {
    double alpha = 10.0;  // loss sensitivity, >= 0
};

// Candidate links plus the fixed processing delay added to every RTT.
struct SelectionContext {
    std::vector<LinkMetrics> candidates;
    double processing_delay_ms = 0.0;
};

struct CorrectionParams {
    double gamma = 0.0;      // FEC redundancy factor, >= 0
    double beta = 0.0;       // NACK retransmission efficiency, >= 0
    double nack_rate = 0.0;  // retransmission requests per packet, in [0,1]
};

struct GopParams {
    double t_max_ms = 0.0;     // maximum tolerable end-to-end latency
    double t_buffer_ms = 0.0;  // fixed buffering delay
    double frame_rate = 0.0;   // frames/second
    int g_min = 1;             // minimum GOP size, frames
    int g_max = 1;             // maximum GOP size, frames
};

enum class SelectionMode { deterministic, stochastic };

// --------------------------------------------------------------------------
// Bitrate chain
// --------------------------------------------------------------------------

// Uncompressed source bitrate: width x height x frame_rate x color_depth.
inline double raw_bitrate(const VideoProfile& p) {
    if (p.width <= 0 || p.height <= 0 || p.frame_rate <= 0.0 || p.color_depth <= 0)
        throw std::invalid_argument("raw_bitrate: VideoProfile fields must be strictly positive");
    return static_cast<double>(p.width) * static_cast<double>(p.height) *
           p.frame_rate * static_cast<double>(p.color_depth);
}

// Post-compression bitrate: raw / eta.
inline double effective_bitrate(double raw_bps, const CompressionParams& c) {
    if (raw_bps < 0.0)
        throw std::invalid_argument("effective_bitrate: raw bitrate must be >= 0");
    if (c.eta < 1.0)
        throw std::invalid_argument("effective_bitrate: eta must be >= 1");
    return raw_bps / c.eta;
}

// Wire bitrate after protocol overhead and retransmission losses.
inline double net_bitrate(double effective_bps, const CompressionParams& c) {
    if (effective_bps < 0.0)
        throw std::invalid_argument("net_bitrate: effective bitrate must be >= 0");
    if (c.overhead < 0.0 || c.overhead > 1.0)
        throw std::invalid_argument("net_bitrate: overhead must be in [0,1]");
    if (c.retransmission_loss < 0.0 || c.retransmission_loss > 1.0)
        throw std::invalid_argument("net_bitrate: retransmission_loss must be in [0,1]");
    return effective_bps * (1.0 - c.overhead) * (1.0 - c.retransmission_loss);
}

// --------------------------------------------------------------------------
// Reliability and interface selection
// --------------------------------------------------------------------------

// P(connected) = exp(-alpha * loss); 1 at zero loss, decays with loss.
inline double connectivity_probability(double loss, const ReliabilityParams& r) {
    if (loss < 0.0 || loss > 1.0)
        throw std::invalid_argument("connectivity_probability: loss must be in [0,1]");
    if (r.alpha < 0.0)
        throw std::invalid_argument("connectivity_probability: alpha must be >= 0");
    return std::exp(-r.alpha * loss);
}

inline double effective_latency_ms(const LinkMetrics& link, double processing_delay_ms) {
    if (link.rtt_ms < 0.0 || processing_delay_ms < 0.0)
        throw std::invalid_argument("effective_latency_ms: inputs must be >= 0");
    return link.rtt_ms + processing_delay_ms;
}

// Inverse-latency weights, normalized: P_i proportional to 1/(rtt_i + t_proc).
// Entries sum to 1 and are strictly positive.
inline std::vector<double> selection_distribution(const SelectionContext& ctx) {
    if (ctx.candidates.empty())
        throw std::invalid_argument("selection_distribution: at least one candidate required");
    std::vector<double> p;
    p.reserve(ctx.candidates.size());
    double total = 0.0;
    for (const auto& link : ctx.candidates) {
        const double t_eff = link.rtt_ms + ctx.processing_delay_ms;
        if (t_eff <= 0.0)
            throw std::invalid_argument(
                "selection_distribution: effective latency must be strictly positive");
        p.push_back(1.0 / t_eff);
        total += p.back();
    }
    for (auto& w : p) w /= total;
    return p;
}

// Deterministic mode returns the argmax of the selection distribution (ties
// break to the lowest index), computed as the argmin of effective latency so
// a zero-latency candidate is still selectable. Stochastic mode samples the
// distribution from the supplied source.
inline std::size_t select_interface(const SelectionContext& ctx,
                                    SelectionMode mode = SelectionMode::deterministic,
                                    RandomSource* randomness = nullptr) {
    if (ctx.candidates.empty())
        throw std::invalid_argument("select_interface: at least one candidate required");
    if (mode == SelectionMode::deterministic) {
        std::size_t best = 0;
        double best_latency = ctx.candidates[0].rtt_ms + ctx.processing_delay_ms;
        if (best_latency < 0.0)
            throw std::invalid_argument("select_interface: negative effective latency");
        for (std::size_t i = 1; i < ctx.candidates.size(); ++i) {
            const double t_eff = ctx.candidates[i].rtt_ms + ctx.processing_delay_ms;
            if (t_eff < 0.0)
                throw std::invalid_argument("select_interface: negative effective latency");
            if (t_eff < best_latency) {
                best = i;
                best_latency = t_eff;
            }
        }
        return best;
    }
    if (randomness == nullptr)
        throw std::invalid_argument("select_interface: stochastic mode requires a random source");
    const std::vector<double> p = selection_distribution(ctx);
    const double u = randomness->next_double();
    double cumulative = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        cumulative += p[i];
        if (u < cumulative) return i;
    }
    return p.size() - 1;  // cumulative sum fell short of 1 by rounding
}

// --------------------------------------------------------------------------
// Hybrid error correction
// --------------------------------------------------------------------------

// Residual loss after FEC: L * (1 - 1/(1+gamma)). Note this is zero at
// gamma=0 and grows with gamma, exactly as the model is written.
inline double fec_effective_loss(double loss, const CorrectionParams& c) {
    if (loss < 0.0 || loss > 1.0)
        throw std::invalid_argument("fec_effective_loss: loss must be in [0,1]");
    if (c.gamma < 0.0)
        throw std::invalid_argument("fec_effective_loss: gamma must be >= 0");
    return loss * (1.0 - 1.0 / (1.0 + c.gamma));
}

// Loss after NACK retransmissions, clamped into [0,1] since the raw
// subtraction can go negative.
inline double combined_loss(double l_eff, const CorrectionParams& c) {
    if (l_eff < 0.0 || l_eff > 1.0)
        throw std::invalid_argument("combined_loss: l_eff must be in [0,1]");
    if (c.beta < 0.0)
        throw std::invalid_argument("combined_loss: beta must be >= 0");
    if (c.nack_rate < 0.0 || c.nack_rate > 1.0)
        throw std::invalid_argument("combined_loss: nack_rate must be in [0,1]");
    return std::clamp(l_eff - c.beta * c.nack_rate, 0.0, 1.0);
}

// --------------------------------------------------------------------------
// Buffering and GOP sizing
// --------------------------------------------------------------------------

inline void validate_gop_params(const GopParams& g) {
    if (g.g_min <= 0 || g.g_min > g.g_max)
        throw std::invalid_argument("GopParams: requires 0 < g_min <= g_max");
    if (g.frame_rate <= 0.0)
        throw std::invalid_argument("GopParams: frame_rate must be > 0");
    if (g.t_buffer_ms < 0.0 || g.t_max_ms < 0.0)
        throw std::invalid_argument("GopParams: t_buffer_ms and t_max_ms must be >= 0");
}

// Total buffering latency: t_buffer + gop_size / frame_rate, in ms.
inline double buffering_latency_ms(int gop_size, const GopParams& g) {
    if (gop_size < 0)
        throw std::invalid_argument("buffering_latency_ms: gop_size must be >= 0");
    if (g.frame_rate <= 0.0)
        throw std::invalid_argument("buffering_latency_ms: frame_rate must be > 0");
    if (g.t_buffer_ms < 0.0)
        throw std::invalid_argument("buffering_latency_ms: t_buffer_ms must be >= 0");
    return g.t_buffer_ms + 1000.0 * static_cast<double>(gop_size) / g.frame_rate;
}

// Largest GOP that keeps buffering latency within t_max, floored to whole
// frames and clamped into [g_min, g_max]. A negative interior value
// (t_max < t_buffer) clamps to g_min.
inline int optimal_gop(const GopParams& g) {
    validate_gop_params(g);
    const double interior = std::floor((g.t_max_ms - g.t_buffer_ms) * g.frame_rate / 1000.0);
    const double clamped = std::max(std::min(interior, static_cast<double>(g.g_max)),
                                    static_cast<double>(g.g_min));
    return static_cast<int>(clamped);
}

}  // namespace streamsim::models
