// config.hpp - Full experiment description and its validation.
//
// ScenarioConfig is the single source of truth for a run: demography,
// interfaces, traffic, congestion windows, costs, model parameters, slot
// count, and seed. validate() checks every invariant and reports all
// violations at once, each with its field path.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "streamsim/controller.hpp"
#include "streamsim/models.hpp"
#include "streamsim/scenario.hpp"

namespace streamsim {

// Scenario file problems. Subclasses keep the failure modes distinct;
// the CLI maps all of them to the config-error exit code.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigFileError : ConfigError {       // missing or unreadable file
    using ConfigError::ConfigError;
};
struct ConfigSyntaxError : ConfigError {     // malformed document
    using ConfigError::ConfigError;
};
struct ConfigValidationError : ConfigError { // invariant violations, with field paths
    using ConfigError::ConfigError;
};

namespace sim {

struct InterfaceSpec {
    std::string name;
    long towers = 0;  // operator footprint, informational
    models::LinkMetrics base;
};

struct TrafficMix {
    double video = 0.0;
    double audio = 0.0;
    double text = 0.0;
};

// Contiguous slot range [start_slot, end_slot) with degraded conditions.
struct CongestionWindow {
    std::int64_t start_slot = 0;
    std::int64_t end_slot = 0;
    double speed_drop = 0.0;    // capacity multiplier is (1 - speed_drop)
    double rtt_spike_ms = 0.0;  // added to RTT
    double loss_add = 0.0;      // added to loss, clamped to [0,1]
};

// Per-slot jitter amplitudes. RTT and capacity get multiplicative jitter
// uniform in [1-jitter, 1+jitter]; loss gets additive jitter uniform in
// [-loss_jitter, +loss_jitter], clamped to [0,1].
struct NoiseParams {
    double jitter = 0.05;
    double loss_jitter = 0.005;
};

struct RecordingSpec {
    bool enabled = false;
    std::string path;  // frame journal destination
};

struct ScenarioConfig {
    std::string name;
    std::int64_t slots = 0;
    std::uint64_t seed = 0;
    double processing_delay_ms = 0.0;
    NoiseParams noise;
    RecordingSpec recording;
    std::vector<scenario::District> districts;
    scenario::SocialProfile social;
    std::vector<InterfaceSpec> interfaces;
    TrafficMix traffic_mix;
    std::vector<CongestionWindow> congestion_windows;
    scenario::OffloadConfig offload;
    scenario::CostModel cost;
    models::VideoProfile video;
    models::CompressionParams compression;
    models::CorrectionParams correction;
    models::GopParams gop;
    controller::ControllerThresholds thresholds;
    models::ReliabilityParams reliability;
};

// Collects every invariant violation (field path + message). Empty means valid.
std::vector<std::string> config_violations(const ScenarioConfig& config);

// Throws ConfigValidationError listing all violations.
void validate(const ScenarioConfig& config);

}  // namespace sim
}  // namespace streamsim
