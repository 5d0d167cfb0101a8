// config_io.hpp - Scenario file loading, validation, and the bundled default.
//
// Scenario files are JSON with // comments permitted. Field names follow the
// documented schema (see README); rates are written in Mbps and converted to
// bits/second at this boundary. Unknown keys are rejected with their path so
// typos fail loudly.

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "streamsim/config.hpp"

namespace streamsim::cli {

// Command-line replacements applied to the parsed config before validation.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> slots;
};

// Built-in Dhaka 2025 scenario: 1000 one-second slots, two cellular
// interfaces (42.57 / 16.27 Mbps), 55/30/15 traffic mix, 50 APs x 70 MB
// offload of 5000 MB/slot, 2.5 units/MB at 90% handled with 15% reduction,
// and two 40% congestion windows.
sim::ScenarioConfig default_scenario();

// Parse + validate a scenario file. Throws ConfigFileError (missing or
// unreadable), ConfigSyntaxError (malformed JSON), or
// ConfigValidationError (invariant violations, all listed with field paths).
sim::ScenarioConfig parse_config(const std::string& path, const Overrides& overrides = {});

// Same, from an in-memory document; `origin` names the source in errors.
sim::ScenarioConfig parse_config_text(const std::string& text, const std::string& origin,
                                      const Overrides& overrides = {});

// Serialize a config back to the file schema (canonical units -> Mbps/ms).
std::string to_config_text(const sim::ScenarioConfig& config);

// Write the bundled default as a commented scenario file.
void write_default_scenario(const std::string& path);

}  // namespace streamsim::cli
