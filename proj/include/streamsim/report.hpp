// report.hpp - Run output rendering: table, csv, structured, charts.
//
// csv and structured outputs are schema-stable: fixed column order, full
// round-trip precision. The table is the human summary and follows the
// display conventions (Mbps 2 decimals, fractions 4, costs half-up integer
// plus exact value).

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "streamsim/config.hpp"
#include "streamsim/sim.hpp"

namespace streamsim::cli {

struct OutputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { table, csv, structured };

// Accepts "table", "csv", "structured"; throws std::invalid_argument otherwise.
OutputFormat parse_format(const std::string& name);

struct OutputSpec {
    OutputFormat format = OutputFormat::table;
    std::string destination;  // file path; empty = stdout
    std::string chart_dir;    // empty = no charts
};

std::string render_table(const sim::ScenarioConfig& config, const sim::RunResult& result);

// Per-slot rows in the fixed column order
//   slot,interface,condition,rtt_ms,loss,l_combined,gop,quality,
//   net_bitrate_mbps,latency_ms,generated_mb,offloaded_mb,carried_mb,cost_units
// followed by a '# key,value' summary block.
std::string render_csv(const sim::ScenarioConfig& config, const sim::RunResult& result);

// Same content as csv as a JSON document.
std::string render_structured(const sim::ScenarioConfig& config, const sim::RunResult& result);

// Writes latency-over-slots and throughput-over-slots line charts plus an
// offload-ratio figure as standalone SVG files under `dir`.
void render_charts(const sim::ScenarioConfig& config, const sim::RunResult& result,
                   const std::string& dir);

// Renders per spec.format, writes to spec.destination (or stdout), and
// renders charts when spec.chart_dir is set. Throws OutputError on
// unwritable destinations.
void emit_report(const sim::ScenarioConfig& config, const sim::RunResult& result,
                 const OutputSpec& spec);

}  // namespace streamsim::cli
