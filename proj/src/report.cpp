#include "streamsim/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "streamsim/scenario.hpp"
#include "streamsim/text.hpp"

namespace streamsim::cli {

using nlohmann::json;
using text::format_double;
using text::format_fixed;
using text::format_fraction;

OutputFormat parse_format(const std::string& name) {
    if (name == "table") return OutputFormat::table;
    if (name == "csv") return OutputFormat::csv;
    if (name == "structured") return OutputFormat::structured;
    throw std::invalid_argument("unknown output format '" + name + "'");
}

std::string render_table(const sim::ScenarioConfig& config, const sim::RunResult& result) {
    const sim::MetricsReport& r = result.report;
    std::ostringstream out;
    auto row = [&out](const std::string& label, const std::string& value) {
        out << label;
        for (std::size_t i = label.size(); i < 24; ++i) out << ' ';
        out << value << '\n';
    };
    row("scenario", config.name);
    row("slots", std::to_string(result.journal.size()) + " (optimal " +
                     std::to_string(r.condition_breakdown.optimal) + ", congested " +
                     std::to_string(r.condition_breakdown.congested) + ")");
    row("offload ratio", format_fraction(r.offload_ratio));
    row("total offloaded", format_fixed(r.total_offloaded_mb, 2) + " MB");
    row("baseline cost",
        std::to_string(scenario::display_cost_units(r.baseline_cost_units)) +
            " units/slot (exact " + format_double(r.baseline_cost_units) + ")");
    row("reduced cost",
        std::to_string(scenario::display_cost_units(r.reduced_cost_units)) +
            " units/slot (exact " + format_double(r.reduced_cost_units) + ")");
    row("mean latency", format_fixed(r.mean_latency_ms, 2) + " ms");
    row("p95 latency", format_fixed(r.p95_latency_ms, 2) + " ms");
    row("mean throughput", format_fixed(r.mean_throughput_mbps, 2) + " Mbps");
    if (r.comparison) {
        row("static mean latency", format_fixed(r.comparison->baseline_mean_latency_ms, 2) + " ms");
        row("latency delta", format_fixed(r.comparison->latency_delta_ms, 2) + " ms");
        row("throughput gain", format_fraction(r.comparison->throughput_gain_fraction));
    }
    return out.str();
}

namespace {

void append_summary_lines(std::ostringstream& out, const sim::ScenarioConfig& config,
                          const sim::RunResult& result) {
    const sim::MetricsReport& r = result.report;
    out << "# summary\n";
    out << "# scenario," << config.name << "\n";
    out << "# slots," << result.journal.size() << "\n";
    out << "# offload_ratio," << format_double(r.offload_ratio) << "\n";
    out << "# total_offloaded_mb," << format_double(r.total_offloaded_mb) << "\n";
    out << "# baseline_cost_units," << format_double(r.baseline_cost_units) << "\n";
    out << "# reduced_cost_units," << format_double(r.reduced_cost_units) << "\n";
    out << "# reduced_cost_display," << scenario::display_cost_units(r.reduced_cost_units) << "\n";
    out << "# mean_latency_ms," << format_double(r.mean_latency_ms) << "\n";
    out << "# p95_latency_ms," << format_double(r.p95_latency_ms) << "\n";
    out << "# mean_throughput_mbps," << format_double(r.mean_throughput_mbps) << "\n";
    out << "# optimal_slots," << r.condition_breakdown.optimal << "\n";
    out << "# congested_slots," << r.condition_breakdown.congested << "\n";
    out << "# traffic_video," << format_double(config.traffic_mix.video) << "\n";
    out << "# traffic_audio," << format_double(config.traffic_mix.audio) << "\n";
    out << "# traffic_text," << format_double(config.traffic_mix.text) << "\n";
    if (r.comparison) {
        out << "# baseline_mean_latency_ms," << format_double(r.comparison->baseline_mean_latency_ms)
            << "\n";
        out << "# latency_delta_ms," << format_double(r.comparison->latency_delta_ms) << "\n";
        out << "# throughput_gain_fraction,"
            << format_double(r.comparison->throughput_gain_fraction) << "\n";
    }
}

}  // namespace

std::string render_csv(const sim::ScenarioConfig& config, const sim::RunResult& result) {
    std::ostringstream out;
    out << "slot,interface,condition,rtt_ms,loss,l_combined,gop,quality,net_bitrate_mbps,"
           "latency_ms,generated_mb,offloaded_mb,carried_mb,cost_units\n";
    for (const sim::SlotRecord& rec : result.journal) {
        out << rec.slot_index << ',' << rec.interface_chosen << ','
            << controller::to_string(rec.condition) << ',' << format_double(rec.rtt_ms) << ','
            << format_double(rec.loss) << ',' << format_double(rec.l_combined) << ','
            << rec.gop_size << ',' << controller::to_string(rec.quality_tier) << ','
            << format_double(rec.net_bitrate_bps / 1e6) << ',' << format_double(rec.latency_ms)
            << ',' << format_double(rec.generated_mb) << ',' << format_double(rec.offloaded_mb)
            << ',' << format_double(rec.carried_mb) << ',' << format_double(rec.cost_units)
            << '\n';
    }
    append_summary_lines(out, config, result);
    return out.str();
}

std::string render_structured(const sim::ScenarioConfig& config, const sim::RunResult& result) {
    const sim::MetricsReport& r = result.report;
    json doc;
    doc["scenario"] = config.name;
    doc["slots"] = result.journal.size();
    doc["traffic_mix"] = {{"video", config.traffic_mix.video},
                          {"audio", config.traffic_mix.audio},
                          {"text", config.traffic_mix.text}};
    json summary;
    summary["offload_ratio"] = r.offload_ratio;
    summary["total_offloaded_mb"] = r.total_offloaded_mb;
    summary["baseline_cost_units"] = r.baseline_cost_units;
    summary["reduced_cost_units"] = r.reduced_cost_units;
    summary["reduced_cost_display"] = scenario::display_cost_units(r.reduced_cost_units);
    summary["mean_latency_ms"] = r.mean_latency_ms;
    summary["p95_latency_ms"] = r.p95_latency_ms;
    summary["mean_throughput_mbps"] = r.mean_throughput_mbps;
    summary["condition_breakdown"] = {{"optimal", r.condition_breakdown.optimal},
                                      {"congested", r.condition_breakdown.congested}};
    if (r.comparison) {
        summary["comparison"] = {
            {"baseline_mean_latency_ms", r.comparison->baseline_mean_latency_ms},
            {"latency_delta_ms", r.comparison->latency_delta_ms},
            {"throughput_gain_fraction", r.comparison->throughput_gain_fraction}};
    }
    doc["summary"] = summary;

    doc["journal"] = json::array();
    for (const sim::SlotRecord& rec : result.journal) {
        doc["journal"].push_back({{"slot", rec.slot_index},
                                  {"interface", rec.interface_chosen},
                                  {"condition", controller::to_string(rec.condition)},
                                  {"rtt_ms", rec.rtt_ms},
                                  {"loss", rec.loss},
                                  {"l_combined", rec.l_combined},
                                  {"gop", rec.gop_size},
                                  {"quality", controller::to_string(rec.quality_tier)},
                                  {"net_bitrate_mbps", rec.net_bitrate_bps / 1e6},
                                  {"latency_ms", rec.latency_ms},
                                  {"generated_mb", rec.generated_mb},
                                  {"offloaded_mb", rec.offloaded_mb},
                                  {"carried_mb", rec.carried_mb},
                                  {"cost_units", rec.cost_units}});
    }
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Charts
// ---------------------------------------------------------------------------

namespace {

constexpr int kChartWidth = 960;
constexpr int kChartHeight = 340;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 30;
constexpr int kMarginBottom = 45;

std::string line_chart_svg(const std::string& title, const std::string& y_label,
                           const std::vector<double>& values) {
    const int plot_w = kChartWidth - kMarginLeft - kMarginRight;
    const int plot_h = kChartHeight - kMarginTop - kMarginBottom;

    double lo = values.empty() ? 0.0 : *std::min_element(values.begin(), values.end());
    double hi = values.empty() ? 1.0 : *std::max_element(values.begin(), values.end());
    if (hi == lo) {  // flat series still needs a visible band
        hi = lo + (lo == 0.0 ? 1.0 : std::abs(lo) * 0.1);
        lo = lo - (lo == 0.0 ? 0.0 : std::abs(lo) * 0.1);
    }

    auto x_at = [&](std::size_t i) {
        const double denom = values.size() > 1 ? static_cast<double>(values.size() - 1) : 1.0;
        return kMarginLeft + plot_w * (static_cast<double>(i) / denom);
    };
    auto y_at = [&](double v) { return kMarginTop + plot_h * (1.0 - (v - lo) / (hi - lo)); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kChartWidth << "\" height=\""
        << kChartHeight << "\" viewBox=\"0 0 " << kChartWidth << ' ' << kChartHeight << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kChartWidth / 2 << "\" y=\"18\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
    // axes
    svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\"" << kMarginLeft
        << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
        << kMarginLeft + plot_w << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"black\"/>\n";
    // y range labels
    svg << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << kMarginTop + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << format_fixed(hi, 2) << "</text>\n";
    svg << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << kMarginTop + plot_h
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << format_fixed(lo, 2) << "</text>\n";
    svg << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kChartHeight - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">slot</text>\n";
    svg << "<text x=\"16\" y=\"" << kMarginTop + plot_h / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 16 " << kMarginTop + plot_h / 2 << ")\">" << y_label
        << "</text>\n";

    if (!values.empty()) {
        svg << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i != 0) svg << ' ';
            svg << format_fixed(x_at(i), 2) << ',' << format_fixed(y_at(values[i]), 2);
        }
        svg << "\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string offload_ratio_svg(double ratio) {
    const int width = 480;
    const int height = 150;
    const int bar_x = 40;
    const int bar_y = 60;
    const int bar_w = 400;
    const int bar_h = 34;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"28\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"14\">offload ratio "
        << format_fraction(ratio) << "</text>\n";
    svg << "<rect x=\"" << bar_x << "\" y=\"" << bar_y << "\" width=\"" << bar_w
        << "\" height=\"" << bar_h << "\" fill=\"#e0e0e0\" stroke=\"black\"/>\n";
    svg << "<rect x=\"" << bar_x << "\" y=\"" << bar_y << "\" width=\""
        << format_fixed(bar_w * std::clamp(ratio, 0.0, 1.0), 2) << "\" height=\"" << bar_h
        << "\" fill=\"#2ca02c\"/>\n";
    svg << "<text x=\"" << bar_x << "\" y=\"" << bar_y + bar_h + 18
        << "\" font-family=\"sans-serif\" font-size=\"11\">0</text>\n";
    svg << "<text x=\"" << bar_x + bar_w << "\" y=\"" << bar_y + bar_h + 18
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw OutputError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw OutputError("write failed on '" + path + "'");
}

}  // namespace

void render_charts(const sim::ScenarioConfig& config, const sim::RunResult& result,
                   const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw OutputError("cannot create chart directory '" + dir + "': " + ec.message());

    std::vector<double> latency;
    std::vector<double> throughput;
    latency.reserve(result.journal.size());
    throughput.reserve(result.journal.size());
    for (const sim::SlotRecord& rec : result.journal) {
        latency.push_back(rec.latency_ms);
        throughput.push_back(rec.net_bitrate_bps / 1e6);
    }

    const std::string suffix = config.name.empty() ? "" : " (" + config.name + ")";
    const std::filesystem::path base(dir);
    write_file((base / "latency_over_slots.svg").string(),
               line_chart_svg("latency over slots" + suffix, "latency [ms]", latency));
    write_file((base / "throughput_over_slots.svg").string(),
               line_chart_svg("throughput over slots" + suffix, "throughput [Mbps]", throughput));
    write_file((base / "offload_ratio.svg").string(),
               offload_ratio_svg(result.report.offload_ratio));
}

void emit_report(const sim::ScenarioConfig& config, const sim::RunResult& result,
                 const OutputSpec& spec) {
    std::string rendered;
    switch (spec.format) {
        case OutputFormat::table: rendered = render_table(config, result); break;
        case OutputFormat::csv: rendered = render_csv(config, result); break;
        case OutputFormat::structured: rendered = render_structured(config, result); break;
    }
    if (spec.destination.empty())
        std::cout << rendered;
    else
        write_file(spec.destination, rendered);

    if (!spec.chart_dir.empty()) render_charts(config, result, spec.chart_dir);
}

}  // namespace streamsim::cli
