#include "streamsim/config_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace streamsim::cli {

using nlohmann::json;

namespace {

// Accumulates parse problems (unknown or mistyped fields) with their paths.
struct FieldReader {
    std::vector<std::string> problems;

    void check_keys(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
        if (!obj.is_object()) {
            problems.push_back(path + ": expected an object");
            return;
        }
        for (const auto& item : obj.items()) {
            bool known = false;
            for (const char* key : allowed)
                if (item.key() == key) { known = true; break; }
            if (!known) problems.push_back(path + "." + item.key() + ": unknown field");
        }
    }

    double number(const json& obj, const char* key, const std::string& path, double fallback) {
        if (!obj.is_object() || !obj.contains(key)) return fallback;
        if (!obj[key].is_number()) {
            problems.push_back(path + "." + key + ": expected a number");
            return fallback;
        }
        return obj[key].get<double>();
    }

    std::int64_t integer(const json& obj, const char* key, const std::string& path,
                         std::int64_t fallback) {
        if (!obj.is_object() || !obj.contains(key)) return fallback;
        if (!obj[key].is_number_integer()) {
            problems.push_back(path + "." + key + ": expected an integer");
            return fallback;
        }
        return obj[key].get<std::int64_t>();
    }

    std::uint64_t unsigned_integer(const json& obj, const char* key, const std::string& path,
                                   std::uint64_t fallback) {
        if (!obj.is_object() || !obj.contains(key)) return fallback;
        if (!obj[key].is_number_integer() || (obj[key].is_number_integer() &&
                                              !obj[key].is_number_unsigned() &&
                                              obj[key].get<std::int64_t>() < 0)) {
            problems.push_back(path + "." + key + ": expected a nonnegative integer");
            return fallback;
        }
        return obj[key].get<std::uint64_t>();
    }

    std::string string(const json& obj, const char* key, const std::string& path,
                       const std::string& fallback) {
        if (!obj.is_object() || !obj.contains(key)) return fallback;
        if (!obj[key].is_string()) {
            problems.push_back(path + "." + key + ": expected a string");
            return fallback;
        }
        return obj[key].get<std::string>();
    }

    bool boolean(const json& obj, const char* key, const std::string& path, bool fallback) {
        if (!obj.is_object() || !obj.contains(key)) return fallback;
        if (!obj[key].is_boolean()) {
            problems.push_back(path + "." + key + ": expected a boolean");
            return fallback;
        }
        return obj[key].get<bool>();
    }
};

sim::ScenarioConfig config_from_json(const json& doc, const std::string& origin,
                                     const Overrides& overrides) {
    FieldReader r;
    sim::ScenarioConfig c;

    r.check_keys(doc, "$",
                 {"name", "slots", "seed", "processing_delay_ms", "noise", "recording",
                  "districts", "social", "interfaces", "traffic_mix", "congestion_windows",
                  "offload", "cost", "video", "compression", "correction", "gop", "thresholds",
                  "reliability"});

    c.name = r.string(doc, "name", "$", "");
    c.slots = r.integer(doc, "slots", "$", 0);
    c.seed = r.unsigned_integer(doc, "seed", "$", 0);
    c.processing_delay_ms = r.number(doc, "processing_delay_ms", "$", 0.0);

    if (doc.contains("noise")) {
        const json& noise = doc["noise"];
        r.check_keys(noise, "noise", {"jitter", "loss_jitter"});
        c.noise.jitter = r.number(noise, "jitter", "noise", c.noise.jitter);
        c.noise.loss_jitter = r.number(noise, "loss_jitter", "noise", c.noise.loss_jitter);
    }
    if (doc.contains("recording")) {
        const json& rec = doc["recording"];
        r.check_keys(rec, "recording", {"enabled", "path"});
        c.recording.enabled = r.boolean(rec, "enabled", "recording", false);
        c.recording.path = r.string(rec, "path", "recording", "");
    }

    if (doc.contains("districts")) {
        if (!doc["districts"].is_array()) {
            r.problems.push_back("districts: expected an array");
        } else {
            for (std::size_t i = 0; i < doc["districts"].size(); ++i) {
                const json& d = doc["districts"][i];
                const std::string path = "districts[" + std::to_string(i) + "]";
                r.check_keys(d, path, {"name", "density_per_km2", "area_km2", "towers"});
                scenario::District district;
                district.name = r.string(d, "name", path, "");
                district.density_per_km2 = r.number(d, "density_per_km2", path, 0.0);
                district.area_km2 = r.number(d, "area_km2", path, 0.0);
                district.towers = r.integer(d, "towers", path, 0);
                c.districts.push_back(district);
            }
        }
    }

    if (doc.contains("social")) {
        const json& s = doc["social"];
        r.check_keys(s, "social", {"population", "penetration", "platforms_per_user"});
        c.social.population = r.number(s, "population", "social", 0.0);
        c.social.penetration = r.number(s, "penetration", "social", 0.0);
        c.social.platforms_per_user = r.number(s, "platforms_per_user", "social", 0.0);
    }

    if (doc.contains("interfaces")) {
        if (!doc["interfaces"].is_array()) {
            r.problems.push_back("interfaces: expected an array");
        } else {
            for (std::size_t i = 0; i < doc["interfaces"].size(); ++i) {
                const json& itf = doc["interfaces"][i];
                const std::string path = "interfaces[" + std::to_string(i) + "]";
                r.check_keys(itf, path, {"name", "towers", "rtt_ms", "loss", "capacity_mbps"});
                sim::InterfaceSpec spec;
                spec.name = r.string(itf, "name", path, "");
                spec.towers = r.integer(itf, "towers", path, 0);
                spec.base.rtt_ms = r.number(itf, "rtt_ms", path, 0.0);
                spec.base.loss = r.number(itf, "loss", path, 0.0);
                spec.base.capacity_bps = r.number(itf, "capacity_mbps", path, 0.0) * 1e6;
                c.interfaces.push_back(spec);
            }
        }
    }

    if (doc.contains("traffic_mix")) {
        const json& mix = doc["traffic_mix"];
        r.check_keys(mix, "traffic_mix", {"video", "audio", "text"});
        c.traffic_mix.video = r.number(mix, "video", "traffic_mix", 0.0);
        c.traffic_mix.audio = r.number(mix, "audio", "traffic_mix", 0.0);
        c.traffic_mix.text = r.number(mix, "text", "traffic_mix", 0.0);
    }

    if (doc.contains("congestion_windows")) {
        if (!doc["congestion_windows"].is_array()) {
            r.problems.push_back("congestion_windows: expected an array");
        } else {
            for (std::size_t i = 0; i < doc["congestion_windows"].size(); ++i) {
                const json& w = doc["congestion_windows"][i];
                const std::string path = "congestion_windows[" + std::to_string(i) + "]";
                r.check_keys(w, path,
                             {"start_slot", "end_slot", "speed_drop", "rtt_spike_ms", "loss_add"});
                sim::CongestionWindow window;
                window.start_slot = r.integer(w, "start_slot", path, 0);
                window.end_slot = r.integer(w, "end_slot", path, 0);
                window.speed_drop = r.number(w, "speed_drop", path, 0.0);
                window.rtt_spike_ms = r.number(w, "rtt_spike_ms", path, 0.0);
                window.loss_add = r.number(w, "loss_add", path, 0.0);
                c.congestion_windows.push_back(window);
            }
        }
    }

    if (doc.contains("offload")) {
        const json& o = doc["offload"];
        r.check_keys(o, "offload", {"ap_count", "avg_offload_mb", "generated_mb"});
        c.offload.ap_count = r.integer(o, "ap_count", "offload", 0);
        c.offload.avg_offload_mb = r.number(o, "avg_offload_mb", "offload", 0.0);
        c.offload.generated_mb = r.number(o, "generated_mb", "offload", 0.0);
    }

    if (doc.contains("cost")) {
        const json& cost = doc["cost"];
        r.check_keys(cost, "cost", {"unit_cost_per_mb", "handled_fraction", "reduction"});
        c.cost.unit_cost_per_mb = r.number(cost, "unit_cost_per_mb", "cost", 0.0);
        c.cost.handled_fraction = r.number(cost, "handled_fraction", "cost", 0.0);
        c.cost.reduction = r.number(cost, "reduction", "cost", 0.0);
    }

    if (doc.contains("video")) {
        const json& video = doc["video"];
        r.check_keys(video, "video", {"width", "height", "frame_rate", "color_depth"});
        c.video.width = static_cast<int>(r.integer(video, "width", "video", 0));
        c.video.height = static_cast<int>(r.integer(video, "height", "video", 0));
        c.video.frame_rate = r.number(video, "frame_rate", "video", 0.0);
        c.video.color_depth = static_cast<int>(r.integer(video, "color_depth", "video", 0));
    }

    if (doc.contains("compression")) {
        const json& comp = doc["compression"];
        r.check_keys(comp, "compression", {"eta", "overhead", "retransmission_loss"});
        c.compression.eta = r.number(comp, "eta", "compression", 1.0);
        c.compression.overhead = r.number(comp, "overhead", "compression", 0.0);
        c.compression.retransmission_loss =
            r.number(comp, "retransmission_loss", "compression", 0.0);
    }

    if (doc.contains("correction")) {
        const json& corr = doc["correction"];
        r.check_keys(corr, "correction", {"gamma", "beta", "nack_rate"});
        c.correction.gamma = r.number(corr, "gamma", "correction", 0.0);
        c.correction.beta = r.number(corr, "beta", "correction", 0.0);
        c.correction.nack_rate = r.number(corr, "nack_rate", "correction", 0.0);
    }

    if (doc.contains("gop")) {
        const json& gop = doc["gop"];
        r.check_keys(gop, "gop", {"t_max_ms", "t_buffer_ms", "frame_rate", "g_min", "g_max"});
        c.gop.t_max_ms = r.number(gop, "t_max_ms", "gop", 0.0);
        c.gop.t_buffer_ms = r.number(gop, "t_buffer_ms", "gop", 0.0);
        c.gop.frame_rate = r.number(gop, "frame_rate", "gop", 0.0);
        c.gop.g_min = static_cast<int>(r.integer(gop, "g_min", "gop", 1));
        c.gop.g_max = static_cast<int>(r.integer(gop, "g_max", "gop", 1));
    }

    if (doc.contains("thresholds")) {
        const json& t = doc["thresholds"];
        r.check_keys(t, "thresholds",
                     {"max_loss_optimal", "max_rtt_optimal_ms", "high_quality_bitrate_mbps",
                      "low_latency_bitrate_mbps", "congestion_tmax_factor"});
        c.thresholds.max_loss_optimal =
            r.number(t, "max_loss_optimal", "thresholds", c.thresholds.max_loss_optimal);
        c.thresholds.max_rtt_optimal_ms =
            r.number(t, "max_rtt_optimal_ms", "thresholds", c.thresholds.max_rtt_optimal_ms);
        c.thresholds.high_quality_bitrate_bps =
            r.number(t, "high_quality_bitrate_mbps", "thresholds",
                     c.thresholds.high_quality_bitrate_bps / 1e6) *
            1e6;
        c.thresholds.low_latency_bitrate_bps =
            r.number(t, "low_latency_bitrate_mbps", "thresholds",
                     c.thresholds.low_latency_bitrate_bps / 1e6) *
            1e6;
        c.thresholds.congestion_tmax_factor = r.number(t, "congestion_tmax_factor", "thresholds",
                                                       c.thresholds.congestion_tmax_factor);
    }

    if (doc.contains("reliability")) {
        const json& rel = doc["reliability"];
        r.check_keys(rel, "reliability", {"alpha"});
        c.reliability.alpha = r.number(rel, "alpha", "reliability", c.reliability.alpha);
    }

    if (overrides.seed) c.seed = *overrides.seed;
    if (overrides.slots) c.slots = *overrides.slots;

    std::vector<std::string> violations = r.problems;
    for (const std::string& violation : sim::config_violations(c))
        violations.push_back(violation);
    if (!violations.empty()) {
        std::ostringstream msg;
        msg << origin << ": invalid scenario:";
        for (const auto& violation : violations) msg << "\n  " << violation;
        throw ConfigValidationError(msg.str());
    }
    return c;
}

}  // namespace

sim::ScenarioConfig default_scenario() {
    sim::ScenarioConfig c;
    c.name = "dhaka-2025";
    c.slots = 1000;
    c.seed = 42;
    c.processing_delay_ms = 5.0;
    c.noise = {0.05, 0.005};
    c.recording = {false, ""};
    c.districts = {
        {"dhaka-metropolitan", 68627.451, 306.0, 1000},
        {"dhanmondi", 75000.0, 5.0, 40},
    };
    c.social = {21000000.0, 0.9, 4.0};
    c.interfaces = {
        {"grameenphone-4g", 350, {20.0, 0.01, 42.57e6}},
        {"banglalink-4g", 300, {70.0, 0.01, 16.27e6}},
    };
    c.traffic_mix = {0.55, 0.30, 0.15};
    c.congestion_windows = {
        {250, 350, 0.40, 60.0, 0.04},
        {650, 750, 0.40, 60.0, 0.04},
    };
    c.offload = {50, 70.0, 5000.0};
    c.cost = {2.5, 0.9, 0.15};
    c.video = {1920, 1080, 30.0, 24};
    c.compression = {150.0, 0.10, 0.05};
    c.correction = {2.0, 0.5, 0.04};
    c.gop = {500.0, 200.0, 30.0, 5, 60};
    c.thresholds = {0.02, 50.0, 10e6, 4e6, 0.6};
    c.reliability = {10.0};
    return c;
}

sim::ScenarioConfig parse_config_text(const std::string& text, const std::string& origin,
                                      const Overrides& overrides) {
    json doc;
    try {
        doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigSyntaxError(origin + ": malformed scenario file: " + e.what());
    }
    return config_from_json(doc, origin, overrides);
}

sim::ScenarioConfig parse_config(const std::string& path, const Overrides& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigFileError("cannot open scenario file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw ConfigFileError("cannot read scenario file '" + path + "'");
    return parse_config_text(buffer.str(), path, overrides);
}

std::string to_config_text(const sim::ScenarioConfig& c) {
    json doc;
    doc["name"] = c.name;
    doc["slots"] = c.slots;
    doc["seed"] = c.seed;
    doc["processing_delay_ms"] = c.processing_delay_ms;
    doc["noise"] = {{"jitter", c.noise.jitter}, {"loss_jitter", c.noise.loss_jitter}};
    doc["recording"] = {{"enabled", c.recording.enabled}, {"path", c.recording.path}};
    doc["districts"] = json::array();
    for (const auto& d : c.districts)
        doc["districts"].push_back({{"name", d.name},
                                    {"density_per_km2", d.density_per_km2},
                                    {"area_km2", d.area_km2},
                                    {"towers", d.towers}});
    doc["social"] = {{"population", c.social.population},
                     {"penetration", c.social.penetration},
                     {"platforms_per_user", c.social.platforms_per_user}};
    doc["interfaces"] = json::array();
    for (const auto& itf : c.interfaces)
        doc["interfaces"].push_back({{"name", itf.name},
                                     {"towers", itf.towers},
                                     {"rtt_ms", itf.base.rtt_ms},
                                     {"loss", itf.base.loss},
                                     {"capacity_mbps", itf.base.capacity_bps / 1e6}});
    doc["traffic_mix"] = {{"video", c.traffic_mix.video},
                          {"audio", c.traffic_mix.audio},
                          {"text", c.traffic_mix.text}};
    doc["congestion_windows"] = json::array();
    for (const auto& w : c.congestion_windows)
        doc["congestion_windows"].push_back({{"start_slot", w.start_slot},
                                             {"end_slot", w.end_slot},
                                             {"speed_drop", w.speed_drop},
                                             {"rtt_spike_ms", w.rtt_spike_ms},
                                             {"loss_add", w.loss_add}});
    doc["offload"] = {{"ap_count", c.offload.ap_count},
                      {"avg_offload_mb", c.offload.avg_offload_mb},
                      {"generated_mb", c.offload.generated_mb}};
    doc["cost"] = {{"unit_cost_per_mb", c.cost.unit_cost_per_mb},
                   {"handled_fraction", c.cost.handled_fraction},
                   {"reduction", c.cost.reduction}};
    doc["video"] = {{"width", c.video.width},
                    {"height", c.video.height},
                    {"frame_rate", c.video.frame_rate},
                    {"color_depth", c.video.color_depth}};
    doc["compression"] = {{"eta", c.compression.eta},
                          {"overhead", c.compression.overhead},
                          {"retransmission_loss", c.compression.retransmission_loss}};
    doc["correction"] = {{"gamma", c.correction.gamma},
                         {"beta", c.correction.beta},
                         {"nack_rate", c.correction.nack_rate}};
    doc["gop"] = {{"t_max_ms", c.gop.t_max_ms},
                  {"t_buffer_ms", c.gop.t_buffer_ms},
                  {"frame_rate", c.gop.frame_rate},
                  {"g_min", c.gop.g_min},
                  {"g_max", c.gop.g_max}};
    doc["thresholds"] = {
        {"max_loss_optimal", c.thresholds.max_loss_optimal},
        {"max_rtt_optimal_ms", c.thresholds.max_rtt_optimal_ms},
        {"high_quality_bitrate_mbps", c.thresholds.high_quality_bitrate_bps / 1e6},
        {"low_latency_bitrate_mbps", c.thresholds.low_latency_bitrate_bps / 1e6},
        {"congestion_tmax_factor", c.thresholds.congestion_tmax_factor}};
    doc["reliability"] = {{"alpha", c.reliability.alpha}};
    return doc.dump(2) + "\n";
}

void write_default_scenario(const std::string& path) {
    // Hand-formatted so the emitted file carries schema commentary; kept in
    // sync with default_scenario() by test_config.
    static const char* kText = R"(// Dhaka 2025 adaptive-streaming scenario.
// Rates are in Mbps, times in milliseconds, losses and shares as fractions.
{
  "name": "dhaka-2025",
  "slots": 1000,                       // one-second time slots
  "seed": 42,                          // drives all jitter; same seed, same run
  "processing_delay_ms": 5.0,          // added to every interface RTT
  "noise": {
    "jitter": 0.05,                    // +/-5% multiplicative on RTT and capacity
    "loss_jitter": 0.005               // +/-0.005 additive on loss, clamped to [0,1]
  },
  "recording": {
    "enabled": false,                  // frame journal off by default
    "path": "frames.journal"
  },
  "districts": [
    { "name": "dhaka-metropolitan", "density_per_km2": 68627.451, "area_km2": 306.0, "towers": 1000 },
    { "name": "dhanmondi", "density_per_km2": 75000, "area_km2": 5.0, "towers": 40 }
  ],
  "social": {
    "population": 21000000,
    "penetration": 0.9,                // fraction active on social platforms
    "platforms_per_user": 4
  },
  // Candidate uplinks; the controller picks by lowest RTT + processing delay.
  // Tower counts: ~350 for the largest operator, 1000+ city-wide.
  "interfaces": [
    { "name": "grameenphone-4g", "towers": 350, "rtt_ms": 20.0, "loss": 0.01, "capacity_mbps": 42.57 },
    { "name": "banglalink-4g", "towers": 300, "rtt_ms": 70.0, "loss": 0.01, "capacity_mbps": 16.27 }
  ],
  "traffic_mix": { "video": 0.55, "audio": 0.30, "text": 0.15 },
  // Peak-hour degradation: capacity x (1 - speed_drop), RTT + spike, loss + add.
  "congestion_windows": [
    { "start_slot": 250, "end_slot": 350, "speed_drop": 0.40, "rtt_spike_ms": 60.0, "loss_add": 0.04 },
    { "start_slot": 650, "end_slot": 750, "speed_drop": 0.40, "rtt_spike_ms": 60.0, "loss_add": 0.04 }
  ],
  "offload": {
    "ap_count": 50,
    "avg_offload_mb": 70.0,            // MB per AP per slot
    "generated_mb": 5000.0             // MB generated per slot
  },
  "cost": {
    "unit_cost_per_mb": 2.5,
    "handled_fraction": 0.9,           // share of generated volume that is priced
    "reduction": 0.15
  },
  "video": { "width": 1920, "height": 1080, "frame_rate": 30, "color_depth": 24 },
  "compression": {
    "eta": 150.0,                      // compression factor
    "overhead": 0.10,
    "retransmission_loss": 0.05
  },
  "correction": {
    "gamma": 2.0,                      // FEC redundancy factor
    "beta": 0.5,                       // NACK retransmission efficiency
    "nack_rate": 0.04                  // retransmission requests per packet
  },
  "gop": { "t_max_ms": 500.0, "t_buffer_ms": 200.0, "frame_rate": 30, "g_min": 5, "g_max": 60 },
  "thresholds": {
    "max_loss_optimal": 0.02,          // loss above this classifies as congested
    "max_rtt_optimal_ms": 50.0,        // RTT above this classifies as congested
    "high_quality_bitrate_mbps": 10.0,
    "low_latency_bitrate_mbps": 4.0,
    "congestion_tmax_factor": 0.6      // tightens the latency budget under congestion
  },
  "reliability": { "alpha": 10.0 }     // loss sensitivity of P(connected)
}
)";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigFileError("cannot open '" + path + "' for writing");
    out << kText;
    out.flush();
    if (!out) throw ConfigFileError("cannot write scenario file '" + path + "'");
}

}  // namespace streamsim::cli
