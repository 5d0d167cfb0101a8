// End-to-end CLI tests through a subprocess harness: eval goldens, exit
// codes, output determinism, and journal round-trips.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "json.hpp"

#include "streamsim/config_io.hpp"
#include "streamsim/models.hpp"
#include "streamsim/text.hpp"

using namespace streamsim;

namespace {

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

CommandResult run_command(const std::string& args) {
    const std::string cmd = std::string(STREAMSIM_BIN) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    char buf[4096];
    while (fgets(buf, sizeof(buf), pipe) != nullptr) output += buf;
    const int status = pclose(pipe);
    CommandResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.output = output;
    return result;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) fields.push_back(field);
    return fields;
}

struct TempPath {
    std::string path;
    explicit TempPath(const std::string& name) : path("/tmp/streamsim_cli_" + name) {}
    ~TempPath() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("eval subcommands match the library") {
    CHECK(run_command("eval net-bitrate --raw-mbps 1500 --eta 150 --overhead 0.10 "
                      "--retx-loss 0.05")
              .output == "8.55 Mbps\n");
    CHECK(run_command("eval selection --rtt 20 --rtt 70 --t-proc 5").output ==
          "0.7500, 0.2500\n");
    CHECK(run_command("eval select-interface --rtt 20 --rtt 70 --t-proc 5").output == "0\n");

    // every printed value equals the library call rendered the same way
    const std::string conn = run_command("eval connectivity --loss 0.05 --alpha 10").output;
    CHECK(conn == text::format_fraction(models::connectivity_probability(0.05, {10.0})) + "\n");
    const std::string fec = run_command("eval fec-loss --loss 0.05 --gamma 2").output;
    CHECK(fec == text::format_fraction(models::fec_effective_loss(0.05, {2.0, 0.0, 0.0})) + "\n");
    const std::string raw =
        run_command("eval raw-bitrate --width 1920 --height 1080 --frame-rate 30 "
                    "--color-depth 24")
            .output;
    CHECK(raw == "1492992000 bits/s (1492.99 Mbps)\n");

    CHECK(run_command("eval optimal-gop --t-max 500 --t-buffer 200 --frame-rate 30 "
                      "--g-min 5 --g-max 60")
              .output == "9 frames\n");
    CHECK(run_command("eval buffering-latency --gop 30 --t-buffer 200 --frame-rate 30").output ==
          "1200.00 ms\n");
    CHECK(run_command("eval effective-latency --rtt 20 --t-proc 5").output == "25.00 ms\n");

    CHECK(run_command("eval district-population --density 75000 --area 5").output ==
          "375000 persons\n");
    CHECK(run_command("eval persons-per-tower --population 375000 --towers 40").output ==
          "9375 persons/tower\n");
    CHECK(run_command("eval active-connections --population 21000000 --penetration 0.9 "
                      "--platforms 4")
              .output == "75600000 connections\n");
    CHECK(run_command("eval baseline-cost --volume-mb 5000 --unit-cost 2.5 --handled 0.9")
              .output == "11250 units (exact 11250)\n");
    CHECK(run_command("eval reduced-cost --baseline 11250 --reduction 0.15").output ==
          "9563 units (exact 9562.5)\n");
    CHECK(run_command("eval offloaded-volume --ap-count 50 --avg-mb 70 --generated-mb 5000")
              .output == "3500.00 MB\n");
    CHECK(run_command("eval offload-ratio --offloaded-mb 3500 --generated-mb 5000").output ==
          "0.7000\n");
}

TEST_CASE("stochastic eval is reproducible per seed") {
    const std::string a =
        run_command("eval select-interface --rtt 70 --rtt 20 --t-proc 5 --stochastic --seed 9")
            .output;
    const std::string b =
        run_command("eval select-interface --rtt 70 --rtt 20 --t-proc 5 --stochastic --seed 9")
            .output;
    CHECK(a == b);
    CHECK((a == "0\n" || a == "1\n"));
}

TEST_CASE("exit codes follow the documented mapping") {
    CHECK(run_command("eval connectivity --loss 0.05 --alpha 10").exit_code == 0);
    CHECK(run_command("definitely-not-a-command").exit_code == 1);
    CHECK(run_command("run --format nonsense").exit_code == 1);
    // eval with arguments outside the model domain is a usage error
    CHECK(run_command("eval effective-bitrate --raw-mbps 1500 --eta 0.5").exit_code == 1);
    // config errors: missing file, then an invariant violation
    CHECK(run_command("run --scenario /nonexistent/nope.json").exit_code == 2);
    CHECK(run_command("validate --scenario /nonexistent/nope.json").exit_code == 2);

    TempPath bad_config("bad_mix.json");
    sim::ScenarioConfig broken = cli::default_scenario();
    broken.traffic_mix.video = 0.45;  // mix sums to 0.9
    std::ofstream(bad_config.path) << cli::to_config_text(broken);
    const CommandResult bad = run_command("run --scenario " + bad_config.path);
    CHECK(bad.exit_code == 2);
    CHECK(bad.output.find("traffic_mix") != std::string::npos);

    // runtime error: unwritable output destination
    CHECK(run_command("run --slots 1000 --output /nonexistent-dir/out.txt").exit_code == 3);
}

TEST_CASE("init-scenario output validates and runs") {
    TempPath scenario("init.json");
    CHECK(run_command("init-scenario --output " + scenario.path).exit_code == 0);
    const CommandResult validated = run_command("validate --scenario " + scenario.path);
    CHECK(validated.exit_code == 0);
    CHECK(validated.output.find("dhaka-2025") != std::string::npos);
    CHECK(run_command("run --scenario " + scenario.path + " --slots 800 --format table")
              .exit_code == 0);
}

TEST_CASE("repeated runs are byte-identical") {
    TempPath a("det_a.csv");
    TempPath b("det_b.csv");
    CHECK(run_command("run --seed 42 --format csv --output " + a.path).exit_code == 0);
    CHECK(run_command("run --seed 42 --format csv --output " + b.path).exit_code == 0);
    CHECK(read_file(a.path) == read_file(b.path));

    // and a different seed actually changes the journal
    TempPath c("det_c.csv");
    CHECK(run_command("run --seed 43 --format csv --output " + c.path).exit_code == 0);
    CHECK(read_file(a.path) != read_file(c.path));
}

TEST_CASE("chart option renders the three figures") {
    const std::string dir = "/tmp/streamsim_cli_charts";
    CHECK(run_command("run --slots 800 --chart " + dir + " --output /dev/null").exit_code == 0);
    for (const char* name :
         {"latency_over_slots.svg", "throughput_over_slots.svg", "offload_ratio.svg"}) {
        const std::string content = read_file(dir + "/" + name);
        CHECK(content.find("<svg") != std::string::npos);
        std::remove((dir + "/" + name).c_str());
    }
}

TEST_CASE("csv journal round-trips to the summary block") {
    TempPath csv("roundtrip.csv");
    REQUIRE(run_command("run --format csv --output " + csv.path).exit_code == 0);

    std::ifstream in(csv.path);
    std::string line;
    std::getline(in, line);  // header
    REQUIRE(split(line, ',').size() == 14);

    double total_generated = 0.0, total_offloaded = 0.0;
    double latency_sum = 0.0, throughput_sum = 0.0;
    std::size_t rows = 0;
    std::map<std::string, std::string> summary;
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) == 0) {
            const auto comma = line.find(',');
            if (comma != std::string::npos)
                summary[line.substr(2, comma - 2)] = line.substr(comma + 1);
            continue;
        }
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split(line, ',');
        REQUIRE(fields.size() == 14);
        throughput_sum += std::strtod(fields[8].c_str(), nullptr);
        latency_sum += std::strtod(fields[9].c_str(), nullptr);
        total_generated += std::strtod(fields[10].c_str(), nullptr);
        total_offloaded += std::strtod(fields[11].c_str(), nullptr);
        ++rows;
    }
    REQUIRE(rows == 1000);

    const double ratio = std::strtod(summary.at("offload_ratio").c_str(), nullptr);
    const double mean_latency = std::strtod(summary.at("mean_latency_ms").c_str(), nullptr);
    const double mean_throughput =
        std::strtod(summary.at("mean_throughput_mbps").c_str(), nullptr);
    CHECK(std::abs(total_offloaded / total_generated - ratio) <= 1e-9 * std::abs(ratio));
    CHECK(std::abs(latency_sum / double(rows) - mean_latency) <=
          1e-9 * std::abs(mean_latency));
    CHECK(std::abs(throughput_sum / double(rows) - mean_throughput) <=
          1e-9 * std::abs(mean_throughput));
    CHECK(std::strtod(summary.at("total_offloaded_mb").c_str(), nullptr) == total_offloaded);
}

TEST_CASE("structured journal round-trips to its summary") {
    TempPath path("roundtrip.json");
    REQUIRE(run_command("run --slots 800 --format structured --output " + path.path).exit_code ==
            0);
    const nlohmann::json doc = nlohmann::json::parse(read_file(path.path));

    double latency_sum = 0.0, throughput_sum = 0.0, offloaded = 0.0, generated = 0.0;
    for (const auto& row : doc["journal"]) {
        latency_sum += row["latency_ms"].get<double>();
        throughput_sum += row["net_bitrate_mbps"].get<double>();
        offloaded += row["offloaded_mb"].get<double>();
        generated += row["generated_mb"].get<double>();
    }
    const double n = doc["journal"].size();
    CHECK(std::abs(latency_sum / n - doc["summary"]["mean_latency_ms"].get<double>()) <= 1e-6);
    CHECK(std::abs(throughput_sum / n - doc["summary"]["mean_throughput_mbps"].get<double>()) <=
          1e-6);
    CHECK(std::abs(offloaded / generated - doc["summary"]["offload_ratio"].get<double>()) <=
          1e-9);
}

TEST_CASE("compare populates the comparison block") {
    const CommandResult result = run_command("compare --format table");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("static mean latency") != std::string::npos);
    CHECK(result.output.find("latency delta") != std::string::npos);
    CHECK(result.output.find("throughput gain") != std::string::npos);
}

TEST_CASE("multi-scenario batch runs with jobs") {
    TempPath s1("batch_a.json");
    TempPath s2("batch_b.json");
    sim::ScenarioConfig a = cli::default_scenario();
    a.name = "batch-a";
    a.slots = 800;
    sim::ScenarioConfig b = a;
    b.name = "batch-b";
    b.seed = 77;
    std::ofstream(s1.path) << cli::to_config_text(a);
    std::ofstream(s2.path) << cli::to_config_text(b);

    const std::string out_dir = "/tmp/streamsim_cli_batch";
    const CommandResult result =
        run_command("run --scenario " + s1.path + " --scenario " + s2.path +
                    " --jobs 2 --format csv --output " + out_dir);
    CHECK(result.exit_code == 0);
    CHECK(read_file(out_dir + "/batch-a.csv").find("# scenario,batch-a") != std::string::npos);
    CHECK(read_file(out_dir + "/batch-b.csv").find("# scenario,batch-b") != std::string::npos);
    std::remove((out_dir + "/batch-a.csv").c_str());
    std::remove((out_dir + "/batch-b.csv").c_str());
}
