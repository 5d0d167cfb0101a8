// streamsim command-line front end.
//
// Subcommands: run, compare, eval, validate, init-scenario.
// Exit codes: 0 success, 1 usage error, 2 config error, 3 runtime error.

#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "streamsim/config_io.hpp"
#include "streamsim/models.hpp"
#include "streamsim/report.hpp"
#include "streamsim/scenario.hpp"
#include "streamsim/sim.hpp"
#include "streamsim/text.hpp"

namespace {

using namespace streamsim;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct RunOptions {
    std::vector<std::string> scenario_paths;  // empty = bundled default
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> slots;
    std::string format = "table";
    std::string output;
    std::string chart_dir;
    bool compare = false;
    unsigned jobs = 1;
};

std::string extension_for(cli::OutputFormat format) {
    switch (format) {
        case cli::OutputFormat::table: return ".txt";
        case cli::OutputFormat::csv: return ".csv";
        case cli::OutputFormat::structured: return ".json";
    }
    return ".txt";
}

sim::ScenarioConfig load_scenario(const std::string& path, const cli::Overrides& overrides) {
    if (path.empty()) {
        sim::ScenarioConfig config = cli::default_scenario();
        if (overrides.seed) config.seed = *overrides.seed;
        if (overrides.slots) config.slots = *overrides.slots;
        sim::validate(config);
        return config;
    }
    return cli::parse_config(path, overrides);
}

int run_command(const RunOptions& options) {
    const cli::OutputFormat format = cli::parse_format(options.format);
    const cli::Overrides overrides{options.seed, options.slots};

    std::vector<std::string> paths = options.scenario_paths;
    if (paths.empty()) paths.push_back("");  // bundled default

    std::vector<sim::ScenarioConfig> configs;
    configs.reserve(paths.size());
    for (const std::string& path : paths) configs.push_back(load_scenario(path, overrides));

    // Independent runs; journals and reports land in scenario order.
    std::vector<sim::RunResult> results(configs.size());
    const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, configs.size()));
    if (jobs == 1) {
        for (std::size_t i = 0; i < configs.size(); ++i)
            results[i] = options.compare ? sim::compare_baseline(configs[i]) : sim::run(configs[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (std::size_t i = next.fetch_add(1); i < configs.size(); i = next.fetch_add(1)) {
                try {
                    results[i] = options.compare ? sim::compare_baseline(configs[i])
                                                 : sim::run(configs[i]);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    for (std::size_t i = 0; i < configs.size(); ++i) {
        cli::OutputSpec spec;
        spec.format = format;
        if (configs.size() == 1) {
            spec.destination = options.output;
            spec.chart_dir = options.chart_dir;
        } else {
            // Multiple scenarios: outputs per scenario under the given paths.
            if (!options.output.empty()) {
                std::filesystem::create_directories(options.output);
                spec.destination = (std::filesystem::path(options.output) /
                                    (configs[i].name + extension_for(format)))
                                       .string();
            }
            if (!options.chart_dir.empty())
                spec.chart_dir =
                    (std::filesystem::path(options.chart_dir) / configs[i].name).string();
        }
        cli::emit_report(configs[i], results[i], spec);
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// eval subcommands
// ---------------------------------------------------------------------------

struct EvalArgs {
    double width = 0, height = 0, frame_rate = 0, color_depth = 0;
    double raw_mbps = 0, eta = 1, overhead = 0, retx_loss = 0;
    double loss = 0, alpha = 10, rtt = 0, t_proc = 0;
    std::vector<double> rtts;
    bool stochastic = false;
    std::uint64_t seed = 0;
    double gamma = 0, beta = 0, nack_rate = 0, l_eff = 0;
    double gop = 0, t_buffer = 0, t_max = 0;
    std::int64_t g_min = 1, g_max = 1;
    double density = 0, area = 0, population = 0;
    std::int64_t towers = 0;
    double penetration = 0, platforms = 0;
    double volume_mb = 0, unit_cost = 0, handled = 1, baseline = 0, reduction = 0;
    std::int64_t ap_count = 0;
    double avg_mb = 0, generated_mb = 0, offloaded_mb = 0;
};

std::string format_count(double value) { return text::format_double(value); }

std::string format_cost(double value) {
    return std::to_string(scenario::display_cost_units(value)) + " units (exact " +
           text::format_double(value) + ")";
}

void add_eval_commands(CLI::App& eval, EvalArgs& a) {
    auto* raw = eval.add_subcommand("raw-bitrate", "Uncompressed source bitrate");
    raw->add_option("--width", a.width, "frame width [px]")->required();
    raw->add_option("--height", a.height, "frame height [px]")->required();
    raw->add_option("--frame-rate", a.frame_rate, "frames per second")->required();
    raw->add_option("--color-depth", a.color_depth, "bits per pixel")->required();
    raw->callback([&a] {
        const double bits = models::raw_bitrate({static_cast<int>(a.width),
                                                 static_cast<int>(a.height), a.frame_rate,
                                                 static_cast<int>(a.color_depth)});
        std::cout << text::format_double(bits) << " bits/s (" << text::format_mbps(bits) << ")\n";
    });

    auto* eff = eval.add_subcommand("effective-bitrate", "Bitrate after compression");
    eff->add_option("--raw-mbps", a.raw_mbps, "raw bitrate [Mbps]")->required();
    eff->add_option("--eta", a.eta, "compression factor")->required();
    eff->callback([&a] {
        const double bps = models::effective_bitrate(a.raw_mbps * 1e6, {a.eta, 0.0, 0.0});
        std::cout << text::format_mbps(bps) << "\n";
    });

    auto* net = eval.add_subcommand("net-bitrate",
                                    "Bitrate after compression, overhead, and retransmission");
    net->add_option("--raw-mbps", a.raw_mbps, "raw bitrate [Mbps]")->required();
    net->add_option("--eta", a.eta, "compression factor")->required();
    net->add_option("--overhead", a.overhead, "overhead fraction")->required();
    net->add_option("--retx-loss", a.retx_loss, "retransmission loss fraction")->required();
    net->callback([&a] {
        const models::CompressionParams params{a.eta, a.overhead, a.retx_loss};
        const double bps =
            models::net_bitrate(models::effective_bitrate(a.raw_mbps * 1e6, params), params);
        std::cout << text::format_mbps(bps) << "\n";
    });

    auto* conn = eval.add_subcommand("connectivity", "Connectivity probability exp(-alpha*loss)");
    conn->add_option("--loss", a.loss, "packet loss fraction")->required();
    conn->add_option("--alpha", a.alpha, "loss sensitivity");
    conn->callback([&a] {
        std::cout << text::format_fraction(models::connectivity_probability(a.loss, {a.alpha}))
                  << "\n";
    });

    auto* lat = eval.add_subcommand("effective-latency", "RTT plus processing delay");
    lat->add_option("--rtt", a.rtt, "round-trip time [ms]")->required();
    lat->add_option("--t-proc", a.t_proc, "processing delay [ms]")->required();
    lat->callback([&a] {
        std::cout << text::format_fixed(
                         models::effective_latency_ms({a.rtt, 0.0, 0.0}, a.t_proc), 2)
                  << " ms\n";
    });

    auto* sel = eval.add_subcommand("selection", "Interface selection distribution");
    sel->add_option("--rtt", a.rtts, "candidate RTT [ms], repeatable")->required();
    sel->add_option("--t-proc", a.t_proc, "processing delay [ms]");
    sel->callback([&a] {
        models::SelectionContext ctx;
        for (double rtt : a.rtts) ctx.candidates.push_back({rtt, 0.0, 0.0});
        ctx.processing_delay_ms = a.t_proc;
        const std::vector<double> p = models::selection_distribution(ctx);
        for (std::size_t i = 0; i < p.size(); ++i)
            std::cout << (i ? ", " : "") << text::format_fraction(p[i]);
        std::cout << "\n";
    });

    auto* pick = eval.add_subcommand("select-interface", "Chosen candidate index");
    pick->add_option("--rtt", a.rtts, "candidate RTT [ms], repeatable")->required();
    pick->add_option("--t-proc", a.t_proc, "processing delay [ms]");
    pick->add_flag("--stochastic", a.stochastic, "sample instead of argmax");
    pick->add_option("--seed", a.seed, "random seed for stochastic mode");
    pick->callback([&a] {
        models::SelectionContext ctx;
        for (double rtt : a.rtts) ctx.candidates.push_back({rtt, 0.0, 0.0});
        ctx.processing_delay_ms = a.t_proc;
        RandomSource rng(a.seed);
        const std::size_t index =
            a.stochastic
                ? models::select_interface(ctx, models::SelectionMode::stochastic, &rng)
                : models::select_interface(ctx);
        std::cout << index << "\n";
    });

    auto* fec = eval.add_subcommand("fec-loss", "Residual loss after FEC");
    fec->add_option("--loss", a.loss, "packet loss fraction")->required();
    fec->add_option("--gamma", a.gamma, "FEC redundancy factor")->required();
    fec->callback([&a] {
        std::cout << text::format_fraction(
                         models::fec_effective_loss(a.loss, {a.gamma, 0.0, 0.0}))
                  << "\n";
    });

    auto* comb = eval.add_subcommand("combined-loss", "Loss after FEC and NACK");
    comb->add_option("--l-eff", a.l_eff, "post-FEC loss fraction")->required();
    comb->add_option("--beta", a.beta, "NACK efficiency")->required();
    comb->add_option("--nack-rate", a.nack_rate, "NACK requests per packet")->required();
    comb->callback([&a] {
        std::cout << text::format_fraction(
                         models::combined_loss(a.l_eff, {0.0, a.beta, a.nack_rate}))
                  << "\n";
    });

    auto* buf = eval.add_subcommand("buffering-latency", "Buffering delay for a GOP size");
    buf->add_option("--gop", a.gop, "GOP size [frames]")->required();
    buf->add_option("--t-buffer", a.t_buffer, "fixed buffering delay [ms]")->required();
    buf->add_option("--frame-rate", a.frame_rate, "frames per second")->required();
    buf->callback([&a] {
        const models::GopParams params{0.0, a.t_buffer, a.frame_rate, 1, 1};
        std::cout << text::format_fixed(
                         models::buffering_latency_ms(static_cast<int>(a.gop), params), 2)
                  << " ms\n";
    });

    auto* gopt = eval.add_subcommand("optimal-gop", "GOP size for a latency budget");
    gopt->add_option("--t-max", a.t_max, "max tolerable latency [ms]")->required();
    gopt->add_option("--t-buffer", a.t_buffer, "fixed buffering delay [ms]")->required();
    gopt->add_option("--frame-rate", a.frame_rate, "frames per second")->required();
    gopt->add_option("--g-min", a.g_min, "minimum GOP size [frames]")->required();
    gopt->add_option("--g-max", a.g_max, "maximum GOP size [frames]")->required();
    gopt->callback([&a] {
        const models::GopParams params{a.t_max, a.t_buffer, a.frame_rate,
                                       static_cast<int>(a.g_min), static_cast<int>(a.g_max)};
        std::cout << models::optimal_gop(params) << " frames\n";
    });

    auto* pop = eval.add_subcommand("district-population", "District population");
    pop->add_option("--density", a.density, "persons per km^2")->required();
    pop->add_option("--area", a.area, "district area [km^2]")->required();
    pop->callback([&a] {
        std::cout << format_count(scenario::district_population({"", a.density, a.area, 0}))
                  << " persons\n";
    });

    auto* ppt = eval.add_subcommand("persons-per-tower", "Population per tower");
    ppt->add_option("--population", a.population, "persons")->required();
    ppt->add_option("--towers", a.towers, "tower count")->required();
    ppt->callback([&a] {
        std::cout << format_count(scenario::persons_per_tower(a.population, a.towers))
                  << " persons/tower\n";
    });

    auto* conns = eval.add_subcommand("active-connections", "Concurrent platform connections");
    conns->add_option("--population", a.population, "persons")->required();
    conns->add_option("--penetration", a.penetration, "active fraction")->required();
    conns->add_option("--platforms", a.platforms, "platforms per active user")->required();
    conns->callback([&a] {
        std::cout << format_count(
                         scenario::active_connections({a.population, a.penetration, a.platforms}))
                  << " connections\n";
    });

    auto* base = eval.add_subcommand("baseline-cost", "Cost of handled traffic");
    base->add_option("--volume-mb", a.volume_mb, "traffic volume [MB]")->required();
    base->add_option("--unit-cost", a.unit_cost, "cost units per MB")->required();
    base->add_option("--handled", a.handled, "handled fraction")->required();
    base->callback([&a] {
        std::cout << format_cost(
                         scenario::baseline_cost(a.volume_mb, {a.unit_cost, a.handled, 0.0}))
                  << "\n";
    });

    auto* red = eval.add_subcommand("reduced-cost", "Cost after reduction");
    red->add_option("--baseline", a.baseline, "baseline cost units")->required();
    red->add_option("--reduction", a.reduction, "reduction fraction")->required();
    red->callback([&a] {
        std::cout << format_cost(scenario::reduced_cost(a.baseline, {0.0, 0.0, a.reduction}))
                  << "\n";
    });

    auto* off = eval.add_subcommand("offloaded-volume", "AP-offloaded volume per slot");
    off->add_option("--ap-count", a.ap_count, "access points")->required();
    off->add_option("--avg-mb", a.avg_mb, "MB per AP per slot")->required();
    off->add_option("--generated-mb", a.generated_mb, "MB generated per slot")->required();
    off->callback([&a] {
        std::cout << text::format_fixed(
                         scenario::offloaded_volume({a.ap_count, a.avg_mb, a.generated_mb}), 2)
                  << " MB\n";
    });

    auto* ratio = eval.add_subcommand("offload-ratio", "Offloaded share of generated volume");
    ratio->add_option("--offloaded-mb", a.offloaded_mb, "offloaded volume [MB]")->required();
    ratio->add_option("--generated-mb", a.generated_mb, "generated volume [MB]")->required();
    ratio->callback([&a] {
        std::cout << text::format_fraction(scenario::offload_ratio(a.offloaded_mb, a.generated_mb))
                  << "\n";
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic adaptive-streaming simulator for congested mobile networks"};
    app.require_subcommand(1);

    RunOptions run_options;
    auto add_run_flags = [&run_options](CLI::App* cmd) {
        cmd->add_option("--scenario", run_options.scenario_paths,
                        "scenario file (repeatable; omit for the bundled default)");
        cmd->add_option("--seed", run_options.seed, "override the scenario seed");
        cmd->add_option("--slots", run_options.slots, "override the slot count");
        cmd->add_option("--format", run_options.format, "table|csv|structured")
            ->check(CLI::IsMember({"table", "csv", "structured"}));
        cmd->add_option("--output", run_options.output, "destination file (default stdout)");
        cmd->add_option("--chart", run_options.chart_dir, "directory for chart SVGs");
        cmd->add_option("--jobs", run_options.jobs, "concurrent scenario runs");
    };

    CLI::App* run_cmd = app.add_subcommand("run", "Run a scenario and report metrics");
    add_run_flags(run_cmd);
    run_cmd->add_flag("--compare", run_options.compare,
                      "also run the static baseline on the same trace");

    CLI::App* compare_cmd =
        app.add_subcommand("compare", "Run adaptive vs static baseline on one trace");
    add_run_flags(compare_cmd);

    std::string validate_path;
    CLI::App* validate_cmd = app.add_subcommand("validate", "Parse and validate a scenario file");
    validate_cmd->add_option("--scenario", validate_path, "scenario file")->required();

    std::string init_path = "scenario.json";
    CLI::App* init_cmd =
        app.add_subcommand("init-scenario", "Write the bundled default scenario file");
    init_cmd->add_option("--output", init_path, "destination path");

    EvalArgs eval_args;
    CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a single model formula");
    eval_cmd->require_subcommand(1);
    add_eval_commands(*eval_cmd, eval_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        // Bad inline arguments to eval formulas are usage errors.
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }

    try {
        if (run_cmd->parsed()) return run_command(run_options);
        if (compare_cmd->parsed()) {
            run_options.compare = true;
            return run_command(run_options);
        }
        if (validate_cmd->parsed()) {
            const sim::ScenarioConfig config = cli::parse_config(validate_path);
            std::cout << "scenario '" << config.name << "' is valid (" << config.slots
                      << " slots, " << config.interfaces.size() << " interfaces)\n";
            return kExitOk;
        }
        if (init_cmd->parsed()) {
            cli::write_default_scenario(init_path);
            std::cout << "wrote " << init_path << "\n";
            return kExitOk;
        }
        return kExitOk;  // eval callbacks ran during parse
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
