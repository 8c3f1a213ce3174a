// nighthawk: active illumination and exposure control toolkit.
//
// Subcommands drive the synthetic culvert scene: render frames, run a
// single-pose optimization or its exhaustive grid reference, replay full
// missions in the three camera configurations, benchmark the image utility
// metrics, and plot any of the emitted CSVs as SVG line charts.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nighthawk/config.hpp"
#include "nighthawk/csv.hpp"
#include "nighthawk/errors.hpp"
#include "nighthawk/mission.hpp"
#include "nighthawk/pgm.hpp"
#include "nighthawk/rng.hpp"
#include "nighthawk/svg.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct GlobalArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
};

nh::config::RunConfig load_config(const GlobalArgs& args) {
    nh::config::RunConfig cfg;
    if (!args.config_path.empty()) {
        cfg = nh::config::load(args.config_path);
    }
    if (args.seed_set) {
        cfg.seed = args.seed;
        cfg.budget.seed = args.seed;
    }
    return cfg;
}

std::filesystem::path out_file(const GlobalArgs& args, const std::string& name) {
    std::filesystem::create_directories(args.out_dir);
    return std::filesystem::path(args.out_dir) / name;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw nh::Error("cannot open for writing: " + path.string());
    os << content;
    if (!os) throw nh::Error("write failed: " + path.string());
}

int run_simulate(const GlobalArgs& args, int frames, double light, double exposure_ms) {
    const auto cfg = load_config(args);
    auto path = cfg.make_path();
    if (frames > 0 && static_cast<std::size_t>(frames) < path.size()) {
        path.resize(static_cast<std::size_t>(frames));
    }
    char name[32];
    for (std::size_t i = 0; i < path.size(); ++i) {
        const nh::Image img =
            nh::sim::render(cfg.scenario, {path[i]}, {light, exposure_ms},
                            nh::rng::mix(cfg.seed, static_cast<std::uint64_t>(i)));
        std::snprintf(name, sizeof(name), "frame_%05zu.pgm", i);
        nh::pgm::write_file(out_file(args, name), img);
    }
    std::cout << "wrote " << path.size() << " frames to " << args.out_dir << "\n";
    return kExitOk;
}

int run_optimize(const GlobalArgs& args, double pose_m) {
    const auto cfg = load_config(args);
    const double pose = pose_m >= 0.0 ? pose_m : cfg.sweep_pose_m;
    const auto objective =
        nh::mission::scene_objective(cfg.scenario, {pose}, cfg.seed, cfg.metrics);
    const auto result = nh::bopt::optimize(objective, cfg.space, cfg.budget, cfg.xi);
    write_text(out_file(args, "optimize_trace.csv"), nh::bopt::trace_csv(result));
    std::cout << "best: P=" << nh::csv::number(result.x_star.light)
              << " dt_ms=" << nh::csv::number(result.x_star.exposure_ms)
              << " m_feat=" << nh::csv::number(result.y_star) << " evals=" << result.history.size()
              << " stop=" << nh::bopt::stop_reason_name(result.stop_reason) << "\n";
    return kExitOk;
}

int run_oracle(const GlobalArgs& args, double pose_m, int resolution, int threads) {
    const auto cfg = load_config(args);
    const double pose = pose_m >= 0.0 ? pose_m : cfg.sweep_pose_m;
    const auto objective =
        nh::mission::scene_objective(cfg.scenario, {pose}, cfg.seed, cfg.metrics);

    // Emit the full grid alongside the argmax so the landscape can be
    // plotted or diffed.
    std::string csv = "index,P,dt_ms,y\n";
    const auto [best, value] = nh::mission::grid_oracle(
        [&](const nh::bopt::ControlInput& ctl) { return objective(ctl); }, cfg.space,
        resolution, threads);
    // Second pass for the CSV keeps grid_oracle's contract minimal.
    for (int i = 0; i < resolution * resolution; ++i) {
        const double denom = resolution - 1;
        const auto ctl = cfg.space.denormalize(
            {static_cast<double>(i / resolution) / denom,
             static_cast<double>(i % resolution) / denom});
        csv += std::to_string(i);
        csv += ',';
        csv += nh::csv::number(ctl.light);
        csv += ',';
        csv += nh::csv::number(ctl.exposure_ms);
        csv += ',';
        csv += nh::csv::number(objective(ctl));
        csv += '\n';
    }
    write_text(out_file(args, "oracle_grid.csv"), csv);
    std::cout << "oracle: P=" << nh::csv::number(best.light)
              << " dt_ms=" << nh::csv::number(best.exposure_ms)
              << " m_feat=" << nh::csv::number(value) << "\n";
    return kExitOk;
}

int run_mission_cmd(const GlobalArgs& args, const std::string& mode_name) {
    const auto cfg = load_config(args);
    std::vector<nh::mission::ConfigMode> modes;
    if (mode_name == "all") {
        modes = {nh::mission::ConfigMode::AeNoLight, nh::mission::ConfigMode::AeFullLight,
                 nh::mission::ConfigMode::NightHawk};
    } else if (const auto mode = nh::mission::parse_config_mode(mode_name)) {
        modes = {*mode};
    } else {
        throw nh::ConfigError("unknown mission mode: " + mode_name);
    }
    for (const auto mode : modes) {
        const auto record = nh::mission::run_mission(cfg.make_mission(mode));
        const std::string stem = std::string("mission_") + nh::mission::config_mode_name(mode);
        write_text(out_file(args, stem + ".csv"), nh::mission::mission_csv(record));
        const auto& s = record.summary;
        std::cout << nh::mission::config_mode_name(mode) << ": frames=" << s.frame_count
                  << " triggers=" << s.trigger_count
                  << " deep_m=" << nh::csv::number(s.mean_mfeat_deep)
                  << " outside_m=" << nh::csv::number(s.mean_mfeat_outside)
                  << " mean_dt_ms=" << nh::csv::number(s.mean_exposure_ms)
                  << " mean_P=" << nh::csv::number(s.mean_light)
                  << " track_len=" << nh::csv::number(s.mean_track_length) << "\n";
    }
    return kExitOk;
}

int run_bench_metrics(const GlobalArgs& args) {
    const auto cfg = load_config(args);
    const auto frames =
        nh::mission::render_sweep(cfg.scenario, {cfg.sweep_pose_m}, cfg.sweep_light,
                                  cfg.space, cfg.sweep_frames, cfg.seed);
    const auto result =
        nh::mission::metric_benchmark(frames, cfg.match_k, cfg.match_radius, cfg.metrics);
    write_text(out_file(args, "bench_frames.csv"), nh::mission::benchmark_frames_csv(result));
    write_text(out_file(args, "bench_correlations.csv"),
               nh::mission::benchmark_correlations_csv(result));
    for (const auto& row : result.correlations) {
        std::cout << nh::metrics::metric_name(row.kind) << ": "
                  << (row.rho ? nh::csv::number(*row.rho) : std::string("NA")) << "\n";
    }
    return kExitOk;
}

int run_plot(const GlobalArgs& args, const std::string& input, const std::string& x_col,
             const std::string& y_cols, const std::string& output, std::string title) {
    const auto table = nh::csv::read_file(input);
    const std::vector<double> xs = table.numeric_column(x_col);
    std::vector<nh::svg::Series> series;
    std::string col;
    std::istringstream cols(y_cols);
    while (std::getline(cols, col, ',')) {
        if (col.empty()) continue;
        series.push_back({col, xs, table.numeric_column(col)});
    }
    if (series.empty()) throw nh::ConfigError("plot: no y columns given");
    if (title.empty()) title = std::filesystem::path(input).filename().string();
    const std::string svg = nh::svg::line_chart(title, x_col, y_cols, series);
    nh::svg::write_file(out_file(args, output), svg);
    std::cout << "wrote " << (std::filesystem::path(args.out_dir) / output).string() << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Active illumination and exposure control over a synthetic culvert scene"};
    app.require_subcommand(1);

    GlobalArgs args;
    app.add_option("--config", args.config_path, "Flat key=value config file");
    app.add_option("--out", args.out_dir, "Output directory (default .)");
    auto* seed_opt = app.add_option("--seed", args.seed, "Run seed (overrides config)");

    int sim_frames = -1;
    double sim_light = 0.5, sim_exposure = 10.0;
    auto* simulate = app.add_subcommand("simulate", "Render frames along the mission path");
    simulate->add_option("--frames", sim_frames, "Limit the number of frames");
    simulate->add_option("--light", sim_light, "Light fraction in [0,1]")
        ->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--exposure-ms", sim_exposure, "Exposure time, ms")
        ->check(CLI::PositiveNumber);

    double opt_pose = -1.0;
    auto* optimize = app.add_subcommand("optimize", "Single-pose Bayesian optimization");
    optimize->add_option("--pose", opt_pose, "Pose in meters (default: mid-culvert)");

    double oracle_pose = -1.0;
    int oracle_res = 101, oracle_threads = 1;
    auto* oracle = app.add_subcommand("oracle", "Exhaustive grid search reference");
    oracle->add_option("--pose", oracle_pose, "Pose in meters (default: mid-culvert)");
    oracle->add_option("--resolution", oracle_res, "Grid resolution per axis")
        ->check(CLI::Range(2, 2001));
    oracle->add_option("--threads", oracle_threads, "Worker threads")->check(CLI::PositiveNumber);

    std::string mission_mode = "all";
    auto* mission = app.add_subcommand("mission", "Run the culvert mission");
    mission->add_option("--mode", mission_mode,
                        "ae-no-light | ae-full-light | nighthawk | all");

    auto* bench = app.add_subcommand("bench-metrics", "Metric/matching correlation benchmark");

    std::string plot_in, plot_x, plot_y, plot_out = "plot.svg", plot_title;
    auto* plot = app.add_subcommand("plot", "Render CSV columns as an SVG line chart");
    plot->add_option("--in", plot_in, "Input CSV")->required();
    plot->add_option("--x", plot_x, "X column name")->required();
    plot->add_option("--y", plot_y, "Comma-separated Y column names")->required();
    plot->add_option("--of", plot_out, "Output SVG filename");
    plot->add_option("--title", plot_title, "Chart title");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }
    args.seed_set = seed_opt->count() > 0;

    try {
        if (simulate->parsed()) return run_simulate(args, sim_frames, sim_light, sim_exposure);
        if (optimize->parsed()) return run_optimize(args, opt_pose);
        if (oracle->parsed()) return run_oracle(args, oracle_pose, oracle_res, oracle_threads);
        if (mission->parsed()) return run_mission_cmd(args, mission_mode);
        if (bench->parsed()) return run_bench_metrics(args);
        if (plot->parsed()) return run_plot(args, plot_in, plot_x, plot_y, plot_out, plot_title);
    } catch (const nh::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
