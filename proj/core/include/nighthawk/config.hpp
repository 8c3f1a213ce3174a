#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nighthawk/mission.hpp"

namespace nh::config {

/// Everything a run needs, with the project defaults. Parsed from flat
/// `key = value` text ('#' starts a comment, unknown keys are an error).
struct RunConfig {
    sim::ScenarioConfig scenario;
    bopt::SearchSpace space;
    bopt::BudgetConfig budget;
    ctrl::TriggerConfig trigger;
    metrics::MetricParams metrics;
    double ae_target = 0.5;
    double ae_rate = 0.35;
    double ae_min_ms = 0.5;
    double ae_max_ms = 40.0;
    double path_start_m = 0.0;
    double path_end_m = 86.0;
    double path_step_m = 0.25;
    int match_k = 100;
    int match_radius = 3;
    int sweep_frames = 40;
    double sweep_light = 0.6;
    double sweep_pose_m = 43.0; // culvert midpoint with the default span
    double xi = 0.01;           // EI exploration margin, standardized units
    std::uint64_t seed = 1;

    void validate() const;
    std::vector<double> make_path() const;
    mission::MissionConfig make_mission(mission::ConfigMode mode) const;
};

/// Parses config text; throws ConfigError on syntax errors, unknown keys,
/// malformed numbers, or invalid settings.
RunConfig parse(const std::string& text);
RunConfig load(const std::filesystem::path& path);

} // namespace nh::config
