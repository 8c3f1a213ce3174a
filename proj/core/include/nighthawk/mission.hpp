#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nighthawk/bopt.hpp"
#include "nighthawk/controller.hpp"
#include "nighthawk/metrics.hpp"
#include "nighthawk/scenesim.hpp"

namespace nh::mission {

/// The three field configurations compared in the experiments: autoexposure
/// with the light off, autoexposure with the light at full power, and the
/// event-triggered optimizer controlling both knobs.
enum class ConfigMode { AeNoLight, AeFullLight, NightHawk };

const char* config_mode_name(ConfigMode mode);
std::optional<ConfigMode> parse_config_mode(const std::string& name);

/// Pose schedule at 0.25 m per frame from 0 to 86 m (344 frames).
std::vector<double> default_path();

struct MissionConfig {
    sim::ScenarioConfig scenario;
    std::vector<double> path = default_path();
    ConfigMode mode = ConfigMode::NightHawk;
    ctrl::TriggerConfig trigger;
    bopt::BudgetConfig budget;
    bopt::SearchSpace space;
    double ae_target = 0.5;
    double ae_rate = 0.35;
    double ae_min_ms = 0.5;  // camera AE range; wider than the optimizer box
    double ae_max_ms = 40.0;
    int match_k = 100;    // detections per frame for matching/tracking
    int match_radius = 3; // Chebyshev association radius, pixels
    metrics::MetricParams metric_params;
    std::uint64_t seed = 1;

    void validate() const;
};

enum class ActionTag { None, Trigger, Apply };

struct FrameRecord {
    int frame_index = 0;
    double distance_m = 0.0;
    double light = 0.0;
    double exposure_ms = 0.0;
    double m_feat = 0.0;
    double mean_intensity = 0.0;
    ctrl::Mode mode = ctrl::Mode::Monitor;
    ActionTag action = ActionTag::None;
};

/// Segment statistics. Unless stated otherwise, means are over monitor
/// frames: the per-pose steady-state captures shared by all three modes
/// (optimization evaluation frames are logged but would double-count their
/// pose).
struct MissionSummary {
    int frame_count = 0;
    int monitor_frame_count = 0;
    int trigger_count = 0;
    double mean_mfeat_outside = 0.0; // poses outside the culvert span
    double mean_mfeat_deep = 0.0;    // poses with ambient <= 2*ambient_floor
    double mean_mfeat_monitor = 0.0;
    double mean_mfeat_all = 0.0;     // every frame including optimization evals
    double mean_exposure_ms = 0.0;
    double mean_light = 0.0;
    double mean_track_length = 0.0;
};

struct MissionRecord {
    std::vector<FrameRecord> frames;
    MissionSummary summary;
};

/// Pure single-pose utility: renders one frame and scores it with m_feat.
/// The frame seed is derived from (stream_seed, control bits), so the
/// function is deterministic and repeatable per control point.
double scene_utility(const sim::ScenarioConfig& scenario, const sim::Pose& pose,
                     const bopt::ControlInput& ctl, std::uint64_t stream_seed,
                     const metrics::MetricParams& params = {});

/// scene_utility wrapped as an optimization objective.
bopt::Objective scene_objective(const sim::ScenarioConfig& scenario, const sim::Pose& pose,
                                std::uint64_t stream_seed,
                                const metrics::MetricParams& params = {});

/// Runs one mission in the requested mode. Deterministic given the config
/// (including seed); NightHawk pauses the pose schedule while an
/// optimization's evaluation frames are captured.
MissionRecord run_mission(const MissionConfig& cfg);

/// Mission event log CSV: frame_index,d,P,dt_ms,m_feat,mean_intensity,mode,action.
std::string mission_csv(const MissionRecord& record);

/// Exhaustive ground truth: evaluates the objective on a resolution x
/// resolution uniform grid (same row-major convention as the acquisition
/// grid) and returns the argmax, ties broken by lowest index. With
/// threads > 1 evaluation is parallelized; results commit in index order,
/// so the outcome is identical. The objective must then be thread-safe.
std::pair<bopt::ControlInput, double> grid_oracle(const bopt::Objective& objective,
                                                  const bopt::SearchSpace& space,
                                                  int resolution, int threads = 1);

/// Greedy frame-to-frame linking of top-k detections (one-to-one nearest
/// within the Chebyshev radius, ties by detection order). Returns the mean
/// track length in frames; every track counts, with length >= 1.
double track_lengths(std::span<const Image> frames, int k, int radius,
                     const metrics::MetricParams& params = {});

struct MetricCorrelation {
    metrics::MetricKind kind = metrics::MetricKind::Feat;
    std::optional<double> rho; // empty when the correlation is undefined
};

struct BenchmarkResult {
    // Per frame: the four metrics; matches[i] pairs frame i with i+1.
    std::vector<std::array<double, 4>> metric_rows;
    std::vector<int> matches;
    std::vector<MetricCorrelation> correlations;
};

/// Correlates each metric with feature matching across consecutive frames
/// (the metric of the earlier frame in each pair).
BenchmarkResult metric_benchmark(std::span<const Image> frames, int k, int radius,
                                 const metrics::MetricParams& params = {});

/// Per-frame metric table CSV: frame_index,m_feat,m_shim,m_softperc,m_newg,matches.
std::string benchmark_frames_csv(const BenchmarkResult& result);

/// Correlation table CSV: metric,spearman (NA when undefined).
std::string benchmark_correlations_csv(const BenchmarkResult& result);

/// Deterministic exposure sweep at a fixed pose: n frames with exposure
/// uniformly spanning the search-space bounds at the given light fraction.
std::vector<Image> render_sweep(const sim::ScenarioConfig& scenario, const sim::Pose& pose,
                                double light, const bopt::SearchSpace& space, int n_frames,
                                std::uint64_t seed);

} // namespace nh::mission
