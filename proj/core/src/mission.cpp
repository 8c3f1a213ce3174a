#include "nighthawk/mission.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include "nighthawk/csv.hpp"
#include "nighthawk/errors.hpp"
#include "nighthawk/rng.hpp"

namespace nh::mission {

namespace {

constexpr std::uint64_t kOptRoundSalt = 0x0b7a11edULL;

const char* mode_name(ctrl::Mode mode) {
    return mode == ctrl::Mode::Monitor ? "monitor" : "optimizing";
}

const char* action_name(ActionTag tag) {
    switch (tag) {
        case ActionTag::None: return "";
        case ActionTag::Trigger: return "trigger";
        case ActionTag::Apply: return "apply";
    }
    return "";
}

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc / static_cast<double>(xs.size());
}

// One-to-one greedy association between a track's last position and the
// current frame's detections.
struct Track {
    int x = 0;
    int y = 0;
    int length = 1;
    bool alive = true;
};

} // namespace

const char* config_mode_name(ConfigMode mode) {
    switch (mode) {
        case ConfigMode::AeNoLight: return "ae-no-light";
        case ConfigMode::AeFullLight: return "ae-full-light";
        case ConfigMode::NightHawk: return "nighthawk";
    }
    return "?";
}

std::optional<ConfigMode> parse_config_mode(const std::string& name) {
    if (name == "ae-no-light") return ConfigMode::AeNoLight;
    if (name == "ae-full-light") return ConfigMode::AeFullLight;
    if (name == "nighthawk") return ConfigMode::NightHawk;
    return std::nullopt;
}

std::vector<double> default_path() {
    std::vector<double> path;
    for (int i = 0; static_cast<double>(i) * 0.25 < 86.0; ++i) {
        path.push_back(static_cast<double>(i) * 0.25);
    }
    return path;
}

void MissionConfig::validate() const {
    scenario.validate();
    trigger.validate();
    space.validate();
    if (path.empty()) throw InvalidInputError("mission path is empty");
    for (std::size_t i = 1; i < path.size(); ++i) {
        if (!(path[i] > path[i - 1])) {
            throw InvalidInputError("mission path must be strictly increasing");
        }
    }
    if (path.front() < 0.0) throw InvalidInputError("mission path starts before 0");
    if (match_k < 1) throw InvalidInputError("match_k must be >= 1");
    if (match_radius < 0) throw InvalidInputError("match_radius must be >= 0");
    if (!(ae_target > 0.0 && ae_target <= 1.0) || ae_rate < 0.0) {
        throw InvalidInputError("invalid autoexposure parameters");
    }
    if (!(ae_min_ms > 0.0 && ae_max_ms > ae_min_ms)) {
        throw InvalidInputError("camera AE range requires 0 < min < max");
    }
}

double scene_utility(const sim::ScenarioConfig& scenario, const sim::Pose& pose,
                     const bopt::ControlInput& ctl, std::uint64_t frame_seed,
                     const metrics::MetricParams& params) {
    const Image img = sim::render(scenario, pose, ctl, frame_seed);
    return metrics::m_feat(metrics::response_maps(img, params));
}

bopt::Objective scene_objective(const sim::ScenarioConfig& scenario, const sim::Pose& pose,
                                std::uint64_t frame_seed,
                                const metrics::MetricParams& params) {
    // The noise field is frozen for the whole optimization (the scene is
    // static while the robot pauses), so the objective is a deterministic
    // function and the grid oracle measures the same landscape.
    return [=](const bopt::ControlInput& ctl) {
        return scene_utility(scenario, pose, ctl, frame_seed, params);
    };
}

MissionRecord run_mission(const MissionConfig& cfg) {
    cfg.validate();
    MissionRecord record;
    std::vector<Image> monitor_frames;
    monitor_frames.reserve(cfg.path.size());
    int frame_index = 0;

    auto capture = [&](double distance, const bopt::ControlInput& ctl)
        -> std::pair<Image, std::pair<double, double>> {
        try {
            const Image img =
                sim::render(cfg.scenario, {distance}, ctl,
                            rng::mix(cfg.seed, static_cast<std::uint64_t>(frame_index)));
            const double m = metrics::m_feat(metrics::response_maps(img, cfg.metric_params));
            const double mean = mean_intensity(img);
            return {img, {m, mean}};
        } catch (const std::exception& e) {
            throw Error("frame " + std::to_string(frame_index) + ": " + e.what());
        }
    };

    if (cfg.mode == ConfigMode::AeNoLight || cfg.mode == ConfigMode::AeFullLight) {
        const double light = cfg.mode == ConfigMode::AeFullLight ? 1.0 : 0.0;
        sim::AeState ae;
        ae.target = cfg.ae_target;
        ae.rate = cfg.ae_rate;
        ae.min_ms = cfg.ae_min_ms;
        ae.max_ms = cfg.ae_max_ms;
        ae.exposure_ms = std::clamp(cfg.scenario.exposure_ref_ms, ae.min_ms, ae.max_ms);
        for (double d : cfg.path) {
            const bopt::ControlInput ctl{light, ae.exposure_ms};
            auto [img, scores] = capture(d, ctl);
            record.frames.push_back({frame_index, d, ctl.light, ctl.exposure_ms, scores.first,
                                     scores.second, ctrl::Mode::Monitor, ActionTag::None});
            monitor_frames.push_back(std::move(img));
            ae = sim::autoexposure_step(ae, scores.second);
            ++frame_index;
        }
    } else {
        ctrl::ControllerState state = ctrl::ControllerState::startup();
        int opt_round = 0;

        // Runs one optimization at a frozen pose; every evaluation is
        // captured as a frame, and the completing frame carries the apply.
        auto optimize_here = [&](double distance) {
            bopt::BudgetConfig budget = cfg.budget;
            budget.seed = rng::mix(cfg.seed, kOptRoundSalt,
                                   static_cast<std::uint64_t>(opt_round));
            const std::uint64_t stream_seed =
                rng::mix(cfg.seed, kOptRoundSalt + 1, static_cast<std::uint64_t>(opt_round));
            ++opt_round;
            const auto objective = [&](const bopt::ControlInput& ctl) {
                double m = 0.0;
                double mean = 0.0;
                try {
                    const Image img = sim::render(cfg.scenario, {distance}, ctl, stream_seed);
                    m = metrics::m_feat(metrics::response_maps(img, cfg.metric_params));
                    mean = mean_intensity(img);
                } catch (const std::exception& e) {
                    throw Error("frame " + std::to_string(frame_index) + ": " + e.what());
                }
                record.frames.push_back({frame_index, distance, ctl.light, ctl.exposure_ms,
                                         m, mean, ctrl::Mode::Optimizing, ActionTag::None});
                ++frame_index;
                state = ctrl::step(state, m, cfg.trigger).first; // ignored while optimizing
                return m;
            };
            const bopt::OptResult result = bopt::optimize(objective, cfg.space, budget);
            state = ctrl::complete_optimization(state, result).first;
            record.frames.back().action = ActionTag::Apply;
        };

        optimize_here(cfg.path.front()); // mandatory startup optimization

        for (double d : cfg.path) {
            const bopt::ControlInput ctl = *state.current;
            auto [img, scores] = capture(d, ctl);
            const auto [next, action] = ctrl::step(state, scores.first, cfg.trigger);
            state = next;
            const ActionTag tag = action.kind == ctrl::Action::Kind::TriggerOptimization
                                      ? ActionTag::Trigger
                                      : ActionTag::None;
            record.frames.push_back({frame_index, d, ctl.light, ctl.exposure_ms, scores.first,
                                     scores.second, ctrl::Mode::Monitor, tag});
            monitor_frames.push_back(std::move(img));
            ++frame_index;
            if (tag == ActionTag::Trigger) {
                optimize_here(d); // robot pauses at the triggering pose
            }
        }
    }

    // Segment statistics over monitor frames.
    MissionSummary& s = record.summary;
    s.frame_count = static_cast<int>(record.frames.size());
    std::vector<double> outside, deep, monitor, all, exposures, lights;
    for (const FrameRecord& fr : record.frames) {
        all.push_back(fr.m_feat);
        if (fr.action == ActionTag::Trigger) ++s.trigger_count;
        if (fr.mode != ctrl::Mode::Monitor) continue;
        monitor.push_back(fr.m_feat);
        exposures.push_back(fr.exposure_ms);
        lights.push_back(fr.light);
        const double amb = sim::ambient(cfg.scenario, {fr.distance_m});
        if (fr.distance_m <= cfg.scenario.culvert_in_m ||
            fr.distance_m >= cfg.scenario.culvert_out_m) {
            outside.push_back(fr.m_feat);
        } else if (amb <= 2.0 * cfg.scenario.ambient_floor) {
            deep.push_back(fr.m_feat);
        }
    }
    s.monitor_frame_count = static_cast<int>(monitor.size());
    s.mean_mfeat_outside = mean_of(outside);
    s.mean_mfeat_deep = mean_of(deep);
    s.mean_mfeat_monitor = mean_of(monitor);
    s.mean_mfeat_all = mean_of(all);
    s.mean_exposure_ms = mean_of(exposures);
    s.mean_light = mean_of(lights);
    s.mean_track_length = monitor_frames.size() >= 2
                              ? track_lengths(monitor_frames, cfg.match_k, cfg.match_radius,
                                              cfg.metric_params)
                              : static_cast<double>(monitor_frames.size());
    return record;
}

std::string mission_csv(const MissionRecord& record) {
    std::ostringstream os;
    os << "frame_index,d,P,dt_ms,m_feat,mean_intensity,mode,action\n";
    for (const FrameRecord& fr : record.frames) {
        os << fr.frame_index << ',' << csv::number(fr.distance_m) << ','
           << csv::number(fr.light) << ',' << csv::number(fr.exposure_ms) << ','
           << csv::number(fr.m_feat) << ',' << csv::number(fr.mean_intensity) << ','
           << mode_name(fr.mode) << ',' << action_name(fr.action) << '\n';
    }
    return os.str();
}

std::pair<bopt::ControlInput, double> grid_oracle(const bopt::Objective& objective,
                                                  const bopt::SearchSpace& space,
                                                  int resolution, int threads) {
    space.validate();
    if (resolution < 2) throw InvalidInputError("grid_oracle needs resolution >= 2");
    const int total = resolution * resolution;
    auto point_at = [&](int index) {
        const double denom = resolution - 1;
        return space.denormalize({static_cast<double>(index / resolution) / denom,
                                  static_cast<double>(index % resolution) / denom});
    };

    std::vector<double> values(static_cast<std::size_t>(total));
    const int workers = std::clamp(threads, 1, total);
    if (workers == 1) {
        for (int i = 0; i < total; ++i) values[static_cast<std::size_t>(i)] = objective(point_at(i));
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::atomic<int> cursor{0};
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                try {
                    for (int i = cursor.fetch_add(1); i < total; i = cursor.fetch_add(1)) {
                        values[static_cast<std::size_t>(i)] = objective(point_at(i));
                    }
                } catch (...) {
                    std::scoped_lock lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    int best = 0;
    for (int i = 1; i < total; ++i) {
        if (values[static_cast<std::size_t>(i)] > values[static_cast<std::size_t>(best)]) best = i;
    }
    return {point_at(best), values[static_cast<std::size_t>(best)]};
}

double track_lengths(std::span<const Image> frames, int k, int radius,
                     const metrics::MetricParams& params) {
    if (frames.size() < 2) throw InvalidInputError("track_lengths needs at least 2 frames");
    for (std::size_t i = 1; i < frames.size(); ++i) {
        if (frames[i].width != frames[0].width || frames[i].height != frames[0].height) {
            throw InvalidInputError("track_lengths: frame dimension mismatch");
        }
    }

    std::vector<Track> tracks;
    std::vector<std::size_t> active; // indices into tracks, creation order
    for (std::size_t t = 0; t < frames.size(); ++t) {
        const auto detections =
            metrics::detect_top_k(metrics::response_maps(frames[t], params), k);
        std::vector<bool> claimed(detections.size(), false);
        std::vector<std::size_t> next_active;
        for (std::size_t ti : active) {
            Track& track = tracks[ti];
            int pick = -1;
            int pick_dist = radius + 1;
            for (std::size_t j = 0; j < detections.size(); ++j) {
                if (claimed[j]) continue;
                const int dist = std::max(std::abs(detections[j].x - track.x),
                                          std::abs(detections[j].y - track.y));
                if (dist < pick_dist) { // strict: ties keep the earlier detection
                    pick_dist = dist;
                    pick = static_cast<int>(j);
                }
            }
            if (pick >= 0) {
                claimed[static_cast<std::size_t>(pick)] = true;
                track.x = detections[static_cast<std::size_t>(pick)].x;
                track.y = detections[static_cast<std::size_t>(pick)].y;
                ++track.length;
                next_active.push_back(ti);
            } else {
                track.alive = false;
            }
        }
        for (std::size_t j = 0; j < detections.size(); ++j) {
            if (!claimed[j]) {
                next_active.push_back(tracks.size());
                tracks.push_back({detections[j].x, detections[j].y, 1, true});
            }
        }
        active = std::move(next_active);
    }
    if (tracks.empty()) return 0.0;
    double acc = 0.0;
    for (const Track& tr : tracks) acc += tr.length;
    return acc / static_cast<double>(tracks.size());
}

BenchmarkResult metric_benchmark(std::span<const Image> frames, int k, int radius,
                                 const metrics::MetricParams& params) {
    if (frames.size() < 10) throw InvalidInputError("metric_benchmark needs >= 10 frames");
    BenchmarkResult result;
    std::vector<std::vector<metrics::Detection>> detections;
    detections.reserve(frames.size());
    for (const Image& img : frames) {
        const auto maps = metrics::response_maps(img, params);
        const GradField grad = gradient_magnitude(img);
        result.metric_rows.push_back({metrics::m_feat(maps), metrics::m_shim(grad, params),
                                      metrics::m_softperc(grad, params),
                                      metrics::m_newg(img, grad, params)});
        detections.push_back(metrics::detect_top_k(maps, k));
    }
    for (std::size_t i = 0; i + 1 < frames.size(); ++i) {
        int matched = 0;
        for (const metrics::Detection& p : detections[i]) {
            for (const metrics::Detection& q : detections[i + 1]) {
                if (std::abs(p.x - q.x) <= radius && std::abs(p.y - q.y) <= radius) {
                    ++matched;
                    break;
                }
            }
        }
        result.matches.push_back(matched);
    }

    std::vector<double> match_series(result.matches.begin(), result.matches.end());
    for (int kind = 0; kind < 4; ++kind) {
        std::vector<double> series;
        series.reserve(match_series.size());
        for (std::size_t i = 0; i < match_series.size(); ++i) {
            series.push_back(result.metric_rows[i][static_cast<std::size_t>(kind)]);
        }
        MetricCorrelation row;
        row.kind = static_cast<metrics::MetricKind>(kind);
        try {
            row.rho = metrics::spearman(series, match_series);
        } catch (const UndefinedCorrelationError&) {
            row.rho = std::nullopt;
        }
        result.correlations.push_back(row);
    }
    return result;
}

std::string benchmark_frames_csv(const BenchmarkResult& result) {
    std::ostringstream os;
    os << "frame_index,m_feat,m_shim,m_softperc,m_newg,matches\n";
    for (std::size_t i = 0; i < result.metric_rows.size(); ++i) {
        const auto& row = result.metric_rows[i];
        os << i << ',' << csv::number(row[0]) << ',' << csv::number(row[1]) << ','
           << csv::number(row[2]) << ',' << csv::number(row[3]) << ',';
        if (i < result.matches.size()) os << result.matches[i];
        os << '\n';
    }
    return os.str();
}

std::string benchmark_correlations_csv(const BenchmarkResult& result) {
    std::ostringstream os;
    os << "metric,spearman\n";
    for (const MetricCorrelation& row : result.correlations) {
        os << metrics::metric_name(row.kind) << ',';
        if (row.rho) {
            os << csv::number(*row.rho);
        } else {
            os << "NA";
        }
        os << '\n';
    }
    return os.str();
}

std::vector<Image> render_sweep(const sim::ScenarioConfig& scenario, const sim::Pose& pose,
                                double light, const bopt::SearchSpace& space, int n_frames,
                                std::uint64_t seed) {
    if (n_frames < 2) throw InvalidInputError("render_sweep needs at least 2 frames");
    space.validate();
    std::vector<Image> frames;
    frames.reserve(static_cast<std::size_t>(n_frames));
    for (int i = 0; i < n_frames; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n_frames - 1);
        const double exposure =
            space.exposure_min_ms + t * (space.exposure_max_ms - space.exposure_min_ms);
        frames.push_back(sim::render(scenario, pose, {light, exposure},
                                     rng::mix(seed, static_cast<std::uint64_t>(i))));
    }
    return frames;
}

} // namespace nh::mission
