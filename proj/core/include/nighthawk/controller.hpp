#pragma once

#include <optional>
#include <utility>

#include "nighthawk/bopt.hpp"

namespace nh::ctrl {

/// Trigger rule parameters: re-optimize when the per-frame metric falls
/// more than epsilon below the last optimum for debounce_n consecutive
/// frames. The debounce rejects ephemeral lighting dips.
struct TriggerConfig {
    double epsilon = 0.01;
    int debounce_n = 5;

    void validate() const;
};

enum class Mode { Monitor, Optimizing };

/// Monitor/optimize state machine. Starts in Optimizing: the initial
/// configuration always comes from a startup optimization, never from a
/// hand-set default, so `current` is empty until the first completion.
struct ControllerState {
    Mode mode = Mode::Optimizing;
    std::optional<bopt::ControlInput> current;
    double best_metric = 0.0; // utility at the last optimization's optimum
    int violation_count = 0;

    static ControllerState startup() { return {}; }
};

struct Action {
    enum class Kind { None, TriggerOptimization, ApplyConfig };
    Kind kind = Kind::None;
    std::optional<bopt::ControlInput> config; // set for ApplyConfig

    static Action none() { return {}; }
    static Action trigger() { return {Kind::TriggerOptimization, std::nullopt}; }
    static Action apply(bopt::ControlInput ctl) { return {Kind::ApplyConfig, ctl}; }
};

/// Pure transition on one frame's metric. In Monitor, counts consecutive
/// violations of best_metric - frame_metric > epsilon and emits
/// TriggerOptimization when the count reaches debounce_n; any
/// non-violating frame resets the count. In Optimizing, frames are
/// ignored until complete_optimization is called.
std::pair<ControllerState, Action> step(const ControllerState& state, double frame_metric,
                                        const TriggerConfig& config);

/// Commits an optimization result: back to Monitor with the new
/// configuration and optimum, emitting ApplyConfig. Throws
/// InvalidStateError when called in Monitor mode.
std::pair<ControllerState, Action> complete_optimization(const ControllerState& state,
                                                         const bopt::OptResult& result);

} // namespace nh::ctrl
