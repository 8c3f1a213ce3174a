#include <doctest.h>

#include <random>

#include "nighthawk/controller.hpp"
#include "nighthawk/errors.hpp"

namespace ctrl = nh::ctrl;
using ctrl::Action;
using ctrl::ControllerState;
using ctrl::Mode;
using ctrl::TriggerConfig;

namespace {

ControllerState monitoring(double best_metric) {
    ControllerState s;
    s.mode = Mode::Monitor;
    s.current = nh::bopt::ControlInput{0.5, 10.0};
    s.best_metric = best_metric;
    s.violation_count = 0;
    return s;
}

nh::bopt::OptResult result_with(double y_star, double light = 0.54, double exposure = 7.77) {
    nh::bopt::OptResult r;
    r.x_star = {light, exposure};
    r.y_star = y_star;
    r.history = {{r.x_star, y_star}};
    r.stop_reason = nh::bopt::StopReason::Budget;
    return r;
}

} // namespace

TEST_CASE("a frame within tolerance leaves the counter at zero") {
    const TriggerConfig cfg{0.1, 3};
    const auto [next, action] = ctrl::step(monitoring(0.5), 0.45, cfg);
    CHECK(action.kind == Action::Kind::None);
    CHECK(next.violation_count == 0);
    CHECK(next.mode == Mode::Monitor);
}

TEST_CASE("three consecutive violations trigger on the third step") {
    const TriggerConfig cfg{0.1, 3};
    ControllerState state = monitoring(0.5);
    for (int i = 0; i < 2; ++i) {
        const auto [next, action] = ctrl::step(state, 0.3, cfg);
        CHECK(action.kind == Action::Kind::None);
        CHECK(next.violation_count == i + 1);
        state = next;
    }
    const auto [fired, action] = ctrl::step(state, 0.3, cfg);
    CHECK(action.kind == Action::Kind::TriggerOptimization);
    CHECK(fired.mode == Mode::Optimizing);
    CHECK(fired.violation_count == 3);
}

TEST_CASE("a recovering frame resets the debounce") {
    // Frames (0.3, 0.3, 0.45, 0.3, 0.3, 0.3): the dip at frame 3 resets the
    // counter, so the trigger lands on frame 6 rather than frame 4.
    const TriggerConfig cfg{0.1, 3};
    const double frames[] = {0.3, 0.3, 0.45, 0.3, 0.3, 0.3};
    ControllerState state = monitoring(0.5);
    int triggered_at = 0;
    for (int i = 0; i < 6; ++i) {
        const auto [next, action] = ctrl::step(state, frames[i], cfg);
        state = next;
        if (action.kind == Action::Kind::TriggerOptimization) {
            triggered_at = i + 1;
            break;
        }
    }
    CHECK(triggered_at == 6);
}

TEST_CASE("completion applies the new configuration") {
    ControllerState optimizing = ControllerState::startup();
    CHECK(optimizing.mode == Mode::Optimizing);
    CHECK_FALSE(optimizing.current.has_value());

    const auto [next, action] = ctrl::complete_optimization(optimizing, result_with(0.62));
    CHECK(next.mode == Mode::Monitor);
    CHECK(next.best_metric == 0.62);
    CHECK(next.violation_count == 0);
    REQUIRE(next.current.has_value());
    CHECK(next.current->light == 0.54);
    CHECK(action.kind == Action::Kind::ApplyConfig);
    REQUIRE(action.config.has_value());
    CHECK(action.config->exposure_ms == 7.77);

    // Completing twice without a trigger in between is a state error.
    CHECK_THROWS_AS(ctrl::complete_optimization(next, result_with(0.5)),
                    nh::InvalidStateError);
}

TEST_CASE("frames are ignored while optimizing") {
    ControllerState state = ControllerState::startup();
    for (double metric : {0.0, 0.2, 0.9}) {
        const auto [next, action] = ctrl::step(state, metric, TriggerConfig{0.01, 1});
        CHECK(action.kind == Action::Kind::None);
        CHECK(next.mode == Mode::Optimizing);
        CHECK(next.violation_count == state.violation_count);
    }
}

TEST_CASE("step is a pure transition function") {
    const TriggerConfig cfg{0.05, 2};
    ControllerState state = monitoring(0.7);
    state.violation_count = 1;
    const auto a = ctrl::step(state, 0.6, cfg);
    const auto b = ctrl::step(state, 0.6, cfg);
    CHECK(a.first.violation_count == b.first.violation_count);
    CHECK(a.first.mode == b.first.mode);
    CHECK(a.second.kind == b.second.kind);
}

TEST_CASE("trigger config validation") {
    CHECK_THROWS_AS(ctrl::step(monitoring(0.5), 0.4, TriggerConfig{0.0, 3}),
                    nh::InvalidInputError);
    CHECK_THROWS_AS(ctrl::step(monitoring(0.5), 0.4, TriggerConfig{0.1, 0}),
                    nh::InvalidInputError);
}

TEST_CASE("fuzzed streams: safety and liveness of the debounce") {
    std::mt19937_64 gen(2024);
    auto unit = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    for (int stream = 0; stream < 10000; ++stream) {
        const TriggerConfig cfg{0.01 + 0.3 * unit(), 1 + static_cast<int>(gen() % 6)};
        const double best = unit();
        ControllerState state = monitoring(best);
        int consecutive = 0; // reference counter
        const int len = 5 + static_cast<int>(gen() % 40);
        for (int i = 0; i < len; ++i) {
            const double metric = unit();
            const bool violates = best - metric > cfg.epsilon;
            const auto [next, action] = ctrl::step(state, metric, cfg);
            if (state.mode == Mode::Monitor) {
                consecutive = violates ? consecutive + 1 : 0;
                const bool should_fire = consecutive == cfg.debounce_n;
                // Liveness: exactly when the reference count reaches the
                // debounce; safety: never earlier.
                CHECK((action.kind == Action::Kind::TriggerOptimization) == should_fire);
                if (should_fire) {
                    // Reset the model: re-arm via completion.
                    const auto [applied, apply] =
                        ctrl::complete_optimization(next, result_with(best));
                    CHECK(apply.kind == Action::Kind::ApplyConfig);
                    state = applied;
                    consecutive = 0;
                    continue;
                }
            } else {
                CHECK(action.kind == Action::Kind::None);
            }
            state = next;
        }
    }
}
