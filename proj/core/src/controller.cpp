#include "nighthawk/controller.hpp"

#include "nighthawk/errors.hpp"

namespace nh::ctrl {

void TriggerConfig::validate() const {
    if (!(epsilon > 0.0)) throw InvalidInputError("epsilon must be > 0");
    if (debounce_n < 1) throw InvalidInputError("debounce_n must be >= 1");
}

std::pair<ControllerState, Action> step(const ControllerState& state, double frame_metric,
                                        const TriggerConfig& config) {
    config.validate();
    if (state.mode == Mode::Optimizing) {
        return {state, Action::none()};
    }
    ControllerState next = state;
    if (state.best_metric - frame_metric > config.epsilon) {
        next.violation_count = state.violation_count + 1;
        if (next.violation_count >= config.debounce_n) {
            next.mode = Mode::Optimizing;
            next.violation_count = config.debounce_n;
            return {next, Action::trigger()};
        }
    } else {
        next.violation_count = 0;
    }
    return {next, Action::none()};
}

std::pair<ControllerState, Action> complete_optimization(const ControllerState& state,
                                                         const bopt::OptResult& result) {
    if (state.mode != Mode::Optimizing) {
        throw InvalidStateError("complete_optimization requires Optimizing mode");
    }
    ControllerState next = state;
    next.mode = Mode::Monitor;
    next.current = result.x_star;
    next.best_metric = result.y_star;
    next.violation_count = 0;
    return {next, Action::apply(result.x_star)};
}

} // namespace nh::ctrl
