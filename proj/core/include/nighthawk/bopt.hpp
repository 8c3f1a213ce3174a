#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nighthawk/errors.hpp"
#include "nighthawk/gp.hpp"

namespace nh::bopt {

/// The decision vector: onboard light intensity as a fraction of full
/// power, and camera exposure time in milliseconds.
struct ControlInput {
    double light = 0.0;
    double exposure_ms = 0.0;
};

/// Box bounds for the control space plus the affine maps between physical
/// units and the normalized [0,1]^2 the surrogate operates in.
struct SearchSpace {
    double light_min = 0.0;
    double light_max = 1.0;
    double exposure_min_ms = 0.5;
    double exposure_max_ms = 18.0; // default: keeps the optimizer inside the
                                   // mission's frame-rate budget; the camera
                                   // AE range is wider

    void validate() const;
    bool contains(const ControlInput& ctl) const;
    gp::Point normalize(const ControlInput& ctl) const;
    ControlInput denormalize(const gp::Point& p) const;
};

struct BudgetConfig {
    int n_init = 5;
    int max_evals = 25;
    double ei_floor = 1e-4; // early-stop threshold as fraction of observed y-range
    std::uint64_t seed = 0;
};

enum class StopReason { Budget, EiFloor };

const char* stop_reason_name(StopReason reason);

struct Evaluation {
    ControlInput x;
    double y = 0.0;
};

struct OptResult {
    ControlInput x_star;
    double y_star = 0.0;
    std::vector<Evaluation> history;
    StopReason stop_reason = StopReason::Budget;
};

/// Objective failure with the evaluations completed before it.
class ObjectiveError : public Error {
public:
    ObjectiveError(const std::string& what, std::vector<Evaluation> partial)
        : Error(what), partial_(std::move(partial)) {}
    const std::vector<Evaluation>& partial_history() const { return partial_; }

private:
    std::vector<Evaluation> partial_;
};

/// Acquisition grid: 101x101 uniform over normalized [0,1]^2, row-major
/// with the light coordinate as the row and exposure as the column.
inline constexpr int kAcquisitionGridSide = 101;
inline constexpr int kAcquisitionGridPoints = kAcquisitionGridSide * kAcquisitionGridSide;

gp::Point acquisition_grid_point(int index);

/// Expected improvement over y_best with exploration margin xi. With
/// d = mu - y_best - xi: max(d,0) when sigma is 0, else
/// d*Phi(d/sigma) + sigma*phi(d/sigma).
double expected_improvement(double mu, double sigma, double y_best, double xi);

/// Argmax of expected improvement over the acquisition grid, ties broken by
/// lowest row-major index; returns the denormalized point.
ControlInput propose_next(const gp::GpModel& model, const SearchSpace& space,
                          double y_best, double xi);

using Objective = std::function<double(const ControlInput&)>;

/// Full optimization loop: initial design (4 corners + center when
/// n_init == 5, scrambled Halton otherwise), then fit / propose / evaluate
/// until the budget is exhausted or the grid-max EI falls below
/// ei_floor * (max y - min y). Deterministic given seed and objective.
OptResult optimize(const Objective& objective, const SearchSpace& space,
                   const BudgetConfig& budget, double xi = 0.01);

/// Trace CSV: eval_index, P, dt_ms, y, best_so_far, stop_reason (the reason
/// is only filled on the final row).
std::string trace_csv(const OptResult& result);

} // namespace nh::bopt
