#include "nighthawk/bopt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "nighthawk/csv.hpp"
#include "nighthawk/rng.hpp"

namespace nh::bopt {

namespace {

constexpr double kDefaultNoiseVar = 1e-4;
constexpr double kDuplicateDistSq = 1e-18; // (1e-9 normalized)^2
constexpr int kRefineEvery = 5;
constexpr double kLengthscaleGrid[] = {0.05, 0.1, 0.2, 0.4, 0.8};

double norm_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double norm_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double radical_inverse(std::uint64_t i, std::uint64_t base) {
    double inv = 1.0, r = 0.0;
    while (i > 0) {
        inv /= static_cast<double>(base);
        r += inv * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

std::vector<gp::Point> initial_design(int n_init, std::uint64_t seed) {
    if (n_init == 5) {
        // Corners first: bound behavior (darkness, saturation) dominates
        // this landscape, then the center.
        return {{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}, {0.5, 0.5}};
    }
    std::mt19937_64 gen(seed);
    const double shift0 = rng::to_unit(gen());
    const double shift1 = rng::to_unit(gen());
    std::vector<gp::Point> pts;
    pts.reserve(static_cast<std::size_t>(n_init));
    for (int i = 1; i <= n_init; ++i) {
        // Cranley-Patterson rotation of the Halton (2,3) sequence.
        double u = radical_inverse(static_cast<std::uint64_t>(i), 2) + shift0;
        double v = radical_inverse(static_cast<std::uint64_t>(i), 3) + shift1;
        pts.push_back({u - std::floor(u), v - std::floor(v)});
    }
    return pts;
}

struct GridScan {
    std::vector<double> ei;
    int best_index = 0;
    double best_ei = 0.0;
};

GridScan scan_grid(const gp::GpModel& model, double y_best, double xi) {
    static const std::vector<gp::Point> grid = [] {
        std::vector<gp::Point> g(kAcquisitionGridPoints);
        for (int i = 0; i < kAcquisitionGridPoints; ++i) g[static_cast<std::size_t>(i)] = acquisition_grid_point(i);
        return g;
    }();

    std::vector<double> mu(grid.size()), var(grid.size());
    gp::predict_batch(model, grid, mu, var);

    GridScan scan;
    scan.ei.resize(grid.size());
    scan.best_ei = -1.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        scan.ei[i] = expected_improvement(mu[i], std::sqrt(var[i]), y_best, xi);
        // Strict comparison keeps the lowest row-major index on ties.
        if (scan.ei[i] > scan.best_ei) {
            scan.best_ei = scan.ei[i];
            scan.best_index = static_cast<int>(i);
        }
    }
    return scan;
}

struct Standardized {
    double mean = 0.0;
    double stdev = 0.0;
};

Standardized standardize(const std::vector<double>& ys) {
    Standardized s;
    for (double y : ys) s.mean += y;
    s.mean /= static_cast<double>(ys.size());
    double acc = 0.0;
    for (double y : ys) acc += (y - s.mean) * (y - s.mean);
    s.stdev = std::sqrt(acc / static_cast<double>(ys.size()));
    return s;
}

} // namespace

void SearchSpace::validate() const {
    if (!(light_min >= 0.0 && light_max <= 1.0 && light_min < light_max)) {
        throw InvalidInputError("light bounds must satisfy 0 <= min < max <= 1");
    }
    if (!(exposure_min_ms > 0.0 && std::isfinite(exposure_max_ms) &&
          exposure_max_ms > exposure_min_ms)) {
        throw InvalidInputError("exposure bounds must satisfy 0 < min < max < inf");
    }
}

bool SearchSpace::contains(const ControlInput& ctl) const {
    return ctl.light >= light_min && ctl.light <= light_max &&
           ctl.exposure_ms >= exposure_min_ms && ctl.exposure_ms <= exposure_max_ms;
}

gp::Point SearchSpace::normalize(const ControlInput& ctl) const {
    return {(ctl.light - light_min) / (light_max - light_min),
            (ctl.exposure_ms - exposure_min_ms) / (exposure_max_ms - exposure_min_ms)};
}

ControlInput SearchSpace::denormalize(const gp::Point& p) const {
    return {light_min + p[0] * (light_max - light_min),
            exposure_min_ms + p[1] * (exposure_max_ms - exposure_min_ms)};
}

const char* stop_reason_name(StopReason reason) {
    return reason == StopReason::Budget ? "budget" : "ei_floor";
}

gp::Point acquisition_grid_point(int index) {
    const int row = index / kAcquisitionGridSide;
    const int col = index % kAcquisitionGridSide;
    const double denom = kAcquisitionGridSide - 1;
    return {static_cast<double>(row) / denom, static_cast<double>(col) / denom};
}

double expected_improvement(double mu, double sigma, double y_best, double xi) {
    if (sigma < 0.0) throw InvalidInputError("expected_improvement: sigma must be >= 0");
    if (xi < 0.0) throw InvalidInputError("expected_improvement: xi must be >= 0");
    const double d = mu - y_best - xi;
    if (sigma == 0.0) return std::max(d, 0.0);
    const double z = d / sigma;
    return std::max(0.0, d * norm_cdf(z) + sigma * norm_pdf(z));
}

ControlInput propose_next(const gp::GpModel& model, const SearchSpace& space,
                          double y_best, double xi) {
    space.validate();
    const GridScan scan = scan_grid(model, y_best, xi);
    return space.denormalize(acquisition_grid_point(scan.best_index));
}

OptResult optimize(const Objective& objective, const SearchSpace& space,
                   const BudgetConfig& budget, double xi) {
    space.validate();
    if (budget.n_init < 2) throw InvalidInputError("n_init must be >= 2");
    if (budget.max_evals < budget.n_init) {
        throw InvalidInputError("max_evals must be >= n_init");
    }

    OptResult result;
    std::vector<gp::Point> xs_norm;
    std::vector<double> ys;

    auto eval_at = [&](const gp::Point& p) {
        const ControlInput ctl = space.denormalize(p);
        double y = 0.0;
        try {
            y = objective(ctl);
        } catch (const std::exception& e) {
            throw ObjectiveError(std::string("objective failed: ") + e.what(),
                                 std::move(result.history));
        }
        xs_norm.push_back(p);
        ys.push_back(y);
        result.history.push_back({ctl, y});
    };

    for (const gp::Point& p : initial_design(budget.n_init, budget.seed)) {
        eval_at(p);
    }

    double lengthscale = gp::Hyperparams{}.lengthscale;
    result.stop_reason = StopReason::Budget;
    while (static_cast<int>(result.history.size()) < budget.max_evals) {
        const auto [lo_it, hi_it] = std::minmax_element(ys.begin(), ys.end());
        const double y_range = *hi_it - *lo_it;
        const Standardized stats = standardize(ys);
        if (y_range == 0.0 || stats.stdev == 0.0) {
            // Flat history: no improvement is measurable at any scale.
            result.stop_reason = StopReason::EiFloor;
            break;
        }

        std::vector<gp::Observation> train(ys.size());
        for (std::size_t i = 0; i < ys.size(); ++i) {
            train[i] = {xs_norm[i], (ys[i] - stats.mean) / stats.stdev};
        }

        if (result.history.size() % kRefineEvery == 0) {
            double best_lml = -std::numeric_limits<double>::infinity();
            for (double cand : kLengthscaleGrid) {
                const gp::GpModel trial =
                    gp::fit(train, {cand, 1.0, kDefaultNoiseVar});
                const double lml = gp::log_marginal_likelihood(trial);
                if (lml > best_lml) {
                    best_lml = lml;
                    lengthscale = cand;
                }
            }
        }

        const gp::GpModel model = gp::fit(train, {lengthscale, 1.0, kDefaultNoiseVar});
        const double y_best_std = (*hi_it - stats.mean) / stats.stdev;
        const GridScan scan = scan_grid(model, y_best_std, xi);

        if (scan.best_ei * stats.stdev < budget.ei_floor * y_range) {
            result.stop_reason = StopReason::EiFloor;
            break;
        }

        auto is_duplicate = [&](const gp::Point& p) {
            for (const gp::Point& seen : xs_norm) {
                const double dx = p[0] - seen[0];
                const double dy = p[1] - seen[1];
                if (dx * dx + dy * dy <= kDuplicateDistSq) return true;
            }
            return false;
        };

        int pick = scan.best_index;
        if (is_duplicate(acquisition_grid_point(pick))) {
            // Perturb to the best grid point not already observed.
            pick = -1;
            double pick_ei = -1.0;
            for (int i = 0; i < kAcquisitionGridPoints; ++i) {
                if (scan.ei[static_cast<std::size_t>(i)] > pick_ei &&
                    !is_duplicate(acquisition_grid_point(i))) {
                    pick_ei = scan.ei[static_cast<std::size_t>(i)];
                    pick = i;
                }
            }
            if (pick < 0) pick = scan.best_index; // every grid point observed
        }
        eval_at(acquisition_grid_point(pick));
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < ys.size(); ++i) {
        if (ys[i] > ys[best]) best = i;
    }
    result.x_star = result.history[best].x;
    result.y_star = ys[best];
    return result;
}

std::string trace_csv(const OptResult& result) {
    std::ostringstream os;
    os << "eval_index,P,dt_ms,y,best_so_far,stop_reason\n";
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < result.history.size(); ++i) {
        const Evaluation& ev = result.history[i];
        best = std::max(best, ev.y);
        os << i << ',' << csv::number(ev.x.light) << ',' << csv::number(ev.x.exposure_ms)
           << ',' << csv::number(ev.y) << ',' << csv::number(best) << ',';
        if (i + 1 == result.history.size()) os << stop_reason_name(result.stop_reason);
        os << '\n';
    }
    return os.str();
}

} // namespace nh::bopt
