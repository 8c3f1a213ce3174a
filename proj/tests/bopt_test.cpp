#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nighthawk/bopt.hpp"
#include "nighthawk/errors.hpp"

namespace bopt = nh::bopt;
namespace gp = nh::gp;
using bopt::BudgetConfig;
using bopt::ControlInput;
using bopt::SearchSpace;

namespace {

SearchSpace unit_space() {
    SearchSpace space;
    space.light_min = 0.0;
    space.light_max = 1.0;
    space.exposure_min_ms = 1.0;
    space.exposure_max_ms = 2.0;
    return space;
}

} // namespace

TEST_CASE("search space round-trips and validates") {
    SearchSpace space;
    space.light_min = 0.1;
    space.light_max = 0.9;
    space.exposure_min_ms = 0.5;
    space.exposure_max_ms = 33.0;
    space.validate();

    for (double a : {0.1, 0.37, 0.9}) {
        for (double b : {0.5, 12.25, 33.0}) {
            const ControlInput ctl{a, b};
            const ControlInput back = space.denormalize(space.normalize(ctl));
            CHECK(back.light == doctest::Approx(ctl.light).epsilon(1e-12));
            CHECK(back.exposure_ms == doctest::Approx(ctl.exposure_ms).epsilon(1e-12));
            CHECK(space.contains(ctl));
        }
    }
    CHECK_FALSE(space.contains({0.05, 1.0}));
    CHECK_FALSE(space.contains({0.5, 40.0}));

    SearchSpace bad = space;
    bad.exposure_min_ms = 0.0;
    CHECK_THROWS_AS(bad.validate(), nh::InvalidInputError);
    bad = space;
    bad.light_max = 1.2;
    CHECK_THROWS_AS(bad.validate(), nh::InvalidInputError);
    bad = space;
    bad.exposure_max_ms = bad.exposure_min_ms;
    CHECK_THROWS_AS(bad.validate(), nh::InvalidInputError);
}

TEST_CASE("expected improvement spot values") {
    CHECK(bopt::expected_improvement(0.5, 0.0, 0.5, 0.0) == 0.0);
    CHECK(bopt::expected_improvement(0.7, 0.0, 0.5, 0.0) ==
          doctest::Approx(0.2).epsilon(1e-15));

    // mu = y_best, sigma = 1: EI = phi(0) = 1/sqrt(2 pi).
    const double at_zero = bopt::expected_improvement(1.0, 1.0, 1.0, 0.0);
    CHECK(at_zero == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-12));
    CHECK(at_zero == doctest::Approx(0.39894).epsilon(1e-4));

    // d = 1, sigma = 1: Phi(1) + phi(1).
    const double at_one = bopt::expected_improvement(1.0, 1.0, 0.0, 0.0);
    const double phi1 = std::exp(-0.5) / std::sqrt(2.0 * std::numbers::pi);
    const double Phi1 = 0.5 * std::erfc(-1.0 / std::numbers::sqrt2);
    CHECK(at_one == doctest::Approx(Phi1 + phi1).epsilon(1e-12));
    CHECK(at_one == doctest::Approx(1.08331).epsilon(1e-4));

    CHECK_THROWS_AS(bopt::expected_improvement(0, -1e-9, 0, 0), nh::InvalidInputError);
}

TEST_CASE("expected improvement is nonnegative and increasing in the mean") {
    for (double sigma : {0.0, 0.2, 1.0, 4.0}) {
        double prev = -1.0;
        for (double mu = -3.0; mu <= 3.0; mu += 0.125) {
            const double ei = bopt::expected_improvement(mu, sigma, 0.3, 0.01);
            CHECK(ei >= 0.0);
            if (sigma > 0.0) {
                CHECK(ei > prev);
            } else {
                CHECK(ei >= prev);
            }
            prev = ei;
        }
    }
}

TEST_CASE("proposal dominates the incumbent and matches a scalar grid scan") {
    const std::vector<gp::Observation> obs{{{0.25, 0.5}, 0.4}, {{0.75, 0.5}, 0.4}};
    const auto model = gp::fit(obs, {0.2, 1.0, 1e-4});
    const SearchSpace space = unit_space();
    const double y_best = 0.4;
    const double xi = 0.01;

    const ControlInput pick = bopt::propose_next(model, space, y_best, xi);
    CHECK(space.contains(pick));

    // Independent scan: scalar predict + scalar EI over every grid node.
    int best_index = 0;
    double best_ei = -1.0;
    for (int i = 0; i < bopt::kAcquisitionGridPoints; ++i) {
        const auto p = bopt::acquisition_grid_point(i);
        const auto pred = gp::predict(model, p);
        const double ei =
            bopt::expected_improvement(pred.mean, std::sqrt(pred.var), y_best, xi);
        if (ei > best_ei) {
            best_ei = ei;
            best_index = i;
        }
    }
    const ControlInput expect = space.denormalize(bopt::acquisition_grid_point(best_index));
    CHECK(pick.light == expect.light);
    CHECK(pick.exposure_ms == expect.exposure_ms);

    // EI at the proposal is no worse than at a training point.
    const auto at_train = gp::predict(model, {0.25, 0.5});
    CHECK(best_ei >= bopt::expected_improvement(at_train.mean, std::sqrt(at_train.var),
                                                y_best, xi));
}

TEST_CASE("proposal is total even when nothing can improve") {
    const auto model = gp::fit({{{0.5, 0.5}, 0.0}}, {0.2, 1.0, 1e-4});
    // Absurdly high incumbent: EI is ~0 everywhere, argmax falls back to
    // the first grid node.
    const ControlInput pick = bopt::propose_next(model, unit_space(), 1e6, 0.01);
    CHECK(pick.light == 0.0);
    CHECK(pick.exposure_ms == 1.0);
}

TEST_CASE("constant objective stops at the EI floor right after the design") {
    int calls = 0;
    const auto result = bopt::optimize(
        [&](const ControlInput&) {
            ++calls;
            return 0.75;
        },
        unit_space(), {5, 25, 1e-4, 7});
    CHECK(result.stop_reason == bopt::StopReason::EiFloor);
    CHECK(result.history.size() == 5);
    CHECK(calls == 5);
    CHECK(result.y_star == 0.75);
    // First-encountered argmax on ties: the first design point.
    CHECK(result.x_star.light == 0.0);
    CHECK(result.x_star.exposure_ms == 1.0);
}

TEST_CASE("default initial design is corners then center") {
    std::vector<ControlInput> seen;
    bopt::optimize(
        [&](const ControlInput& ctl) {
            seen.push_back(ctl);
            return 1.0;
        },
        unit_space(), {5, 5, 1e-4, 0});
    REQUIRE(seen.size() == 5);
    const double expect[5][2] = {{0, 1}, {0, 2}, {1, 1}, {1, 2}, {0.5, 1.5}};
    for (int i = 0; i < 5; ++i) {
        CHECK(seen[static_cast<std::size_t>(i)].light == expect[i][0]);
        CHECK(seen[static_cast<std::size_t>(i)].exposure_ms == expect[i][1]);
    }
}

TEST_CASE("concave quadratic is optimized to within 1%") {
    // Max value 1 at (0.6, 1.55), both coordinates on the acquisition grid.
    const auto objective = [](const ControlInput& ctl) {
        const double a = ctl.light - 0.6;
        const double b = ctl.exposure_ms - 1.55;
        return 1.0 - a * a - 4.0 * b * b;
    };
    const auto result = bopt::optimize(objective, unit_space(), {5, 25, 1e-6, 3});
    CHECK(result.y_star >= 0.99);
    CHECK(result.history.size() <= 25);
    double best = -1e300;
    for (const auto& ev : result.history) {
        CHECK(unit_space().contains(ev.x));
        best = std::max(best, ev.y);
    }
    CHECK(best == result.y_star);
}

TEST_CASE("identical seeds give bit-identical histories") {
    const auto objective = [](const ControlInput& ctl) {
        return std::sin(5.0 * ctl.light) * std::cos(2.0 * ctl.exposure_ms) +
               0.3 * ctl.light;
    };
    const BudgetConfig budget{7, 18, 1e-5, 99}; // Halton design path
    const auto a = bopt::optimize(objective, unit_space(), budget);
    const auto b = bopt::optimize(objective, unit_space(), budget);
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i) {
        CHECK(a.history[i].x.light == b.history[i].x.light);
        CHECK(a.history[i].x.exposure_ms == b.history[i].x.exposure_ms);
        CHECK(a.history[i].y == b.history[i].y);
    }
    CHECK(a.stop_reason == b.stop_reason);

    // A different seed moves the Halton rotation.
    const auto c = bopt::optimize(objective, unit_space(), {7, 18, 1e-5, 100});
    bool any_different = false;
    for (std::size_t i = 0; i < std::min(c.history.size(), a.history.size()); ++i) {
        any_different = any_different || c.history[i].x.light != a.history[i].x.light;
    }
    CHECK(any_different);
}

TEST_CASE("proposals avoid duplicating earlier evaluations") {
    const auto objective = [](const ControlInput& ctl) {
        const double a = ctl.light - 0.5;
        const double b = ctl.exposure_ms - 1.5;
        return -a * a - b * b;
    };
    const auto result = bopt::optimize(objective, unit_space(), {5, 25, 0.0, 1});
    CHECK(result.stop_reason == bopt::StopReason::Budget);
    CHECK(result.history.size() == 25);
    const SearchSpace space = unit_space();
    for (std::size_t i = 0; i < result.history.size(); ++i) {
        for (std::size_t j = i + 1; j < result.history.size(); ++j) {
            const auto a = space.normalize(result.history[i].x);
            const auto b = space.normalize(result.history[j].x);
            const double d2 = (a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]);
            CHECK(d2 > 1e-18);
        }
    }
}

TEST_CASE("running best is monotone and ends at y_star") {
    const auto objective = [](const ControlInput& ctl) {
        return std::sin(9.0 * ctl.light + 3.0 * ctl.exposure_ms);
    };
    const auto result = bopt::optimize(objective, unit_space(), {5, 20, 1e-9, 12});
    double best = -1e300;
    for (const auto& ev : result.history) {
        best = std::max(best, ev.y);
    }
    CHECK(best == result.y_star);
}

TEST_CASE("objective failures carry the partial history") {
    int calls = 0;
    try {
        bopt::optimize(
            [&](const ControlInput&) -> double {
                if (++calls == 3) throw std::runtime_error("sensor dropout");
                return 0.1 * calls;
            },
            unit_space(), {5, 10, 1e-4, 0});
        FAIL("expected ObjectiveError");
    } catch (const bopt::ObjectiveError& e) {
        CHECK(e.partial_history().size() == 2);
        CHECK(std::string(e.what()).find("sensor dropout") != std::string::npos);
    }
}

TEST_CASE("budget validation") {
    const auto objective = [](const ControlInput&) { return 0.0; };
    CHECK_THROWS_AS(bopt::optimize(objective, unit_space(), {1, 10, 1e-4, 0}),
                    nh::InvalidInputError);
    CHECK_THROWS_AS(bopt::optimize(objective, unit_space(), {5, 4, 1e-4, 0}),
                    nh::InvalidInputError);
}

TEST_CASE("trace CSV carries the stop reason on the final row") {
    const auto result = bopt::optimize([](const ControlInput&) { return 1.0; },
                                       unit_space(), {5, 25, 1e-4, 0});
    const std::string csv = bopt::trace_csv(result);
    CHECK(csv.starts_with("eval_index,P,dt_ms,y,best_so_far,stop_reason\n"));
    CHECK(csv.find(",ei_floor\n") != std::string::npos);
    // One header plus one row per evaluation.
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
}
