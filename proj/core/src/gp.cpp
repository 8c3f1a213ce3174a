#include "nighthawk/gp.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>

#include "nighthawk/errors.hpp"

namespace nh::gp {

namespace {

constexpr double kSqrt5 = 2.23606797749978969;

void validate_hyper(const Hyperparams& hyper) {
    if (!(hyper.lengthscale > 0.0)) throw InvalidInputError("lengthscale must be > 0");
    if (!(hyper.signal_var > 0.0)) throw InvalidInputError("signal_var must be > 0");
    if (!(hyper.noise_var >= 0.0)) throw InvalidInputError("noise_var must be >= 0");
}

void validate_point(const Point& p) {
    for (double c : p) {
        if (!(c >= 0.0 && c <= 1.0)) {
            throw InvalidInputError("control point outside normalized [0,1]^2");
        }
    }
}

double kernel_r(double dist, const Hyperparams& hyper) {
    const double r = dist / hyper.lengthscale;
    return hyper.signal_var * (1.0 + kSqrt5 * r + 5.0 * r * r / 3.0) * std::exp(-kSqrt5 * r);
}

} // namespace

double matern52(const Point& a, const Point& b, const Hyperparams& hyper) {
    validate_hyper(hyper);
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    return kernel_r(std::sqrt(dx * dx + dy * dy), hyper);
}

GpModel fit(std::vector<Observation> train, const Hyperparams& hyper) {
    validate_hyper(hyper);
    if (train.empty()) throw InvalidInputError("fit needs at least one observation");
    for (const Observation& obs : train) validate_point(obs.x);

    const auto m = static_cast<Eigen::Index>(train.size());
    if (hyper.noise_var == 0.0) {
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = i + 1; j < m; ++j) {
                if (train[i].x == train[j].x) {
                    throw NotPositiveDefiniteError(
                        "duplicate training points with zero noise make the Gram matrix singular");
                }
            }
        }
    }

    Eigen::MatrixXd gram(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        gram(i, i) = hyper.signal_var;
        for (Eigen::Index j = i + 1; j < m; ++j) {
            const double k = matern52(train[i].x, train[j].x, hyper);
            gram(i, j) = k;
            gram(j, i) = k;
        }
    }
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) y(i) = train[i].y;

    double jitter = 1e-10 * hyper.signal_var;
    constexpr int kMaxEscalations = 3;
    for (int attempt = 0; attempt <= kMaxEscalations; ++attempt, jitter *= 10.0) {
        Eigen::MatrixXd regularized = gram;
        regularized.diagonal().array() += hyper.noise_var + jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(regularized);
        if (llt.info() != Eigen::Success) continue;

        GpModel model;
        model.hyper = hyper;
        model.train = std::move(train);
        model.factor = llt.matrixL();
        model.alpha = llt.solve(y);
        model.jitter = jitter;
        return model;
    }
    throw NotPositiveDefiniteError("Gram matrix not positive definite after " +
                                   std::to_string(kMaxEscalations) + " jitter escalations");
}

Prediction predict(const GpModel& model, const Point& x) {
    validate_point(x);
    Prediction p;
    std::array<double, 1> mu{};
    std::array<double, 1> var{};
    std::array<Point, 1> q{x};
    predict_batch(model, q, mu, var);
    p.mean = mu[0];
    p.var = var[0];
    return p;
}

void predict_batch(const GpModel& model, std::span<const Point> xs,
                   std::span<double> mean_out, std::span<double> var_out) {
    const auto m = static_cast<Eigen::Index>(model.train.size());
    const auto g = static_cast<Eigen::Index>(xs.size());
    if (mean_out.size() != xs.size() || var_out.size() != xs.size()) {
        throw InvalidInputError("predict_batch: output spans must match query count");
    }

    Eigen::MatrixXd kstar(m, g);
    for (Eigen::Index j = 0; j < g; ++j) {
        const Point& q = xs[static_cast<std::size_t>(j)];
        for (Eigen::Index i = 0; i < m; ++i) {
            const Point& t = model.train[static_cast<std::size_t>(i)].x;
            const double dx = t[0] - q[0];
            const double dy = t[1] - q[1];
            kstar(i, j) = kernel_r(std::sqrt(dx * dx + dy * dy), model.hyper);
        }
    }

    const Eigen::VectorXd mu = kstar.transpose() * model.alpha;
    // v = L^-1 k_*; predictive variance is k(x,x) - |v|^2.
    Eigen::MatrixXd v = kstar;
    model.factor.triangularView<Eigen::Lower>().solveInPlace(v);
    for (Eigen::Index j = 0; j < g; ++j) {
        mean_out[static_cast<std::size_t>(j)] = mu(j);
        const double var = model.hyper.signal_var - v.col(j).squaredNorm();
        var_out[static_cast<std::size_t>(j)] = std::max(0.0, var);
    }
}

double log_marginal_likelihood(const GpModel& model) {
    const auto m = static_cast<Eigen::Index>(model.train.size());
    double fit_term = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        fit_term += model.train[static_cast<std::size_t>(i)].y * model.alpha(i);
    }
    double log_det_half = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        log_det_half += std::log(model.factor(i, i));
    }
    return -0.5 * fit_term - log_det_half -
           0.5 * static_cast<double>(m) * std::log(2.0 * std::numbers::pi);
}

} // namespace nh::gp
