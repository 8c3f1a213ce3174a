#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace nh::gp {

using Point = std::array<double, 2>;

/// Kernel and noise hyperparameters. The lengthscale is isotropic in
/// normalized [0,1]^2 coordinates.
struct Hyperparams {
    double lengthscale = 0.2;
    double signal_var = 1.0;
    double noise_var = 1e-4;
};

struct Observation {
    Point x{};
    double y = 0.0;
};

/// Immutable fitted surrogate. `factor` is the lower-triangular Cholesky
/// factor of K + (noise_var + jitter) I and `alpha` the solved weights
/// (K + noise_var I)^-1 y used by the predictive mean.
struct GpModel {
    Hyperparams hyper;
    std::vector<Observation> train;
    Eigen::MatrixXd factor;
    Eigen::VectorXd alpha;
    double jitter = 0.0;
};

/// Matern 5/2: with r = |a-b|/lengthscale,
/// signal_var * (1 + sqrt(5) r + 5 r^2 / 3) * exp(-sqrt(5) r).
double matern52(const Point& a, const Point& b, const Hyperparams& hyper);

/// Builds the Gram matrix, adds noise_var plus an escalating jitter
/// (1e-10 * signal_var, x10, at most 3 escalations) and factorizes.
/// Throws NotPositiveDefiniteError if factorization keeps failing or the
/// training set has duplicate points with zero noise.
GpModel fit(std::vector<Observation> train, const Hyperparams& hyper);

struct Prediction {
    double mean = 0.0;
    double var = 0.0; // clamped at 0 from below
};

/// Predictive mean and variance at a query point.
Prediction predict(const GpModel& model, const Point& x);

/// Batched predict over many query points; same math as predict, vectorized
/// for dense acquisition grids.
void predict_batch(const GpModel& model, std::span<const Point> xs,
                   std::span<double> mean_out, std::span<double> var_out);

/// -1/2 y^T alpha - sum log diag(factor) - (m/2) log(2 pi).
double log_marginal_likelihood(const GpModel& model);

} // namespace nh::gp
