#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "nighthawk/image.hpp"

namespace nh::metrics {

/// Per-pixel repeatability and reliability maps, both in [0,1] and aligned
/// with the source image.
struct ResponseMaps {
    int width = 0;
    int height = 0;
    std::vector<double> repeat;
    std::vector<double> reliab;

    /// Validates matching dimensions and [0,1] ranges.
    static ResponseMaps create(int width, int height,
                               std::vector<double> repeat, std::vector<double> reliab);
    std::size_t pixel_count() const { return repeat.size(); }
};

/// Tuning constants for the metric family. Defaults are the fixed values
/// used throughout the test suite; all are overridable via config.
struct MetricParams {
    double shim_lambda = 1000.0;   // log compression gain
    double shim_delta = 0.06;      // gradient activation threshold
    double softperc_top_frac = 0.1; // top-percentile fraction
    double newg_c = 0.01;          // luminance noise-weighting constant
    double reliab_cn = 0.02;       // RMS-contrast soft normalizer
};

enum class MetricKind { Feat, Shim, SoftPerc, Newg };

const char* metric_name(MetricKind kind);

/// (mean repeatability) * (mean reliability)^2. Squaring the reliability
/// term amplifies descriptor confidence in the final score.
double m_feat(const ResponseMaps& maps);

/// Deterministic surrogate detector. Repeatability is the Shi-Tomasi
/// minimum-eigenvalue corner response over 3x3 structure-tensor windows of
/// Sobel gradients, normalized by its own 99th percentile and clamped to
/// [0,1]. Reliability is local 5x5 RMS contrast soft-normalized by
/// rms/(rms + c_n). Both maps are zero where the windows do not fit.
ResponseMaps response_maps(const Image& img, const MetricParams& params = {});

/// Log-compressed thresholded gradient score:
/// (1/N) * sum_{m_i >= delta} log(lambda*(m_i-delta)+1) / log(lambda*(1-delta)+1).
double m_shim(const Image& img, const MetricParams& params = {});
double m_shim(const GradField& field, const MetricParams& params = {});

/// Mean of the top ceil(frac*N) gradient magnitudes.
double m_softperc(const Image& img, const MetricParams& params = {});
double m_softperc(const GradField& field, const MetricParams& params = {});

/// Noise-aware gradient score: (1/N) * sum w_i*m_i with
/// w_i = I_i^2/(I_i^2 + c), down-weighting dark (noise-dominated) pixels.
double m_newg(const Image& img, const MetricParams& params = {});
double m_newg(const Image& img, const GradField& field, const MetricParams& params = {});

double evaluate(MetricKind kind, const Image& img, const MetricParams& params = {});

/// Spearman rank correlation with average ranks for ties. Throws
/// InvalidInputError on length mismatch or length < 3, and
/// UndefinedCorrelationError when either sequence has zero rank variance.
double spearman(std::span<const double> xs, std::span<const double> ys);

struct Detection {
    int x = 0;
    int y = 0;
    double score = 0.0;
};

/// Top-k pixels of the repeatability map, ordered by (score desc, row-major
/// index asc). Zero-response pixels never fire, so fewer than k detections
/// may be returned.
std::vector<Detection> detect_top_k(const ResponseMaps& maps, int k);

/// Number of detections in `a` that have a detection in `b` within
/// Chebyshev distance `radius`. Detections are detect_top_k on each image's
/// own repeatability map.
int synthetic_matches(const Image& a, const Image& b, int k, int radius,
                      const MetricParams& params = {});

/// Ingestion path for precomputed detector outputs: reads
/// `<stem>.rep.pgm` and `<stem>.rel.pgm` (maxval 255, dequantized /255).
ResponseMaps load_response_maps(const std::filesystem::path& stem);

} // namespace nh::metrics
