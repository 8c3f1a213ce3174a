#include "nighthawk/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nighthawk/errors.hpp"
#include "nighthawk/pgm.hpp"

namespace nh::metrics {

namespace {

void sobel_pair(const Image& img, std::vector<double>& gx, std::vector<double>& gy) {
    const int w = img.width, h = img.height;
    gx.assign(img.data.size(), 0.0);
    gy.assign(img.data.size(), 0.0);
    for (int y = 1; y < h - 1; ++y) {
        for (int x = 1; x < w - 1; ++x) {
            const double a = img.at(x - 1, y - 1), b = img.at(x, y - 1), c = img.at(x + 1, y - 1);
            const double d = img.at(x - 1, y), f = img.at(x + 1, y);
            const double g = img.at(x - 1, y + 1), hh = img.at(x, y + 1), i = img.at(x + 1, y + 1);
            gx[static_cast<std::size_t>(y) * w + x] = (c + 2.0 * f + i) - (a + 2.0 * d + g);
            gy[static_cast<std::size_t>(y) * w + x] = (g + 2.0 * hh + i) - (a + 2.0 * b + c);
        }
    }
}

// Nearest-rank 99th percentile: sorted[ceil(0.99*N)] in 1-based rank.
double percentile99(std::vector<double> values) {
    const std::size_t n = values.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(n)));
    rank = std::clamp<std::size_t>(rank, 1, n);
    std::nth_element(values.begin(), values.begin() + (rank - 1), values.end());
    return values[rank - 1];
}

double field_mean(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

} // namespace

const char* metric_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::Feat: return "m_feat";
        case MetricKind::Shim: return "m_shim";
        case MetricKind::SoftPerc: return "m_softperc";
        case MetricKind::Newg: return "m_newg";
    }
    return "?";
}

ResponseMaps ResponseMaps::create(int width, int height,
                                  std::vector<double> repeat, std::vector<double> reliab) {
    if (width <= 0 || height <= 0) {
        throw InvalidInputError("response maps need positive dimensions");
    }
    const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (repeat.size() != n || reliab.size() != n) {
        throw InvalidInputError("response map size does not match dimensions");
    }
    for (double v : repeat) {
        if (!(v >= 0.0 && v <= 1.0)) throw InvalidInputError("repeatability outside [0,1]");
    }
    for (double v : reliab) {
        if (!(v >= 0.0 && v <= 1.0)) throw InvalidInputError("reliability outside [0,1]");
    }
    ResponseMaps maps;
    maps.width = width;
    maps.height = height;
    maps.repeat = std::move(repeat);
    maps.reliab = std::move(reliab);
    return maps;
}

double m_feat(const ResponseMaps& maps) {
    if (maps.repeat.empty()) {
        throw InvalidInputError("m_feat on empty maps");
    }
    const double mean_rep = field_mean(maps.repeat);
    const double mean_rel = field_mean(maps.reliab);
    return mean_rep * mean_rel * mean_rel;
}

ResponseMaps response_maps(const Image& img, const MetricParams& params) {
    detail::validate_dims(img.width, img.height, img.data.size());
    if (img.width < 5 || img.height < 5) {
        throw InvalidInputError("response_maps needs at least 5x5 pixels for its windows");
    }
    const int w = img.width, h = img.height;
    const std::size_t n = img.data.size();

    // Scratch buffers persist across calls; this runs per frame in the
    // optimizer's inner loop.
    thread_local std::vector<double> gx, gy, wxx, wyy, wxy, sxx, syy, sxy, scratch,
        corner, sq, s1, s2;

    // Repeatability: min eigenvalue of the summed gradient outer products.
    sobel_pair(img, gx, gy);
    wxx.resize(n);
    wyy.resize(n);
    wxy.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        wxx[i] = gx[i] * gx[i];
        wyy[i] = gy[i] * gy[i];
        wxy[i] = gx[i] * gy[i];
    }
    box_sum_into(wxx, w, h, 3, sxx, scratch);
    box_sum_into(wyy, w, h, 3, syy, scratch);
    box_sum_into(wxy, w, h, 3, sxy, scratch);
    corner.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double half_trace = 0.5 * (sxx[i] + syy[i]);
        const double half_diff = 0.5 * (sxx[i] - syy[i]);
        const double lam = half_trace - std::sqrt(half_diff * half_diff + sxy[i] * sxy[i]);
        corner[i] = std::max(0.0, lam);
    }
    const double p99 = percentile99(corner);
    std::vector<double> repeat(n, 0.0);
    if (p99 > 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            repeat[i] = std::clamp(corner[i] / p99, 0.0, 1.0);
        }
    }

    // Reliability: 5x5 RMS contrast, soft-normalized.
    sq.resize(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = img.data[i] * img.data[i];
    box_sum_into(img.data, w, h, 5, s1, scratch);
    box_sum_into(sq, w, h, 5, s2, scratch);
    std::vector<double> reliab(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double mean = s1[i] / 25.0;
        const double var = std::max(0.0, s2[i] / 25.0 - mean * mean);
        const double rms = std::sqrt(var);
        reliab[i] = rms / (rms + params.reliab_cn);
    }

    ResponseMaps maps;
    maps.width = w;
    maps.height = h;
    maps.repeat = std::move(repeat);
    maps.reliab = std::move(reliab);
    return maps;
}

double m_shim(const GradField& field, const MetricParams& params) {
    if (field.mag.empty()) throw InvalidInputError("m_shim on empty field");
    const double norm = std::log(params.shim_lambda * (1.0 - params.shim_delta) + 1.0);
    double acc = 0.0;
    for (double m : field.mag) {
        if (m >= params.shim_delta) {
            acc += std::log(params.shim_lambda * (m - params.shim_delta) + 1.0) / norm;
        }
    }
    return acc / static_cast<double>(field.mag.size());
}

double m_shim(const Image& img, const MetricParams& params) {
    return m_shim(gradient_magnitude(img), params);
}

double m_softperc(const GradField& field, const MetricParams& params) {
    if (field.mag.empty()) throw InvalidInputError("m_softperc on empty field");
    const auto n = field.mag.size();
    auto count = static_cast<std::size_t>(
        std::ceil(params.softperc_top_frac * static_cast<double>(n)));
    count = std::clamp<std::size_t>(count, 1, n);
    std::vector<double> mags = field.mag;
    std::nth_element(mags.begin(), mags.begin() + (count - 1), mags.end(),
                     std::greater<double>());
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) acc += mags[i];
    return acc / static_cast<double>(count);
}

double m_softperc(const Image& img, const MetricParams& params) {
    return m_softperc(gradient_magnitude(img), params);
}

double m_newg(const Image& img, const GradField& field, const MetricParams& params) {
    if (field.mag.size() != img.data.size()) {
        throw InvalidInputError("m_newg: field does not match image");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < field.mag.size(); ++i) {
        const double lum = img.data[i];
        const double w = lum * lum / (lum * lum + params.newg_c);
        acc += w * field.mag[i];
    }
    return acc / static_cast<double>(field.mag.size());
}

double m_newg(const Image& img, const MetricParams& params) {
    return m_newg(img, gradient_magnitude(img), params);
}

double evaluate(MetricKind kind, const Image& img, const MetricParams& params) {
    switch (kind) {
        case MetricKind::Feat: return m_feat(response_maps(img, params));
        case MetricKind::Shim: return m_shim(img, params);
        case MetricKind::SoftPerc: return m_softperc(img, params);
        case MetricKind::Newg: return m_newg(img, params);
    }
    throw InvalidInputError("unknown metric kind");
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw InvalidInputError("spearman: sequence length mismatch");
    }
    if (xs.size() < 3) {
        throw InvalidInputError("spearman needs at least 3 samples");
    }
    const std::size_t n = xs.size();

    auto fractional_ranks = [n](std::span<const double> v) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> ranks(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
            // Average 1-based rank across the tie group.
            const double avg = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
            for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
            i = j + 1;
        }
        return ranks;
    };

    const std::vector<double> rx = fractional_ranks(xs);
    const std::vector<double> ry = fractional_ranks(ys);
    const double mean_rank = 0.5 * static_cast<double>(n + 1);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = rx[i] - mean_rank;
        const double dy = ry[i] - mean_rank;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw UndefinedCorrelationError("spearman undefined: zero rank variance");
    }
    return sxy / std::sqrt(sxx * syy);
}

std::vector<Detection> detect_top_k(const ResponseMaps& maps, int k) {
    if (k < 1) throw InvalidInputError("detect_top_k: k must be >= 1");
    if (static_cast<std::size_t>(k) > maps.pixel_count()) {
        throw InvalidInputError("detect_top_k: k exceeds pixel count");
    }
    std::vector<std::size_t> idx;
    idx.reserve(maps.pixel_count());
    for (std::size_t i = 0; i < maps.repeat.size(); ++i) {
        if (maps.repeat[i] > 0.0) idx.push_back(i);
    }
    auto better = [&](std::size_t a, std::size_t b) {
        if (maps.repeat[a] != maps.repeat[b]) return maps.repeat[a] > maps.repeat[b];
        return a < b;
    };
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), idx.size());
    std::partial_sort(idx.begin(), idx.begin() + take, idx.end(), better);
    idx.resize(take);

    std::vector<Detection> out;
    out.reserve(take);
    for (std::size_t i : idx) {
        out.push_back({static_cast<int>(i % maps.width), static_cast<int>(i / maps.width),
                       maps.repeat[i]});
    }
    return out;
}

int synthetic_matches(const Image& a, const Image& b, int k, int radius,
                      const MetricParams& params) {
    if (a.width != b.width || a.height != b.height) {
        throw InvalidInputError("synthetic_matches: dimension mismatch");
    }
    if (k < 1) throw InvalidInputError("synthetic_matches: k must be >= 1");
    if (static_cast<std::size_t>(k) > a.pixel_count()) {
        throw InvalidInputError("synthetic_matches: k exceeds pixel count");
    }
    const auto da = detect_top_k(response_maps(a, params), k);
    const auto db = detect_top_k(response_maps(b, params), k);
    int matches = 0;
    for (const Detection& p : da) {
        for (const Detection& q : db) {
            if (std::abs(p.x - q.x) <= radius && std::abs(p.y - q.y) <= radius) {
                ++matches;
                break;
            }
        }
    }
    return matches;
}

ResponseMaps load_response_maps(const std::filesystem::path& stem) {
    const Image rep = pgm::read_file(stem.string() + ".rep.pgm");
    const Image rel = pgm::read_file(stem.string() + ".rel.pgm");
    if (rep.width != rel.width || rep.height != rel.height) {
        throw InvalidInputError("response map pair has mismatched dimensions");
    }
    return ResponseMaps::create(rep.width, rep.height, rep.data, rel.data);
}

} // namespace nh::metrics
