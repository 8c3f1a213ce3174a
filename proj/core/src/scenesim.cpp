#include "nighthawk/scenesim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "nighthawk/errors.hpp"
#include "nighthawk/pgm.hpp"
#include "nighthawk/rng.hpp"

namespace nh::sim {

namespace {

constexpr std::uint64_t kSpecularSalt = 0x5bec1a57a17ULL;

std::uint64_t cell_key(std::int64_t ix, std::int64_t iy) {
    return (static_cast<std::uint64_t>(ix) << 32) ^ static_cast<std::uint64_t>(iy & 0xffffffff);
}

// seed here is already octave-mixed (see OctaveRow::start_row).
double lattice_value(std::uint64_t seed, std::int64_t ix, std::int64_t iy) {
    return rng::keyed_unit(seed, cell_key(ix, iy));
}

double fade(double t) {
    return t * t * (3.0 - 2.0 * t);
}

// One octave along a raster row: the v coordinate is fixed, so the four
// lattice corners only change when the u cell does. sample() reproduces the
// value_noise arithmetic bit for bit.
struct OctaveRow {
    std::uint64_t seed = 0; // octave-mixed
    double freq = 0.0;
    std::int64_t iv = 0;
    double tv = 0.0;
    std::int64_t iu = std::numeric_limits<std::int64_t>::min();
    double v00 = 0.0, v10 = 0.0, v01 = 0.0, v11 = 0.0;

    void start_row(std::uint64_t texture_seed, int oct, double f, double v) {
        seed = rng::mix(texture_seed, static_cast<std::uint64_t>(oct));
        freq = f;
        const double fv = v * freq;
        iv = static_cast<std::int64_t>(std::floor(fv));
        tv = fade(fv - static_cast<double>(iv));
        iu = std::numeric_limits<std::int64_t>::min();
    }

    double sample(double u) {
        const double fu = u * freq;
        const auto cell = static_cast<std::int64_t>(std::floor(fu));
        if (cell != iu) {
            iu = cell;
            v00 = lattice_value(seed, iu, iv);
            v10 = lattice_value(seed, iu + 1, iv);
            v01 = lattice_value(seed, iu, iv + 1);
            v11 = lattice_value(seed, iu + 1, iv + 1);
        }
        const double tu = fade(fu - static_cast<double>(iu));
        const double top = v00 + (v10 - v00) * tu;
        const double bot = v01 + (v11 - v01) * tu;
        return top + (bot - top) * tv;
    }
};

// Contrast curve turning the smooth noise level into a dark matrix with
// bright patches: flat floor below the threshold, smoothstep shoulder, flat
// white above. The look of a headlamp-lit wet wall, and the reason
// autoexposure's 50% target overexposes the structured patches.
constexpr double kAlbedoMatrixLo = 0.02;
constexpr double kAlbedoMatrixSpan = 0.22;
constexpr double kAlbedoThreshold = 0.5;
constexpr double kAlbedoBand = 0.21;
constexpr double kPatchDetailBase = 0.5;
constexpr double kDetailCellDiv = 3.0;
constexpr std::uint64_t kDetailSalt = 0xde7a115eedULL;

// Two-field albedo: a dim textured matrix, and wet patches whose interior
// carries fine bright detail. The patch detail is the contrast that
// overexposure destroys first; the wide shoulder keeps clipping contours
// soft so saturated frames have no crisp structure left.
double shape_albedo(double level, double detail) {
    const double matrix = kAlbedoMatrixLo + kAlbedoMatrixSpan * level;
    double s = (level - kAlbedoThreshold) / kAlbedoBand;
    s = std::clamp(s, 0.0, 1.0);
    const double shoulder = s * s * (3.0 - 2.0 * s);
    const double patch_tone = kPatchDetailBase + (1.0 - kPatchDetailBase) * detail;
    return matrix + (1.0 - matrix) * shoulder * patch_tone;
}

// One 3-octave value-noise sample at the given base frequency.
double value_noise_level(std::uint64_t seed, double u, double v, double base_freq) {
    double acc = 0.0;
    double amp = 1.0;
    double amp_sum = 0.0;
    double freq = base_freq;
    for (int octave = 0; octave < 3; ++octave) {
        OctaveRow row;
        row.start_row(seed, octave, freq, v);
        acc += amp * row.sample(u);
        amp_sum += amp;
        amp *= 0.5;
        freq *= 2.0;
    }
    return acc / amp_sum;
}

double value_noise(std::uint64_t seed, double u, double v, double cell_px) {
    const double level = value_noise_level(seed, u, v, 1.0 / cell_px);
    const double detail =
        value_noise_level(seed ^ kDetailSalt, u, v, kDetailCellDiv / cell_px);
    return shape_albedo(level, detail);
}

} // namespace

void ScenarioConfig::validate() const {
    if (width < 5 || height < 5) {
        throw InvalidInputError("scene needs at least 5x5 pixels");
    }
    if (texture_cell_px <= 0.0 || scroll_px_per_m < 0.0 || ambient_out < 0.0 ||
        ambient_floor < 0.0 || decay_depth_m <= 0.0 || led_gain < 0.0 ||
        specular_fraction < 0.0 || specular_fraction > 1.0 || specular_strength < 0.0 ||
        read_noise < 0.0 || shot_noise < 0.0 || exposure_ref_ms <= 0.0) {
        throw InvalidInputError("scenario scalars must be nonnegative");
    }
    if (!(gamma > 0.0 && gamma <= 2.0)) {
        throw InvalidInputError("gamma must lie in (0,2]");
    }
    if (!(culvert_in_m < culvert_out_m)) {
        throw InvalidInputError("culvert span must be ordered");
    }
}

double ambient(const ScenarioConfig& cfg, const Pose& pose) {
    const double d = pose.distance_m;
    if (d <= cfg.culvert_in_m || d >= cfg.culvert_out_m) {
        return cfg.ambient_out;
    }
    const double portal_dist = std::min(d - cfg.culvert_in_m, cfg.culvert_out_m - d);
    return std::max(cfg.ambient_floor, cfg.ambient_out * std::exp(-portal_dist / cfg.decay_depth_m));
}

double albedo(const ScenarioConfig& cfg, const Pose& pose, int x, int y) {
    const double u = static_cast<double>(x) + pose.distance_m * cfg.scroll_px_per_m;
    return value_noise(cfg.texture_seed, u, static_cast<double>(y), cfg.texture_cell_px);
}

bool is_specular(const ScenarioConfig& cfg, const Pose& pose, int x, int y) {
    const double u = static_cast<double>(x) + pose.distance_m * cfg.scroll_px_per_m;
    const auto iu = static_cast<std::int64_t>(std::floor(u));
    const double roll = rng::keyed_unit(rng::mix(cfg.texture_seed, kSpecularSalt),
                                        cell_key(iu, y));
    return roll < cfg.specular_fraction;
}

double exposure_value(const ScenarioConfig& cfg, const Pose& pose,
                      const bopt::ControlInput& ctl, int x, int y) {
    const double led = ctl.light * cfg.led_gain;
    double irradiance = (ambient(cfg, pose) + led) * albedo(cfg, pose, x, y);
    if (is_specular(cfg, pose, x, y)) {
        irradiance += cfg.specular_strength * led * led;
    }
    const double exposure_gain = ctl.exposure_ms / cfg.exposure_ref_ms;
    return std::pow(irradiance * exposure_gain, cfg.gamma);
}

Image render(const ScenarioConfig& cfg, const Pose& pose, const bopt::ControlInput& ctl,
             std::uint64_t frame_seed) {
    cfg.validate();
    if (!(ctl.light >= 0.0 && ctl.light <= 1.0 && ctl.exposure_ms > 0.0)) {
        throw InvalidInputError("control input outside physical bounds");
    }
    const double read_var = cfg.read_noise * cfg.read_noise;
    const double shot_var = cfg.shot_noise * cfg.shot_noise;
    const double led = ctl.light * cfg.led_gain;
    const double specular_add = cfg.specular_strength * led * led;
    const double light_level = ambient(cfg, pose) + led;
    const double exposure_gain = ctl.exposure_ms / cfg.exposure_ref_ms;
    const double scroll = pose.distance_m * cfg.scroll_px_per_m;
    const std::uint64_t spec_seed = rng::mix(cfg.texture_seed, kSpecularSalt);
    const bool noisy = read_var > 0.0 || cfg.shot_noise > 0.0;

    Image img = Image::filled(cfg.width, cfg.height, 0.0);
    std::array<OctaveRow, 3> rows;
    std::array<OctaveRow, 3> detail_rows;
    for (int y = 0; y < cfg.height; ++y) {
        double freq = 1.0 / cfg.texture_cell_px;
        double detail_freq = kDetailCellDiv / cfg.texture_cell_px;
        for (int octave = 0; octave < 3; ++octave, freq *= 2.0, detail_freq *= 2.0) {
            rows[static_cast<std::size_t>(octave)].start_row(
                cfg.texture_seed, octave, freq, static_cast<double>(y));
            detail_rows[static_cast<std::size_t>(octave)].start_row(
                cfg.texture_seed ^ kDetailSalt, octave, detail_freq,
                static_cast<double>(y));
        }
        for (int x = 0; x < cfg.width; ++x) {
            const double u = static_cast<double>(x) + scroll;
            const double level =
                (rows[0].sample(u) + 0.5 * rows[1].sample(u) + 0.25 * rows[2].sample(u)) /
                1.75;
            const double detail = (detail_rows[0].sample(u) + 0.5 * detail_rows[1].sample(u) +
                                   0.25 * detail_rows[2].sample(u)) /
                                  1.75;
            const double rho = shape_albedo(level, detail);
            double irradiance = light_level * rho;
            if (specular_add > 0.0) {
                const auto iu = static_cast<std::int64_t>(std::floor(u));
                if (rng::keyed_unit(spec_seed, cell_key(iu, y)) < cfg.specular_fraction) {
                    irradiance += specular_add;
                }
            }
            const double value = std::pow(irradiance * exposure_gain, cfg.gamma);
            double sample = value;
            if (noisy) {
                const double var = read_var + shot_var * std::min(value, 1.0);
                const std::uint64_t key =
                    rng::mix(frame_seed, static_cast<std::uint64_t>(x),
                             static_cast<std::uint64_t>(y));
                sample += std::sqrt(var) * rng::keyed_normal(key);
            }
            sample = std::clamp(sample, 0.0, 1.0);
            img.at(x, y) = pgm::dequantize(pgm::quantize(sample));
        }
    }
    return img;
}

void AeState::validate() const {
    if (!(min_ms > 0.0 && max_ms > min_ms)) {
        throw InvalidInputError("autoexposure bounds must satisfy 0 < min < max");
    }
    if (!(exposure_ms >= min_ms && exposure_ms <= max_ms)) {
        throw InvalidInputError("exposure outside bounds");
    }
    if (!(target > 0.0 && target <= 1.0) || rate < 0.0) {
        throw InvalidInputError("invalid autoexposure parameters");
    }
}

AeState autoexposure_step(const AeState& state, double measured_mean) {
    state.validate();
    if (!(measured_mean >= 0.0 && measured_mean <= 1.0)) {
        throw InvalidInputError("measured mean outside [0,1]");
    }
    AeState next = state;
    const double gain = std::exp(state.rate * (state.target - measured_mean) /
                                 std::max(state.target, 0.05));
    next.exposure_ms = std::clamp(state.exposure_ms * gain, state.min_ms, state.max_ms);
    return next;
}

} // namespace nh::sim
