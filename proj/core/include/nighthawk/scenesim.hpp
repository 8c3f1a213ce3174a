#pragma once

#include <cstdint>

#include "nighthawk/bopt.hpp"
#include "nighthawk/image.hpp"

namespace nh::sim {

/// Synthetic culvert scene and camera constants. The model reproduces the
/// qualitative failure modes of a real low-light tunnel — darkness kills
/// gradients at one corner of the control box, saturation and specular
/// highlights kill them at the other — not photometric accuracy.
struct ScenarioConfig {
    int width = 160;
    int height = 120;
    std::uint64_t texture_seed = 42;
    double texture_cell_px = 12.0;   // base value-noise cell size
    double scroll_px_per_m = 8.0;    // texture translation per meter traveled
    double ambient_out = 1.0;        // lux-equivalent outside the culvert
    double ambient_floor = 0.001;    // deep-interior residual light
    double decay_depth_m = 3.0;      // portal light penetration depth
    double culvert_in_m = 10.0;      // entry portal along the path
    double culvert_out_m = 76.0;     // exit portal (66 m culvert by default)
    double led_gain = 0.8;           // irradiance per unit light fraction
    double specular_fraction = 0.02; // fraction of pixels hosting highlights
    double specular_strength = 3.0;
    double gamma = 0.8;              // tone curve exponent
    double read_noise = 0.01;        // sigma_r
    double shot_noise = 0.02;        // sigma_s, variance per unit signal
    double exposure_ref_ms = 10.0;   // exposure normalizer

    void validate() const;
};

/// Distance traveled along the inspection path, in meters.
struct Pose {
    double distance_m = 0.0;
};

/// Ambient light at a pose: ambient_out outside the culvert span, an
/// exponential falloff from the nearer portal inside, floored at
/// ambient_floor. Continuous in distance and equal to ambient_out at both
/// portals.
double ambient(const ScenarioConfig& cfg, const Pose& pose);

/// Procedural albedo in [0,1]: 3-octave value noise sampled at the
/// pose-scrolled pixel coordinate, so frames translate as the camera moves.
double albedo(const ScenarioConfig& cfg, const Pose& pose, int x, int y);

/// Whether the pixel hosts a specular highlight (wet-wall reflection).
/// The mask scrolls with the texture.
bool is_specular(const ScenarioConfig& cfg, const Pose& pose, int x, int y);

/// Pre-noise, pre-clamp tonemapped exposure value of one pixel:
/// ((ambient + P*led_gain)*albedo [+ specular] * dt/dt_ref)^gamma.
/// Monotone in both light and exposure.
double exposure_value(const ScenarioConfig& cfg, const Pose& pose,
                      const bopt::ControlInput& ctl, int x, int y);

/// Renders one frame. Per-pixel noise is N(0, read_noise^2 +
/// shot_noise^2*min(V,1)) drawn from a counter-based stream keyed by
/// (frame_seed, x, y): identical inputs give bit-identical images in any
/// evaluation order. Output is clamped to [0,1] and 8-bit quantized.
Image render(const ScenarioConfig& cfg, const Pose& pose, const bopt::ControlInput& ctl,
             std::uint64_t frame_seed);

/// Mean-intensity autoexposure baseline state.
struct AeState {
    double exposure_ms = 10.0;
    double target = 0.5;  // mean-intensity setpoint
    double rate = 0.35;   // proportional step
    double min_ms = 0.5;  // camera hardware range, independent of the
    double max_ms = 40.0; // optimizer's frame-rate-constrained box

    void validate() const;
};

/// Multiplicative proportional control toward the setpoint:
/// dt' = clamp(dt * exp(rate * (target - measured)/max(target, 0.05))).
AeState autoexposure_step(const AeState& state, double measured_mean);

} // namespace nh::sim
