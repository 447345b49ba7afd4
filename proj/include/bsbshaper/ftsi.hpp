#pragma once

// Polarization spectral interferometry: synthetic interferograms between
// two orthogonally polarized pulses delayed by tau_FTSI, and Fourier-
// transform retrieval of their relative spectral phase.
//
// Retrieval: S(omega) -> time domain -> super-Gaussian window on the +tau
// sideband -> back to frequency -> arg. The filtered component is
// (1/2) conj(E_a) E_b exp(i omega tau + i extra), so the phase is
// omega tau + arg E_b - arg E_a + extra.

#include <bsbshaper/errors.hpp>
#include <bsbshaper/pulsefield.hpp>
#include <bsbshaper/spectral.hpp>
#include <bsbshaper/units.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bsb {

inline constexpr double kWeightMaskThreshold = 1e-3;
inline constexpr double kMaxBasebandLeak = 0.01;
inline constexpr double kNoFringeThreshold = 1e-8;  // sideband/baseband peak amplitude

struct Interferogram {
    SpectralGrid grid;
    std::vector<double> intensity;
    double delay_hint = 0.0;  // s

    void validate() const {
        if (intensity.size() != grid.size()) throw GridMismatchError("interferogram length does not match its grid");
        for (double v : intensity)
            if (!(v >= 0.0)) throw ValidationError("interferogram intensity must be non-negative and finite");
    }
};

struct RetrievedPhase {
    SpectralGrid grid;
    std::vector<double> phase;   // rad
    std::vector<double> weight;  // |E_a||E_b| of the filtered cross term
    std::vector<std::uint8_t> masked;
    double sideband_time = 0.0;  // window centre actually used, s

    bool valid(std::size_t i) const { return masked[i] == 0; }

    std::size_t valid_count() const {
        std::size_t n = 0;
        for (auto m : masked) n += m == 0;
        return n;
    }
};

/// Wraps to (-pi, pi].
inline double wrap_phase(double x) {
    double y = std::remainder(x, kTwoPi);
    if (y <= -kPi) y += kTwoPi;
    return y;
}

/// S(omega) = 1/2 |E_a + E_b exp(i omega tau + i extra(omega))|^2.
inline Interferogram synthesize_interferogram(const SpectralField& ea, const SpectralField& eb, double tau,
                                              std::span<const double> extra_phase = {}) {
    require_same_grid(ea.grid(), eb.grid(), "synthesize_interferogram");
    const auto& grid = ea.grid();
    if (!(tau > 0.0)) throw ValidationError("FTSI delay must be positive");
    const double samples_per_fringe = kTwoPi / (tau * grid.omega_step());
    if (samples_per_fringe < 4.0) {
        throw UndersampledFringeError("fringe period is " + std::to_string(samples_per_fringe) +
                                      " samples for tau = " + std::to_string(tau / kFemtosecond) +
                                      " fs; at least 4 are required");
    }
    if (!extra_phase.empty() && extra_phase.size() != grid.size()) {
        throw GridMismatchError("extra phase length does not match the grid");
    }
    Interferogram s{grid, std::vector<double>(grid.size()), tau};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double ph = grid.omega(i) * tau + (extra_phase.empty() ? 0.0 : extra_phase[i]);
        s.intensity[i] = 0.5 * std::norm(ea[i] + eb[i] * std::polar(1.0, ph));
    }
    return s;
}

/// Super-Gaussian time gate exp(-((t - centre)/width)^order).
struct FtsiWindow {
    double center_time = 0.0;  // s; nominal sideband position
    double width = 0.0;        // s
    int order = 6;
    bool track_peak = true;    // recentre on the detected sideband maximum

    /// Defaults for a given delay: width tau/3, order 6.
    static FtsiWindow for_delay(double tau) { return FtsiWindow{tau, tau / 3.0, 6, true}; }

    double operator()(double t, double centre) const { return std::exp(-std::pow((t - centre) / width, order)); }
};

inline RetrievedPhase retrieve_phase(const Interferogram& s, const FtsiWindow& window) {
    s.validate();
    const auto& grid = s.grid;
    const std::size_t n = grid.size();
    if (window.order < 2 || window.order % 2 != 0) throw ValidationError("window order must be an even integer >= 2");
    if (!(window.width > 0.0)) throw ValidationError("window width must be positive");
    const double t_max = grid.time(n - 1);
    if (!(window.center_time > 0.0) || window.center_time >= t_max) {
        throw ValidationError("window centre must lie inside (0, " + std::to_string(t_max / kFemtosecond) + ") fs");
    }

    std::vector<Complex> spectrum(s.intensity.begin(), s.intensity.end());
    const SpectralField as_field(grid, std::move(spectrum), grid.omega(n / 2));
    TimeTrace trace = to_time(as_field);

    // Sideband peak in [tau/2, 3tau/2] against the baseband peak; the window
    // follows the sideband peak when tracking is on.
    double centre = window.center_time;
    double side_peak = 0.0, base_peak = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = trace.time(j);
        const double a = std::abs(trace.amplitude[j]);
        if (std::abs(t) < 0.5 * window.center_time) base_peak = std::max(base_peak, a);
        if (t < 0.5 * window.center_time || t > 1.5 * window.center_time) continue;
        if (a > side_peak) {
            side_peak = a;
            if (window.track_peak) centre = t;
        }
    }

    double leak = 0.0, sideband = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = trace.time(j);
        trace.amplitude[j] *= window(t, centre);
        (t < 0.5 * centre ? leak : sideband) += std::norm(trace.amplitude[j]);
    }

    RetrievedPhase out{grid, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<std::uint8_t>(n, 1),
                       centre};
    // No fringes (e.g. one arm dark): nothing to retrieve. The floor sits
    // above the ringing left by truncating the spectrum at the grid edges.
    if (side_peak <= kNoFringeThreshold * base_peak) return out;
    if (leak > kMaxBasebandLeak * sideband) {
        throw SidebandOverlapError("window centred at " + std::to_string(centre / kFemtosecond) + " fs captures " +
                                   std::to_string(leak / sideband) +
                                   " of the sideband energy from the baseband; narrow the window or increase tau");
    }

    const SpectralField filtered = to_frequency(trace, grid, grid.omega(n / 2));
    double max_weight = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out.phase[i] = std::arg(filtered[i]);
        out.weight[i] = 2.0 * std::abs(filtered[i]);
        max_weight = std::max(max_weight, out.weight[i]);
    }
    for (std::size_t i = 0; i < n; ++i) out.masked[i] = out.weight[i] < kWeightMaskThreshold * max_weight ? 1 : 0;
    return out;
}

namespace detail {

// Half-open [begin, end) runs of unmasked samples.
inline std::vector<std::pair<std::size_t, std::size_t>> valid_segments(const std::vector<std::uint8_t>& masked) {
    std::vector<std::pair<std::size_t, std::size_t>> segs;
    std::size_t i = 0;
    while (i < masked.size()) {
        while (i < masked.size() && masked[i]) ++i;
        const std::size_t b = i;
        while (i < masked.size() && !masked[i]) ++i;
        if (i > b) segs.emplace_back(b, i);
    }
    return segs;
}

inline std::size_t argmax_weight(const std::vector<double>& w, std::size_t b, std::size_t e) {
    std::size_t best = b;
    for (std::size_t i = b; i < e; ++i)
        if (w[i] > w[best]) best = i;
    return best;
}

}  // namespace detail

/// Removes 2 pi steps within each contiguous unmasked run, keeping the
/// run's highest-weight sample fixed. Masked samples are left untouched,
/// so a jump hidden in a masked gap survives.
inline RetrievedPhase unwrap(RetrievedPhase p) {
    const auto raw = p.phase;
    for (const auto& [b, e] : detail::valid_segments(p.masked)) {
        const std::size_t anchor = detail::argmax_weight(p.weight, b, e);
        for (std::size_t i = anchor + 1; i < e; ++i) p.phase[i] = p.phase[i - 1] + wrap_phase(raw[i] - raw[i - 1]);
        for (std::size_t i = anchor; i-- > b;) p.phase[i] = p.phase[i + 1] + wrap_phase(raw[i] - raw[i + 1]);
    }
    return p;
}

/// Pointwise difference on the intersection of the valid samples. Each
/// contiguous run is shifted by a multiple of 2 pi so that its highest-weight
/// sample lies in (-pi, pi].
inline RetrievedPhase subtract_reference(const RetrievedPhase& with_bsb, const RetrievedPhase& without_bsb) {
    require_same_grid(with_bsb.grid, without_bsb.grid, "subtract_reference");
    const std::size_t n = with_bsb.grid.size();
    RetrievedPhase out{with_bsb.grid, std::vector<double>(n, 0.0), with_bsb.weight, std::vector<std::uint8_t>(n, 1),
                       with_bsb.sideband_time};
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (with_bsb.masked[i] || without_bsb.masked[i]) continue;
        out.masked[i] = 0;
        out.phase[i] = with_bsb.phase[i] - without_bsb.phase[i];
        any = true;
    }
    if (!any) throw InsufficientDataError("reference subtraction: the valid samples of the two phases do not overlap");
    for (const auto& [b, e] : detail::valid_segments(out.masked)) {
        const std::size_t anchor = detail::argmax_weight(out.weight, b, e);
        const double shift = wrap_phase(out.phase[anchor]) - out.phase[anchor];
        for (std::size_t i = b; i < e; ++i) out.phase[i] += shift;
    }
    return out;
}

struct PhaseJump {
    double location = 0.0;   // rad/s
    double magnitude = 0.0;  // rad, right level minus left level
    int sign = 0;
};

inline constexpr double kDefaultJumpHalfWidth = kTwoPi * 10.0 * kTerahertz;

/// Jump across omega0 as the difference of median phase levels in
/// [omega0 - half_width, omega0) and (omega0, omega0 + half_width].
///
/// Each side is followed continuously and its median is wrapped into
/// (-pi, pi]; the magnitude is the plain difference of the two levels, so a
/// jump of exactly pi keeps the sign given by the levels and flips when the
/// phase is negated. Differences beyond 3pi/2 are branch-cut artefacts and are
/// wrapped. The location is the midpoint of the steepest step in the span.
inline PhaseJump detect_phase_jump(const RetrievedPhase& p, double omega0,
                                   double half_width = kDefaultJumpHalfWidth, std::size_t min_samples = 3) {
    const auto& grid = p.grid;
    std::vector<std::size_t> left, right;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double w = grid.omega(i);
        if (!p.valid(i) || w < omega0 - half_width || w > omega0 + half_width || w == omega0) continue;
        (w < omega0 ? left : right).push_back(i);
    }
    if (left.size() < min_samples || right.size() < min_samples) {
        throw InsufficientDataError("phase jump detection needs at least " + std::to_string(min_samples) +
                                    " valid samples on each side of omega0 (have " + std::to_string(left.size()) +
                                    " and " + std::to_string(right.size()) + ")");
    }

    // Continuous phase along one side, starting from the sample nearest omega0.
    auto level = [&](std::vector<std::size_t> idx, bool reverse) {
        if (reverse) std::reverse(idx.begin(), idx.end());
        std::vector<double> cont{wrap_phase(p.phase[idx[0]])};
        for (std::size_t k = 1; k < idx.size(); ++k) {
            cont.push_back(cont.back() + wrap_phase(p.phase[idx[k]] - p.phase[idx[k - 1]]));
        }
        const std::size_t m = cont.size() / 2;
        std::nth_element(cont.begin(), cont.begin() + static_cast<std::ptrdiff_t>(m), cont.end());
        double med = cont[m];
        if (cont.size() % 2 == 0) med = 0.5 * (med + *std::max_element(cont.begin(), cont.begin() + static_cast<std::ptrdiff_t>(m)));
        return wrap_phase(med);
    };

    PhaseJump jump;
    jump.magnitude = level(right, false) - level(left, true);
    if (std::abs(jump.magnitude) > 1.5 * kPi) jump.magnitude = wrap_phase(jump.magnitude);
    jump.sign = jump.magnitude > 0.0 ? 1 : (jump.magnitude < 0.0 ? -1 : 0);

    std::vector<std::size_t> all(left);
    all.insert(all.end(), right.begin(), right.end());
    double steepest = -1.0;
    jump.location = omega0;
    for (std::size_t k = 1; k < all.size(); ++k) {
        const double step = std::abs(wrap_phase(p.phase[all[k]] - p.phase[all[k - 1]]));
        if (step > steepest) {
            steepest = step;
            jump.location = 0.5 * (grid.omega(all[k - 1]) + grid.omega(all[k]));
        }
    }
    return jump;
}

}  // namespace bsb
