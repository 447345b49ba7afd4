#pragma once

// Fidelity of a shaped pulse against its objective mode, transmitted
// efficiency, and compensator design: thickness for a target delay, for
// an interference order, and the two-material combination that places
// omega1 where requested.

#include <bsbshaper/dispersion.hpp>
#include <bsbshaper/errors.hpp>
#include <bsbshaper/pulsefield.hpp>
#include <bsbshaper/shaper.hpp>
#include <bsbshaper/spectral.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

namespace bsb {

struct Band {
    double lo = 0.0;  // rad/s
    double hi = 0.0;

    bool contains(double w) const noexcept { return w >= lo && w <= hi; }
};

inline constexpr double kDefaultBandThreshold = 1e-4;

/// Smallest interval holding every sample whose intensity is at least
/// `relative` of the peak.
inline Band source_band(const SpectralField& source, double relative = kDefaultBandThreshold) {
    const double cut = relative * source.peak_intensity();
    if (!(cut > 0.0)) throw DegeneracyError("source field is identically zero");
    Band b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < source.size(); ++i) {
        if (std::norm(source[i]) >= cut) {
            b.lo = std::min(b.lo, source.grid().omega(i));
            b.hi = std::max(b.hi, source.grid().omega(i));
        }
    }
    return b;
}

inline Band full_band(const SpectralGrid& grid) { return Band{grid.omega_start(), grid.omega_end()}; }

/// |<a, b>|^2 / (<a, a><b, b>) restricted to `band`.
inline double mode_overlap(const SpectralField& a, const SpectralField& b, const Band& band) {
    require_same_grid(a.grid(), b.grid(), "mode_overlap");
    Complex cross{};
    double ea = 0.0, eb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!band.contains(a.grid().omega(i))) continue;
        cross += std::conj(a[i]) * b[i];
        ea += std::norm(a[i]);
        eb += std::norm(b[i]);
    }
    if (!(ea > 0.0) || !(eb > 0.0)) throw DegeneracyError("mode_overlap: a field has zero energy on the band");
    return std::min(1.0, std::norm(cross) / (ea * eb));
}

inline SpectralField shaped_field(const Compensator& comp, const SpectralField& source, ResponseMode mode) {
    const auto pair = transfer_exact(comp, source.grid(), false);
    return apply_transfer(source, shaped_response(pair, mode, source.carrier()));
}

inline SpectralField signal_field(const Compensator& comp, const SpectralField& source, ResponseMode mode) {
    const auto pair = transfer_exact(comp, source.grid(), false);
    return apply_transfer(source, signal_response(pair, mode, source.carrier()));
}

/// Target mode for a compensator: -i omega T1 E or -i (omega - omega0) T2 E,
/// with T = |tau|/2 from the compensator's delay.
inline SpectralField objective_field(const Compensator& comp, const SpectralField& source, ResponseMode mode) {
    double t = std::abs(comp.delay(source.carrier())) / 2.0;
    if (t == 0.0) t = 1.0 * kFemtosecond;  // overlap is scale invariant
    return mode == ResponseMode::field ? derivative_field_oracle(source, t) : derivative_envelope_oracle(source, t);
}

/// Shaped-polarization power over input power.
inline double efficiency(const Compensator& comp, const SpectralField& source, ResponseMode mode) {
    const auto pair = transfer_exact(comp, source.grid(), false);
    double in = 0.0, out = 0.0;
    for (std::size_t i = 0; i < source.size(); ++i) {
        const double e = std::norm(source[i]);
        const double h = mode == ResponseMode::envelope_half ? pair.cos_half[i] : pair.sin_half[i];
        in += e;
        out += e * h * h;
    }
    if (!(in > 0.0)) throw DegeneracyError("efficiency: source field has zero energy");
    return out / in;
}

namespace detail {
inline std::string format_threshold(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return buf;
}
}  // namespace detail

struct OverlapReport {
    double overlap = 0.0;
    double efficiency = 0.0;
    Band band;
    std::string weighting;
};

/// Overlap of the exact shaped field with the objective mode on the
/// source band, plus the efficiency of the configuration.
inline OverlapReport assess(const Compensator& comp, const SpectralField& source, ResponseMode mode,
                            double band_threshold = kDefaultBandThreshold) {
    OverlapReport r;
    r.band = source_band(source, band_threshold);
    r.overlap = mode_overlap(objective_field(comp, source, mode), shaped_field(comp, source, mode), r.band);
    r.efficiency = efficiency(comp, source, mode);
    r.weighting = "complex amplitude, band |E|^2 >= " + detail::format_threshold(band_threshold) + " of peak";
    return r;
}

struct DesignResiduals {
    double delay_relative = 0.0;   // (achieved - target)/target, or absolute when target is 0
    double order_absolute = 0.0;   // achieved - target
    double omega1_relative = 0.0;  // |achieved - target|/omega0
};

struct DesignSolution {
    std::vector<Segment> segments;
    double omega0 = 0.0;
    double achieved_delay = 0.0;   // s
    double achieved_order = 0.0;
    double achieved_omega1 = std::numeric_limits<double>::quiet_NaN();  // rad/s; NaN when the delay is zero
    double condition_number = 1.0;
    DesignResiduals residuals;

    Compensator compensator() const { return Compensator(segments); }
};

namespace detail {

inline DesignSolution finish_design(std::vector<Segment> segments, double omega0) {
    DesignSolution s;
    s.segments = std::move(segments);
    s.omega0 = omega0;
    const Compensator comp(s.segments);
    s.achieved_delay = comp.delay(omega0);
    s.achieved_order = comp.order(omega0);
    if (s.achieved_delay != 0.0) s.achieved_omega1 = comp.omega1(omega0);
    return s;
}

inline double relative_or_absolute(double achieved, double target) {
    return target != 0.0 ? (achieved - target) / target : achieved - target;
}

}  // namespace detail

/// L = tau / dk'(omega0).
inline DesignSolution thickness_for_delay(const Material& m, double omega0, double tau) {
    const double slope = delta_k_prime(m, omega0);
    if (slope == 0.0) throw DegeneracyError(m.name + ": zero group delay difference, no thickness gives a delay");
    auto s = detail::finish_design({Segment{m, tau / slope}}, omega0);
    s.residuals.delay_relative = detail::relative_or_absolute(s.achieved_delay, tau);
    return s;
}

/// L = 2 n pi / dk(omega0) for n = 0, 1/2, 1, 3/2, ...
inline DesignSolution thickness_for_order(const Material& m, double omega0, double order) {
    if (!(order >= 0.0) || std::abs(2.0 * order - std::round(2.0 * order)) > 1e-9) {
        throw ValidationError("interference order must be a non-negative multiple of 1/2");
    }
    const double dk = delta_k(m, omega0);
    if (dk == 0.0) throw DegeneracyError(m.name + ": no birefringence at the carrier, order undefined");
    auto s = detail::finish_design({Segment{m, kTwoPi * order / dk}}, omega0);
    s.residuals.order_absolute = s.achieved_order - order;
    return s;
}

inline constexpr double kMaxAchromatCondition = 1e8;

/// Two segments (signed thicknesses) meeting
///   sum dk'_i L_i = tau   and   sum dk_i L_i = (omega0 - omega1_target) tau.
/// The delay row is scaled by omega0 so both rows are in rad/m before the
/// condition number is taken.
inline DesignSolution achromat_design(const Material& a, const Material& b, double omega0, double target_omega1,
                                      double target_tau) {
    const double a11 = omega0 * delta_k_prime(a, omega0), a12 = omega0 * delta_k_prime(b, omega0);
    const double a21 = delta_k(a, omega0), a22 = delta_k(b, omega0);
    const double r1 = omega0 * target_tau, r2 = (omega0 - target_omega1) * target_tau;

    // 2x2 singular values from the eigenvalues of A^T A.
    const double p = a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22;
    const double det = a11 * a22 - a12 * a21;
    const double disc = std::sqrt(std::max(0.0, p * p - 4.0 * det * det));
    const double s_max = std::sqrt(0.5 * (p + disc));
    const double s_min_sq = 0.5 * (p - disc);
    const double s_min = s_min_sq > 0.0 ? std::sqrt(s_min_sq) : std::abs(det) / s_max;
    const double cond = s_min > 0.0 ? s_max / s_min : std::numeric_limits<double>::infinity();
    if (!(cond <= kMaxAchromatCondition)) {
        throw DegeneracyError("achromat pair " + a.name + " + " + b.name + " is singular or ill-conditioned (condition " +
                              std::to_string(cond) + ")");
    }
    const double la = (r1 * a22 - a12 * r2) / det;
    const double lb = (a11 * r2 - a21 * r1) / det;

    auto s = detail::finish_design({Segment{a, la}, Segment{b, lb}}, omega0);
    s.condition_number = cond;
    s.residuals.delay_relative = detail::relative_or_absolute(s.achieved_delay, target_tau);
    s.residuals.omega1_relative = std::abs(s.achieved_omega1 - target_omega1) / omega0;
    return s;
}

}  // namespace bsb
