#pragma once

// Babinet-Soleil-Bravais compensator model. The device is a stack of
// birefringent segments whose axes sit at 45 degrees to the input
// polarization x; a negative segment thickness means the ordinary and
// extraordinary axes of that segment are exchanged. For input E0 along x
// the output is
//
//   H_x = exp(i phi) cos(Gamma/2),   H_y = i exp(i phi) sin(Gamma/2)
//
// with retardance Gamma(omega) = sum_s dk_s(omega) L_s and common phase
// phi(omega) = sum_s (k_e + k_o)|L_s|/2.

#include <bsbshaper/dispersion.hpp>
#include <bsbshaper/errors.hpp>
#include <bsbshaper/spectral.hpp>
#include <bsbshaper/units.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace bsb {

inline constexpr double kDefaultMaxThickness = 10e-3;  // m, per segment

struct Segment {
    Material material;
    double thickness = 0.0;  // m, signed
};

class Compensator {
public:
    static constexpr double kOrientationDegrees = 45.0;

    explicit Compensator(std::vector<Segment> segments, double max_thickness = kDefaultMaxThickness)
        : segments_(std::move(segments)) {
        for (const auto& s : segments_) {
            if (!std::isfinite(s.thickness) || std::abs(s.thickness) > max_thickness) {
                throw ValidationError("segment thickness " + std::to_string(s.thickness / kMicrometre) +
                                      " um of " + s.material.name + " exceeds the bound of " +
                                      std::to_string(max_thickness / kMicrometre) + " um");
            }
        }
    }

    static Compensator single(const Material& material, double thickness,
                              double max_thickness = kDefaultMaxThickness) {
        return Compensator({Segment{material, thickness}}, max_thickness);
    }

    const std::vector<Segment>& segments() const noexcept { return segments_; }

    /// Gamma(omega) = sum dk L, rad.
    double retardance(double omega) const {
        double g = 0.0;
        for (const auto& s : segments_)
            if (s.thickness != 0.0) g += delta_k(s.material, omega) * s.thickness;
        return g;
    }

    /// phi(omega) = sum (k_e + k_o)|L|/2, rad.
    double common_phase(double omega) const {
        double phi = 0.0;
        for (const auto& s : segments_) {
            if (s.thickness == 0.0) continue;
            const double l = wavelength_um_from_omega(omega);
            const double n_sum = refractive_index(s.material.ordinary, l) + refractive_index(s.material.extraordinary, l);
            phi += n_sum * omega / kSpeedOfLight * std::abs(s.thickness) / 2.0;
        }
        return phi;
    }

    /// Group delay difference between the two output polarizations, dGamma/domega, s.
    double delay(double omega0) const {
        double tau = 0.0;
        for (const auto& s : segments_)
            if (s.thickness != 0.0) tau += delta_k_prime(s.material, omega0) * s.thickness;
        return tau;
    }

    /// Interference order n with Gamma(omega0)/2 = n pi.
    double order(double omega0) const { return retardance(omega0) / kTwoPi; }

    double omega1(double omega0) const {
        const double tau = delay(omega0);
        if (tau == 0.0) throw DegeneracyError("compensator has zero group delay difference; omega1 undefined");
        return omega0 - retardance(omega0) / tau;
    }

    /// Throws RangeError if any segment's material is invalid somewhere on the grid.
    void check_grid(const SpectralGrid& grid) const {
        for (const auto& s : segments_) {
            if (s.thickness == 0.0) continue;
            if (grid.omega_start() < s.material.omega_min() || grid.omega_end() > s.material.omega_max()) {
                throw RangeError(s.material.name + " is valid over " + std::to_string(s.material.lambda_min_um()) +
                                 "-" + std::to_string(s.material.lambda_max_um()) + " um, grid spans " +
                                 std::to_string(wavelength_um_from_omega(grid.omega_end())) + "-" +
                                 std::to_string(wavelength_um_from_omega(grid.omega_start())) + " um");
            }
        }
    }

private:
    std::vector<Segment> segments_;
};

/// Output amplitudes per unit input along x. The common phase is kept apart
/// from the polarization split so ratios cancel it exactly.
struct TransferPair {
    SpectralGrid grid;
    std::vector<double> cos_half;  // cos(Gamma/2)
    std::vector<double> sin_half;  // sin(Gamma/2)
    std::vector<double> common_phase;
    bool common_phase_included = true;

    Complex hx(std::size_t i) const {
        const Complex reduced(cos_half[i], 0.0);
        return common_phase_included ? reduced * std::polar(1.0, common_phase[i]) : reduced;
    }

    Complex hy(std::size_t i) const {
        const Complex reduced(0.0, sin_half[i]);
        return common_phase_included ? reduced * std::polar(1.0, common_phase[i]) : reduced;
    }
};

inline TransferPair transfer_exact(const Compensator& comp, const SpectralGrid& grid, bool include_common_phase = true) {
    comp.check_grid(grid);
    const std::size_t n = grid.size();
    TransferPair pair{grid, std::vector<double>(n), std::vector<double>(n), std::vector<double>(n, 0.0),
                      include_common_phase};
    for (std::size_t i = 0; i < n; ++i) {
        const double w = grid.omega(i);
        const double half = comp.retardance(w) / 2.0;
        pair.cos_half[i] = std::cos(half);
        pair.sin_half[i] = std::sin(half);
        if (include_common_phase) pair.common_phase[i] = comp.common_phase(w);
    }
    return pair;
}

/// Which polarization carries the shaped pulse.
///  field            : signal on x, shaped on -y (response -i(omega - omega1)T1 at first order)
///  envelope_integer : integer order, signal on x, shaped on -y
///  envelope_half    : half-integer order, signal on -y, shaped on x
enum class ResponseMode { field, envelope_integer, envelope_half };

inline std::string_view to_string(ResponseMode m) {
    switch (m) {
        case ResponseMode::field: return "field";
        case ResponseMode::envelope_integer: return "envelope-integer";
        case ResponseMode::envelope_half: return "envelope-half";
    }
    return "?";
}

inline ResponseMode parse_response_mode(std::string_view s) {
    if (s == "field") return ResponseMode::field;
    if (s == "envelope-integer") return ResponseMode::envelope_integer;
    if (s == "envelope-half" || s == "envelope") return ResponseMode::envelope_half;
    throw ValidationError("unknown mode '" + std::string(s) + "' (expected field, envelope-integer, envelope-half)");
}

inline bool is_envelope(ResponseMode m) { return m != ResponseMode::field; }

namespace detail {

// Polarization amplitudes without the common phase, oriented per mode.
inline Complex reduced_signal(const TransferPair& p, ResponseMode mode, std::size_t i) {
    return mode == ResponseMode::envelope_half ? Complex(0.0, -p.sin_half[i]) : Complex(p.cos_half[i], 0.0);
}

inline Complex reduced_shaped(const TransferPair& p, ResponseMode mode, std::size_t i) {
    return mode == ResponseMode::envelope_half ? Complex(p.cos_half[i], 0.0) : Complex(0.0, -p.sin_half[i]);
}

inline Complex carrier_phasor(const TransferPair& p, ResponseMode mode, double omega0) {
    const Complex s = reduced_signal(p, mode, p.grid.nearest_index(omega0));
    const double mag = std::abs(s);
    if (mag == 0.0) throw DegeneracyError("signal polarization is extinguished at the carrier");
    return s / mag;
}

}  // namespace detail

inline constexpr double kDenominatorMaskThreshold = 1e-6;

/// Shaped over unshaped complex amplitude with the common phase cancelled.
/// Samples whose denominator is below 1e-6 of its maximum are set to zero
/// and flagged in `masked`.
inline TransferFunction effective_response(const TransferPair& pair, ResponseMode mode) {
    const std::size_t n = pair.grid.size();
    double max_den = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_den = std::max(max_den, std::abs(detail::reduced_signal(pair, mode, i)));
    TransferFunction r{pair.grid, std::vector<Complex>(n), "effective " + std::string(to_string(mode)),
                       TransferKind::relative, std::vector<std::uint8_t>(n, 0)};
    for (std::size_t i = 0; i < n; ++i) {
        const Complex den = detail::reduced_signal(pair, mode, i);
        if (std::abs(den) < kDenominatorMaskThreshold * max_den) {
            r.masked[i] = 1;
            continue;
        }
        r.values[i] = detail::reduced_shaped(pair, mode, i) / den;
    }
    return r;
}

/// Shaped polarization per unit input, common phase removed and referenced
/// to the signal polarization's phase at the carrier.
inline TransferFunction shaped_response(const TransferPair& pair, ResponseMode mode, double omega0) {
    const Complex ref = std::conj(detail::carrier_phasor(pair, mode, omega0));
    TransferFunction r{pair.grid, std::vector<Complex>(pair.grid.size()), "shaped " + std::string(to_string(mode)),
                       TransferKind::physical, {}};
    for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = detail::reduced_shaped(pair, mode, i) * ref;
    return r;
}

/// Unshaped (signal) polarization with the same reference as shaped_response.
inline TransferFunction signal_response(const TransferPair& pair, ResponseMode mode, double omega0) {
    const Complex ref = std::conj(detail::carrier_phasor(pair, mode, omega0));
    TransferFunction r{pair.grid, std::vector<Complex>(pair.grid.size()), "signal " + std::string(to_string(mode)),
                       TransferKind::physical, {}};
    for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = detail::reduced_signal(pair, mode, i) * ref;
    return r;
}

/// R1(omega) = -i omega T1.
inline TransferFunction objective_r1(const SpectralGrid& grid, double t1) {
    if (!(t1 > 0.0)) throw ValidationError("T1 must be positive");
    TransferFunction r{grid, std::vector<Complex>(grid.size()), "objective R1", TransferKind::objective, {}};
    for (std::size_t i = 0; i < grid.size(); ++i) r.values[i] = Complex(0.0, -grid.omega(i) * t1);
    return r;
}

/// R2(omega) = -i (omega - omega0) T2.
inline TransferFunction objective_r2(const SpectralGrid& grid, double t2, double omega0) {
    if (!(t2 > 0.0)) throw ValidationError("T2 must be positive");
    if (!grid.contains(omega0)) throw ValidationError("omega0 lies outside the grid");
    TransferFunction r{grid, std::vector<Complex>(grid.size()), "objective R2", TransferKind::objective, {}};
    for (std::size_t i = 0; i < grid.size(); ++i) r.values[i] = Complex(0.0, -(grid.omega(i) - omega0) * t2);
    return r;
}

inline TransferFunction objective_for_mode(const SpectralGrid& grid, ResponseMode mode, double t, double omega0) {
    return mode == ResponseMode::field ? objective_r1(grid, t) : objective_r2(grid, t, omega0);
}

enum class Linearization {
    frequency,  // retardance expanded to first order about omega0 (closed form)
    thickness,  // small-retardance expansion only; exact dk(omega) kept
};

/// First-order response of the shaped polarization relative to the signal.
///  field      : -i (omega - omega1) tau/2 = -i [Gamma(omega0) + (omega - omega0) tau]/2
///  envelope_* : -i (omega - omega0) tau/2
/// with tau the compensator's group delay difference at omega0.
inline TransferFunction first_order_response(const Compensator& comp, const SpectralGrid& grid, ResponseMode mode,
                                             double omega0, Linearization lin = Linearization::frequency) {
    comp.check_grid(grid);
    const double tau = comp.delay(omega0);
    const double gamma0 = comp.retardance(omega0);
    TransferFunction r{grid, std::vector<Complex>(grid.size()), "first-order " + std::string(to_string(mode)),
                       TransferKind::relative, {}};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double w = grid.omega(i);
        double phase_arg = 0.0;
        if (lin == Linearization::frequency) {
            phase_arg = mode == ResponseMode::field ? gamma0 + (w - omega0) * tau : (w - omega0) * tau;
        } else {
            const double g = comp.retardance(w);
            phase_arg = mode == ResponseMode::field ? g : g - gamma0;
        }
        r.values[i] = Complex(0.0, -phase_arg / 2.0);
    }
    return r;
}

}  // namespace bsb
