#pragma once

// Sellmeier dispersion for uniaxial crystals and the birefringence
// quantities derived from it: wavevector difference between the
// extraordinary and ordinary axes, its frequency derivative, and the
// frequency at which the linearized birefringent phase crosses zero.
//
// Wavelengths are in micrometres at this interface (the unit the
// coefficients are published in); frequencies are angular, in rad/s.

#include <bsbshaper/errors.hpp>
#include <bsbshaper/units.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace bsb {

struct SellmeierTerm {
    double strength = 0.0;       // B_i, dimensionless
    double resonance_um2 = 0.0;  // C_i, um^2
};

/// n^2(l) = A + sum_i B_i l^2/(l^2 - C_i) + D l^2, with l in um.
struct SellmeierModel {
    std::string label;  // e.g. "quartz.ordinary", used in error messages
    double constant = 1.0;
    std::vector<SellmeierTerm> terms;
    double quadratic_um2 = 0.0;  // D, um^-2; zero for the pure Sellmeier form
    double lambda_min_um = 0.0;
    double lambda_max_um = 0.0;

    double n_squared(double lambda_um) const {
        const double l2 = lambda_um * lambda_um;
        double s = constant + quadratic_um2 * l2;
        for (const auto& t : terms) s += t.strength * l2 / (l2 - t.resonance_um2);
        return s;
    }

    /// d(n^2)/dl, um^-1.
    double n_squared_derivative(double lambda_um) const {
        const double l2 = lambda_um * lambda_um;
        double d = 2.0 * quadratic_um2 * lambda_um;
        for (const auto& t : terms) {
            const double den = l2 - t.resonance_um2;
            d += -2.0 * t.strength * t.resonance_um2 * lambda_um / (den * den);
        }
        return d;
    }

    bool contains(double lambda_um) const {
        return lambda_um >= lambda_min_um && lambda_um <= lambda_max_um;
    }

    /// Checks the window is sane, has no pole inside it and keeps n^2 > 1.
    void validate() const {
        if (!(lambda_min_um > 0.0) || !(lambda_max_um > lambda_min_um)) {
            throw ValidationError(label + ": invalid valid_range_um [" + std::to_string(lambda_min_um) + ", " +
                                  std::to_string(lambda_max_um) + "]");
        }
        for (const auto& t : terms) {
            if (t.resonance_um2 > 0.0) {
                const double pole = std::sqrt(t.resonance_um2);
                if (pole >= lambda_min_um && pole <= lambda_max_um) {
                    throw ValidationError(label + ": Sellmeier pole at " + std::to_string(pole) +
                                          " um lies inside the validity window");
                }
            }
        }
        constexpr int kSamples = 512;
        for (int i = 0; i <= kSamples; ++i) {
            const double l = lambda_min_um + (lambda_max_um - lambda_min_um) * i / kSamples;
            if (!(n_squared(l) > 1.0)) {
                throw ValidationError(label + ": n^2 <= 1 at " + std::to_string(l) + " um");
            }
        }
    }
};

namespace detail {

inline void require_in_range(const SellmeierModel& model, double lambda_um, bool strict) {
    const bool below = strict ? !(lambda_um > model.lambda_min_um) : !(lambda_um >= model.lambda_min_um);
    const bool above = strict ? !(lambda_um < model.lambda_max_um) : !(lambda_um <= model.lambda_max_um);
    if (below || above) {
        throw RangeError(model.label + ": wavelength " + std::to_string(lambda_um) + " um is " +
                         (below ? "below the lower" : "above the upper") + " bound " +
                         std::to_string(below ? model.lambda_min_um : model.lambda_max_um) + " um");
    }
}

}  // namespace detail

inline double refractive_index(const SellmeierModel& model, double lambda_um) {
    detail::require_in_range(model, lambda_um, false);
    return std::sqrt(model.n_squared(lambda_um));
}

/// n_g = n - l dn/dl, from the analytic derivative of the Sellmeier form.
/// The wavelength must lie strictly inside the validity window.
inline double group_index(const SellmeierModel& model, double lambda_um) {
    detail::require_in_range(model, lambda_um, true);
    const double n = std::sqrt(model.n_squared(lambda_um));
    const double dn_dl = model.n_squared_derivative(lambda_um) / (2.0 * n);
    return n - lambda_um * dn_dl;
}

struct Material {
    std::string name;
    SellmeierModel ordinary;
    SellmeierModel extraordinary;
    std::string citation;

    double lambda_min_um() const { return std::max(ordinary.lambda_min_um, extraordinary.lambda_min_um); }
    double lambda_max_um() const { return std::min(ordinary.lambda_max_um, extraordinary.lambda_max_um); }

    /// Angular frequency window in which both axes are valid.
    double omega_min() const { return omega_from_wavelength_um(lambda_max_um()); }
    double omega_max() const { return omega_from_wavelength_um(lambda_min_um()); }
};

/// Same crystal with the ordinary and extraordinary roles exchanged.
inline Material swapped_axes(const Material& m) {
    Material out = m;
    std::swap(out.ordinary, out.extraordinary);
    out.name = m.name + "(swapped)";
    return out;
}

/// Phase index difference n_e - n_o.
inline double delta_n(const Material& m, double lambda_um) {
    return refractive_index(m.extraordinary, lambda_um) - refractive_index(m.ordinary, lambda_um);
}

inline double delta_group_index(const Material& m, double lambda_um) {
    return group_index(m.extraordinary, lambda_um) - group_index(m.ordinary, lambda_um);
}

/// k_e - k_o in rad/m.
inline double delta_k(const Material& m, double omega) {
    return delta_n(m, wavelength_um_from_omega(omega)) * omega / kSpeedOfLight;
}

/// d(k_e - k_o)/domega in s/m, i.e. the group delay difference per metre.
inline double delta_k_prime(const Material& m, double omega) {
    return delta_group_index(m, wavelength_um_from_omega(omega)) / kSpeedOfLight;
}

/// Zero of the birefringent phase linearized about omega0:
/// omega1 = omega0 - dk(omega0)/dk'(omega0).
inline double omega1(const Material& m, double omega0) {
    const double slope = delta_k_prime(m, omega0);
    if (slope == 0.0) {
        throw DegeneracyError(m.name + ": group index difference vanishes at " +
                              std::to_string(wavelength_um_from_omega(omega0)) + " um, omega1 undefined");
    }
    return omega0 - delta_k(m, omega0) / slope;
}

/// A material whose two axes share one model (no birefringence).
inline Material isotropic_material(std::string name, SellmeierModel model) {
    return Material{std::move(name), model, model, "synthetic"};
}

}  // namespace bsb
