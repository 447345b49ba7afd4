#pragma once

// Test pulses, filtering, the discrete time/frequency transforms, and the
// analytic differentiation targets the shaper is measured against.

#include <bsbshaper/errors.hpp>
#include <bsbshaper/fft.hpp>
#include <bsbshaper/spectral.hpp>
#include <bsbshaper/units.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace bsb {

inline constexpr double kDefaultLeakFraction = 1e-6;

/// Fraction of a field's energy sitting in the outermost `edge_fraction` of
/// samples on either side of the grid.
inline double edge_leak_fraction(const SpectralField& field, double edge_fraction = 0.01) {
    const std::size_t n = field.size();
    const std::size_t edge = std::max<std::size_t>(1, static_cast<std::size_t>(edge_fraction * static_cast<double>(n)));
    double total = 0.0, outer = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = std::norm(field[i]);
        total += e;
        if (i < edge || i >= n - edge) outer += e;
    }
    return total > 0.0 ? outer / total : 0.0;
}

inline void check_support(const SpectralField& field, double threshold = kDefaultLeakFraction) {
    const double leak = edge_leak_fraction(field);
    if (leak > threshold) {
        throw SupportLeakError("field energy at the grid edges is " + std::to_string(leak) +
                               " of the total, above the allowed " + std::to_string(threshold));
    }
}

/// Transform-limited Gaussian: |E(omega)|^2 has intensity FWHM `fwhm` (rad/s)
/// centred on `omega0`, flat phase, and unit energy sum |E|^2 domega = 1.
/// Throws SupportLeakError when more than `leak_threshold` of the continuous
/// Gaussian's energy falls outside the grid.
inline SpectralField gaussian_pulse(const SpectralGrid& grid, double omega0, double fwhm,
                                    double leak_threshold = kDefaultLeakFraction) {
    if (!(fwhm > 0.0)) throw ValidationError("Gaussian FWHM must be positive");
    if (!grid.contains(omega0)) throw ValidationError("Gaussian centre lies outside the grid");
    const double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));  // intensity standard deviation

    const double lo = grid.omega_start() - 0.5 * grid.omega_step();
    const double hi = grid.omega_end() + 0.5 * grid.omega_step();
    const double outside = 0.5 * std::erfc((omega0 - lo) / (sigma * std::sqrt(2.0))) +
                           0.5 * std::erfc((hi - omega0) / (sigma * std::sqrt(2.0)));
    if (outside > leak_threshold) {
        throw SupportLeakError("Gaussian pulse leaks " + std::to_string(outside) +
                               " of its energy past the grid edges (allowed " + std::to_string(leak_threshold) + ")");
    }

    std::vector<Complex> amp(grid.size());
    double energy = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double d = grid.omega(i) - omega0;
        amp[i] = std::exp(-d * d / (4.0 * sigma * sigma));
        energy += std::norm(amp[i]);
    }
    const double scale = 1.0 / std::sqrt(energy * grid.omega_step());
    for (auto& a : amp) a *= scale;
    return SpectralField(grid, std::move(amp), omega0);
}

inline SpectralField apply_transfer(const SpectralField& field, const TransferFunction& r) {
    require_same_grid(field.grid(), r.grid, "apply_transfer");
    SpectralField out = field;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= r.values[i];
    return out;
}

/// Exact field-derivative mode: E1(omega) = -i omega T1 E(omega).
inline SpectralField derivative_field_oracle(const SpectralField& field, double t1) {
    SpectralField out = field;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= Complex(0.0, -field.grid().omega(i) * t1);
    return out;
}

/// Exact envelope-derivative mode: E2(omega) = -i (omega - omega0) T2 E(omega).
inline SpectralField derivative_envelope_oracle(const SpectralField& field, double t2) {
    SpectralField out = field;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] *= Complex(0.0, -(field.grid().omega(i) - field.carrier()) * t2);
    }
    return out;
}

/// Half-difference of two replicas delayed by +-tau/2:
/// E(t + tau/2)/2 - E(t - tau/2)/2  <->  -i sin(omega tau/2) E(omega).
inline SpectralField replica_difference(const SpectralField& field, double tau) {
    if (!(tau >= 0.0)) throw ValidationError("replica delay must be non-negative");
    SpectralField out = field;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] *= Complex(0.0, -std::sin(field.grid().omega(i) * tau / 2.0));
    }
    return out;
}

/// Samples E(t_j) of the inverse transform on the grid's centred time axis.
inline TimeTrace to_time(const SpectralField& field) {
    const auto& grid = field.grid();
    const std::size_t n = grid.size();
    std::vector<Complex> data(field.amplitude().begin(), field.amplitude().end());
    for (std::size_t k = 1; k < n; k += 2) data[k] = -data[k];
    fft_in_place(data, FftSign::negative);
    const double scale = grid.omega_step() / kTwoPi;
    for (std::size_t j = 0; j < n; ++j) {
        data[j] *= scale * std::polar(1.0, -grid.omega_start() * grid.time(j));
    }
    return TimeTrace{grid.time(0), grid.time_step(), std::move(data)};
}

/// Inverse of to_time; `grid` must be the trace's originating grid.
inline SpectralField to_frequency(const TimeTrace& trace, const SpectralGrid& grid, double carrier) {
    const std::size_t n = grid.size();
    if (trace.size() != n) {
        throw GridMismatchError("time trace has " + std::to_string(trace.size()) + " samples, grid has " +
                                std::to_string(n));
    }
    if (std::abs(trace.t_step - grid.time_step()) > 1e-12 * grid.time_step() ||
        std::abs(trace.t_start - grid.time(0)) > 1e-9 * grid.time_step()) {
        throw GridMismatchError("time trace axis is not the conjugate of the spectral grid");
    }
    std::vector<Complex> data(trace.amplitude);
    for (std::size_t j = 0; j < n; ++j) data[j] *= std::polar(1.0, grid.omega_start() * grid.time(j));
    fft_in_place(data, FftSign::positive);
    const double dt = grid.time_step();
    for (std::size_t k = 0; k < n; ++k) data[k] *= (k % 2 == 0) ? dt : -dt;
    return SpectralField(grid, std::move(data), carrier);
}

/// sum conj(a) b domega.
inline Complex inner_product(const SpectralField& a, const SpectralField& b) {
    require_same_grid(a.grid(), b.grid(), "inner_product");
    Complex s{};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s * a.grid().omega_step();
}

}  // namespace bsb
