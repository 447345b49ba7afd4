#pragma once

// Uniform angular-frequency sampling and the values that live on it:
// complex spectral fields, their time-domain view, and sampled transfer
// functions.
//
// Sign convention (global): E(t) = integral E(omega) exp(-i omega t) domega/2pi.

#include <bsbshaper/errors.hpp>
#include <bsbshaper/units.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bsb {

using Complex = std::complex<double>;

class SpectralGrid {
public:
    SpectralGrid(std::size_t n_samples, double omega_start, double omega_step)
        : n_(n_samples), start_(omega_start), step_(omega_step) {
        if (n_ < 2 || (n_ & (n_ - 1)) != 0) {
            throw ValidationError("spectral grid size must be a power of two >= 2, got " + std::to_string(n_));
        }
        if (!(start_ > 0.0) || !std::isfinite(start_)) throw ValidationError("spectral grid must start above 0 rad/s");
        if (!(step_ > 0.0) || !std::isfinite(step_)) throw ValidationError("spectral grid step must be positive");
    }

    /// `n` samples spanning roughly [f_lo, f_hi] THz. When `anchor` is given the
    /// start is shifted by less than one step so that `anchor` is a sample.
    static SpectralGrid from_thz(double f_lo_thz, double f_hi_thz, std::size_t n, double anchor = 0.0) {
        if (!(f_hi_thz > f_lo_thz)) throw ValidationError("grid upper frequency must exceed the lower one");
        const double step = omega_from_thz(f_hi_thz - f_lo_thz) / static_cast<double>(n - 1);
        double start = omega_from_thz(f_lo_thz);
        if (anchor > 0.0) {
            const double k = std::round((anchor - start) / step);
            start = anchor - k * step;
        }
        return SpectralGrid(n, start, step);
    }

    /// 4096 samples over 150-600 THz with the carrier on a sample.
    static SpectralGrid default_for_carrier(double omega0) { return from_thz(150.0, 600.0, 4096, omega0); }

    std::size_t size() const noexcept { return n_; }
    double omega_start() const noexcept { return start_; }
    double omega_step() const noexcept { return step_; }
    double omega_end() const noexcept { return start_ + step_ * static_cast<double>(n_ - 1); }
    double omega(std::size_t i) const noexcept { return start_ + step_ * static_cast<double>(i); }

    bool contains(double omega) const noexcept { return omega >= start_ && omega <= omega_end(); }

    std::size_t nearest_index(double omega) const {
        if (!contains(omega)) throw ValidationError("frequency " + std::to_string(omega) + " rad/s is outside the grid");
        return static_cast<std::size_t>(std::lround((omega - start_) / step_));
    }

    /// Sample spacing of the conjugate time axis.
    double time_step() const noexcept { return kTwoPi / (static_cast<double>(n_) * step_); }

    /// Time axis is centred: t_j = (j - n/2) dt.
    double time(std::size_t j) const noexcept {
        return (static_cast<double>(j) - static_cast<double>(n_ / 2)) * time_step();
    }

    std::vector<double> omegas() const {
        std::vector<double> out(n_);
        for (std::size_t i = 0; i < n_; ++i) out[i] = omega(i);
        return out;
    }

    friend bool operator==(const SpectralGrid&, const SpectralGrid&) = default;

private:
    std::size_t n_;
    double start_;
    double step_;
};

inline void require_same_grid(const SpectralGrid& a, const SpectralGrid& b, const char* what) {
    if (!(a == b)) throw GridMismatchError(std::string(what) + ": operands are sampled on different grids");
}

/// Complex spectral amplitude with its carrier reference omega0.
class SpectralField {
public:
    SpectralField(SpectralGrid grid, std::vector<Complex> amplitude, double carrier)
        : grid_(grid), amplitude_(std::move(amplitude)), carrier_(carrier) {
        if (amplitude_.size() != grid_.size()) {
            throw GridMismatchError("field has " + std::to_string(amplitude_.size()) + " samples, grid has " +
                                    std::to_string(grid_.size()));
        }
        if (!grid_.contains(carrier_)) throw ValidationError("carrier frequency lies outside the spectral grid");
    }

    static SpectralField zeros(SpectralGrid grid, double carrier) {
        return SpectralField(grid, std::vector<Complex>(grid.size()), carrier);
    }

    const SpectralGrid& grid() const noexcept { return grid_; }
    double carrier() const noexcept { return carrier_; }
    std::size_t size() const noexcept { return amplitude_.size(); }

    std::span<const Complex> amplitude() const noexcept { return amplitude_; }
    std::span<Complex> amplitude() noexcept { return amplitude_; }
    const Complex& operator[](std::size_t i) const { return amplitude_[i]; }
    Complex& operator[](std::size_t i) { return amplitude_[i]; }

    /// sum |E|^2 domega.
    double energy() const noexcept {
        double s = 0.0;
        for (const auto& a : amplitude_) s += std::norm(a);
        return s * grid_.omega_step();
    }

    double peak_intensity() const noexcept {
        double m = 0.0;
        for (const auto& a : amplitude_) m = std::max(m, std::norm(a));
        return m;
    }

private:
    SpectralGrid grid_;
    std::vector<Complex> amplitude_;
    double carrier_;
};

struct TimeTrace {
    double t_start = 0.0;
    double t_step = 0.0;
    std::vector<Complex> amplitude;

    std::size_t size() const noexcept { return amplitude.size(); }
    double time(std::size_t j) const noexcept { return t_start + t_step * static_cast<double>(j); }

    /// sum |E|^2 dt.
    double energy() const noexcept {
        double s = 0.0;
        for (const auto& a : amplitude) s += std::norm(a);
        return s * t_step;
    }
};

/// What a transfer function represents, which decides the invariants it obeys.
enum class TransferKind {
    objective,  // ideal target filter, unbounded
    physical,   // realized polarization amplitude, |R| <= 1
    relative,   // ratio of two realized amplitudes (shaped over signal)
};

struct TransferFunction {
    SpectralGrid grid;
    std::vector<Complex> values;
    std::string label;
    TransferKind kind = TransferKind::objective;
    std::vector<std::uint8_t> masked;  // empty or one flag per sample

    bool is_masked(std::size_t i) const { return !masked.empty() && masked[i] != 0; }

    std::size_t masked_count() const {
        std::size_t n = 0;
        for (auto m : masked) n += m != 0;
        return n;
    }
};

}  // namespace bsb
