#pragma once

// Figure-data pipelines: each run turns a validated RunConfig into a set of
// plot-ready CSV files plus a key=value summary. Outputs are deterministic
// functions of the config.
//
//   fig2  field differentiation: spectra of both polarizations, amplitude ratio
//   fig3  field differentiation: interferograms and FTSI differential phase
//   fig4  envelope differentiation (half order): spectra, amplitude ratio
//   fig5  envelope differentiation: FTSI phase and the jump at the carrier

#include <bsbshaper/config.hpp>
#include <bsbshaper/csv.hpp>
#include <bsbshaper/dispersion.hpp>
#include <bsbshaper/ftsi.hpp>
#include <bsbshaper/metrology.hpp>
#include <bsbshaper/pulsefield.hpp>
#include <bsbshaper/shaper.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bsb {

enum class Figure { fig2, fig3, fig4, fig5 };

inline Figure parse_figure(std::string_view s) {
    if (s == "fig2") return Figure::fig2;
    if (s == "fig3") return Figure::fig3;
    if (s == "fig4") return Figure::fig4;
    if (s == "fig5") return Figure::fig5;
    throw ValidationError("unknown figure '" + std::string(s) + "' (expected fig2, fig3, fig4, fig5)");
}

inline std::string_view to_string(Figure f) {
    switch (f) {
        case Figure::fig2: return "fig2";
        case Figure::fig3: return "fig3";
        case Figure::fig4: return "fig4";
        case Figure::fig5: return "fig5";
    }
    return "?";
}

struct OutputFile {
    std::string name;
    std::string content;
};

struct FigureResult {
    std::vector<OutputFile> files;
    std::vector<std::pair<std::string, double>> metrics;

    double metric(std::string_view key) const {
        for (const auto& [k, v] : metrics)
            if (k == key) return v;
        throw ValidationError("no metric '" + std::string(key) + "'");
    }
};

inline constexpr double kFieldFigureThickness = 5.4 * kMicrometre;
inline constexpr double kCentralHalfBand = kTwoPi * 50.0 * kTerahertz;

inline ResponseMode figure_mode(const RunConfig& cfg, Figure fig) {
    if (fig == Figure::fig2 || fig == Figure::fig3) return ResponseMode::field;
    return cfg.mode == ResponseMode::envelope_integer ? ResponseMode::envelope_integer : ResponseMode::envelope_half;
}

/// Explicit thickness wins; otherwise 5.4 um for the field mode and the
/// designed thickness for the configured order in the envelope modes.
inline Compensator figure_compensator(const RunConfig& cfg, const MaterialDatabase& db, ResponseMode mode) {
    const Material& m = db.get(cfg.material);
    if (cfg.thickness) return Compensator::single(m, *cfg.thickness);
    if (mode == ResponseMode::field) return Compensator::single(m, kFieldFigureThickness);
    double order = cfg.order;
    const bool half_integer = std::abs(order - std::floor(order) - 0.5) < 1e-9;
    if (mode == ResponseMode::envelope_half && !half_integer) order = 0.5;
    if (mode == ResponseMode::envelope_integer && (half_integer || order == 0.0)) order = 1.0;
    return thickness_for_order(m, cfg.omega0, order).compensator();
}

/// Phase of the FTSI delay crystal beyond the pure delay tau:
/// dk(omega) L - omega tau with L chosen so dk'(omega0) L = tau.
inline std::vector<double> delay_crystal_phase(const RunConfig& cfg, const MaterialDatabase& db,
                                               const SpectralGrid& grid) {
    std::vector<double> extra(grid.size(), 0.0);
    if (cfg.extra_material == "none") return extra;
    const Material& m = db.get(cfg.extra_material);
    const Compensator plate = Compensator::single(m, cfg.tau_ftsi / delta_k_prime(m, cfg.omega0));
    plate.check_grid(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) extra[i] = plate.retardance(grid.omega(i)) - grid.omega(i) * cfg.tau_ftsi;
    return extra;
}

struct FtsiRun {
    Interferogram without_bsb;
    Interferogram with_bsb;
    RetrievedPhase reference;
    RetrievedPhase measured;
    RetrievedPhase difference;
};

/// Simulated measurement protocol: interferogram between the signal and
/// shaped polarizations, a reference interferogram between two identical
/// replicas (no compensator), FTSI retrieval of both and the difference.
inline FtsiRun run_ftsi(const RunConfig& cfg, const MaterialDatabase& db, const Compensator& comp, ResponseMode mode,
                        const SpectralField& source) {
    const auto extra = delay_crystal_phase(cfg, db, source.grid());
    const auto window = cfg.window();
    auto without_bsb = synthesize_interferogram(source, source, cfg.tau_ftsi, extra);
    auto with_bsb = synthesize_interferogram(signal_field(comp, source, mode), shaped_field(comp, source, mode),
                                             cfg.tau_ftsi, extra);
    auto reference = unwrap(retrieve_phase(without_bsb, window));
    auto measured = unwrap(retrieve_phase(with_bsb, window));
    auto difference = subtract_reference(measured, reference);
    FtsiRun run{std::move(without_bsb), std::move(with_bsb), std::move(reference), std::move(measured),
                std::move(difference)};
    return run;
}

struct PhaseStats {
    double mean = 0.0;
    double rms_deviation = 0.0;  // from `target`
    std::size_t samples = 0;
};

inline PhaseStats phase_stats(const RetrievedPhase& p, const Band& band, double target) {
    PhaseStats s;
    double sum = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < p.phase.size(); ++i) {
        if (!p.valid(i) || !band.contains(p.grid.omega(i))) continue;
        sum += p.phase[i];
        sq += (p.phase[i] - target) * (p.phase[i] - target);
        ++s.samples;
    }
    if (s.samples == 0) throw InsufficientDataError("no valid phase samples in the requested band");
    s.mean = sum / static_cast<double>(s.samples);
    s.rms_deviation = std::sqrt(sq / static_cast<double>(s.samples));
    return s;
}

/// Fringe phase offset between two interferograms, from the correlation of
/// their normalized AC parts over `band`. Quadrature gives pi/2.
inline double fringe_offset(const Interferogram& a, const SpectralField& a1, const SpectralField& a2,
                            const Interferogram& b, const SpectralField& b1, const SpectralField& b2, const Band& band) {
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < a.intensity.size(); ++i) {
        if (!band.contains(a.grid.omega(i))) continue;
        const double na = std::abs(a1[i]) * std::abs(a2[i]);
        const double nb = std::abs(b1[i]) * std::abs(b2[i]);
        if (na <= 0.0 || nb <= 0.0) continue;
        const double fa = (a.intensity[i] - 0.5 * (std::norm(a1[i]) + std::norm(a2[i]))) / na;
        const double fb = (b.intensity[i] - 0.5 * (std::norm(b1[i]) + std::norm(b2[i]))) / nb;
        ab += fa * fb;
        aa += fa * fa;
        bb += fb * fb;
    }
    if (!(aa > 0.0) || !(bb > 0.0)) throw InsufficientDataError("no fringes in the comparison band");
    return std::acos(std::clamp(ab / std::sqrt(aa * bb), -1.0, 1.0));
}

namespace detail {

inline std::string summary_text(const std::vector<std::string>& header,
                                const std::vector<std::pair<std::string, double>>& metrics) {
    std::string out;
    for (const auto& h : header) out += "# " + h + "\n";
    for (const auto& [k, v] : metrics) out += k + " = " + format_double(v) + "\n";
    return out;
}

inline std::vector<std::string> provenance(const RunConfig& cfg, Figure fig, ResponseMode mode) {
    std::vector<std::string> out{"figure=" + std::string(to_string(fig)), "mode=" + std::string(to_string(mode))};
    const auto d = cfg.describe();
    out.insert(out.end(), d.begin(), d.end());
    return out;
}

}  // namespace detail

inline FigureResult run_figure_pipeline(const RunConfig& cfg, Figure fig, const MaterialDatabase& db) {
    const ResponseMode mode = figure_mode(cfg, fig);
    const Compensator comp = figure_compensator(cfg, db, mode);
    const SpectralGrid grid = cfg.grid();
    const SpectralField source = gaussian_pulse(grid, cfg.omega0, cfg.pulse_fwhm, cfg.leak_threshold);
    const auto header = detail::provenance(cfg, fig, mode);
    const std::string prefix(to_string(fig));

    FigureResult result;
    const double tau = comp.delay(cfg.omega0);
    auto& m = result.metrics;
    m.emplace_back("thickness_um", comp.segments().front().thickness / kMicrometre);
    m.emplace_back("delay_fs", tau / kFemtosecond);
    m.emplace_back("order", comp.order(cfg.omega0));
    m.emplace_back("omega1_over_omega0", comp.omega1(cfg.omega0) / cfg.omega0);
    m.emplace_back("omega1_thz", thz_from_omega(comp.omega1(cfg.omega0)));

    const auto pair = transfer_exact(comp, grid, false);
    const std::size_t i0 = grid.nearest_index(cfg.omega0);
    const auto signal = signal_field(comp, source, mode);
    const auto shaped = shaped_field(comp, source, mode);
    const auto report = assess(comp, source, mode, cfg.band_threshold);
    m.emplace_back("overlap", report.overlap);
    m.emplace_back("efficiency", report.efficiency);

    if (fig == Figure::fig2 || fig == Figure::fig4) {
        const double shaped_frac = mode == ResponseMode::envelope_half ? std::pow(pair.cos_half[i0], 2)
                                                                       : std::pow(pair.sin_half[i0], 2);
        m.emplace_back("shaped_fraction_at_carrier", shaped_frac);
        m.emplace_back("shaped_to_unshaped_at_carrier", shaped_frac / (1.0 - shaped_frac));
        m.emplace_back("band_power_ratio", shaped.energy() / signal.energy());

        CsvTable spectra{header, {"omega_rad_per_s", "intensity_unshaped", "intensity_shaped"}, {}};
        for (std::size_t i = 0; i < grid.size(); ++i) {
            spectra.rows.push_back({grid.omega(i), std::norm(signal[i]), std::norm(shaped[i])});
        }
        const auto eff = effective_response(pair, mode);
        const auto objective = objective_for_mode(grid, mode, std::abs(tau) / 2.0, cfg.omega0);
        const auto first = first_order_response(comp, grid, mode, cfg.omega0);
        CsvTable ratio{header, {"omega_rad_per_s", "ratio_exact", "ratio_objective", "ratio_first_order", "masked"}, {}};
        for (std::size_t i = 0; i < grid.size(); ++i) {
            ratio.rows.push_back({grid.omega(i), std::abs(eff.values[i]), std::abs(objective.values[i]),
                                  std::abs(first.values[i]), eff.is_masked(i) ? 1.0 : 0.0});
        }
        result.files.push_back({prefix + "_spectra.csv", to_csv(spectra)});
        result.files.push_back({prefix + "_ratio.csv", to_csv(ratio)});
    } else {
        const auto run = run_ftsi(cfg, db, comp, mode, source);
        CsvTable fringes{header, {"omega_rad_per_s", "intensity_without_bsb", "intensity_with_bsb"}, {}};
        for (std::size_t i = 0; i < grid.size(); ++i) {
            fringes.rows.push_back({grid.omega(i), run.without_bsb.intensity[i], run.with_bsb.intensity[i]});
        }
        result.files.push_back({prefix + "_interferograms.csv", to_csv(fringes)});
        result.files.push_back({prefix + "_phase_reference.csv", to_csv(phase_table(run.reference, header))});
        result.files.push_back({prefix + "_phase_measured.csv", to_csv(phase_table(run.measured, header))});
        result.files.push_back({prefix + "_phase.csv", to_csv(phase_table(run.difference, header))});

        const Band central{cfg.omega0 - kCentralHalfBand, cfg.omega0 + kCentralHalfBand};
        if (fig == Figure::fig3) {
            const auto stats = phase_stats(run.difference, central, -kPi / 2.0);
            m.emplace_back("phase_mean_rad", stats.mean);
            m.emplace_back("phase_rms_from_minus_half_pi_rad", stats.rms_deviation);
            m.emplace_back("phase_samples", static_cast<double>(stats.samples));
            m.emplace_back("fringe_offset_rad",
                           fringe_offset(run.without_bsb, source, source, run.with_bsb, signal, shaped, central));
        } else {
            const auto jump = detect_phase_jump(run.difference, cfg.omega0);
            m.emplace_back("jump_location_thz", thz_from_omega(jump.location));
            m.emplace_back("jump_offset_thz", thz_from_omega(jump.location - cfg.omega0));
            m.emplace_back("jump_magnitude_rad", jump.magnitude);
            m.emplace_back("jump_sign", jump.sign);
            // Largest excursion beyond the two plateau levels near the jump (reported only).
            const auto stats_lo = phase_stats(run.difference, Band{cfg.omega0 - kDefaultJumpHalfWidth, cfg.omega0}, 0.0);
            const auto stats_hi = phase_stats(run.difference, Band{cfg.omega0, cfg.omega0 + kDefaultJumpHalfWidth}, 0.0);
            const double lo = std::min(stats_lo.mean, stats_hi.mean), hi = std::max(stats_lo.mean, stats_hi.mean);
            double overshoot = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double w = grid.omega(i);
                if (!run.difference.valid(i) || std::abs(w - cfg.omega0) > kDefaultJumpHalfWidth) continue;
                const double ph = run.difference.phase[i];
                overshoot = std::max({overshoot, ph - hi, lo - ph});
            }
            m.emplace_back("jump_overshoot_rad", overshoot);
            m.emplace_back("masked_samples_near_carrier", [&] {
                double n = 0;
                for (std::size_t i = 0; i < grid.size(); ++i)
                    if (!run.difference.valid(i) && std::abs(grid.omega(i) - cfg.omega0) < kDefaultJumpHalfWidth) ++n;
                return n;
            }());
        }
    }

    result.files.push_back({prefix + "_summary.txt", detail::summary_text(header, m)});
    return result;
}

}  // namespace bsb
