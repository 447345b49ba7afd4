// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.
// INFO lines carry secondary readings that are reported but not judged.

#include "oracles.hpp"

#include <bsbshaper/bsbshaper.hpp>

#include <cstdio>
#include <functional>
#include <random>
#include <string>

using namespace bsb;

namespace {

int failures = 0;

void verdict(const char* id, bool ok, const std::string& detail) {
    std::printf("%s %-4s %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    if (!ok) ++failures;
}

void info(const char* id, const std::string& detail) { std::printf("INFO %-4s %s\n", id, detail.c_str()); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

void run(const char* id, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        verdict(id, false, std::string("threw: ") + e.what());
    }
}

const double kW0 = omega_from_wavelength_um(0.8);
const MaterialDatabase& db() { return MaterialDatabase::builtin(); }
const Material& quartz() { return db().get("quartz"); }
SpectralGrid grid() { return SpectralGrid::default_for_carrier(kW0); }
SpectralField gaussian() { return gaussian_pulse(grid(), kW0, omega_from_thz(100.0)); }

double relative_l2(const SpectralField& a, const SpectralField& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return std::sqrt(num / den);
}

RetrievedPhase differential(const SpectralField& a, const SpectralField& b, double tau, const FtsiWindow& w,
                            const std::vector<double>& extra = {}) {
    const auto ref = unwrap(retrieve_phase(synthesize_interferogram(a, a, tau, extra), w));
    const auto meas = unwrap(retrieve_phase(synthesize_interferogram(a, b, tau, extra), w));
    return subtract_reference(meas, ref);
}

}  // namespace

int main() {
    run("1", [] {
        const double dn = delta_n(quartz(), 0.8), dng = delta_group_index(quartz(), 0.8);
        const bool ok = std::abs(dn / 8.9e-3 - 1) <= 0.02 && std::abs(dng / 9.5e-3 - 1) <= 0.02;
        verdict("1", ok, fmt("quartz dn(800nm)=%.4e (8.9e-3 +-2%%), dn_g=%.4e (9.5e-3 +-2%%)", dn, dng));
    });

    run("2", [] {
        const double w1 = omega1(quartz(), kW0);
        const bool ok = std::abs(w1 / kW0 / 0.063 - 1) <= 0.10;
        verdict("2", ok, fmt("omega1/omega0=%.4f (0.063 +-10%%), omega1/2pi=%.2f THz (~24 THz)", w1 / kW0,
                             thz_from_omega(w1)));
    });

    run("3", [] {
        const double ld = thickness_for_delay(quartz(), kW0, 0.17 * kFemtosecond).segments[0].thickness / kMicrometre;
        const double lo = thickness_for_order(quartz(), kW0, 0.5).segments[0].thickness / kMicrometre;
        const bool ok = std::abs(ld / 5.4 - 1) <= 0.05 && std::abs(lo / 45.0 - 1) <= 0.05;
        verdict("3", ok, fmt("L(tau=0.17 fs)=%.3f um (5.4 +-5%%), L(n=1/2)=%.3f um (45 +-5%%)", ld, lo));
    });

    run("4", [] {
        const auto g = grid();
        const auto pair = transfer_exact(Compensator::single(quartz(), 5.4 * kMicrometre), g, false);
        const std::size_t i0 = g.nearest_index(kW0);
        const double s2 = std::pow(pair.sin_half[i0], 2);
        const double independent = std::pow(std::sin(oracle::quartz_delta_k(kW0) * 5.4e-6 / 2), 2);
        const bool ok = std::abs(s2 - 0.036) <= 0.004 && std::abs(s2 - independent) < 1e-12;
        verdict("4", ok, fmt("sin^2(dk L/2) at omega0 = %.3f%% (3.6 +-0.4 pp)", 100 * s2));
        info("4", fmt("shaped/unshaped tan^2 at omega0 = %.3f%%", 100 * s2 / (1 - s2)));
    });

    run("5", [] {
        const auto src = gaussian();
        const auto field = Compensator::single(quartz(), 5.4 * kMicrometre);
        const double of = assess(field, src, ResponseMode::field).overlap;
        verdict("5a", of >= 0.9999, fmt("field mode, quartz 5.4 um: overlap=%.6f (>= 0.9999)", of));

        const auto half = thickness_for_order(quartz(), kW0, 0.5).compensator();
        const double oe = assess(half, src, ResponseMode::envelope_half).overlap;
        verdict("5b", oe >= 0.9999, fmt("envelope half order, quartz %.2f um: overlap=%.6f (>= 0.9999)",
                                       half.segments()[0].thickness / kMicrometre, oe));

        // Ratio readings (shaped over unshaped, as in the measured amplitude ratio).
        const auto band = source_band(src);
        auto ratio_overlap = [&](const Compensator& c, ResponseMode m) {
            const auto r = effective_response(transfer_exact(c, src.grid(), false), m);
            return mode_overlap(objective_field(c, src, m), apply_transfer(src, r), band);
        };
        info("5a", fmt("ratio reading -i tan(Gamma/2): overlap=%.6f", ratio_overlap(field, ResponseMode::field)));
        info("5b", fmt("ratio reading i cot(Gamma/2): overlap=%.6f",
                       ratio_overlap(half, ResponseMode::envelope_half)));
    });

    run("6", [] {
        const RunConfig cfg;
        const auto r = run_figure_pipeline(cfg, Figure::fig3, db());
        const double mean = r.metric("phase_mean_rad"), rms = r.metric("phase_rms_from_minus_half_pi_rad");
        verdict("6a", rms <= 0.020,
                fmt("field FTSI phase over central 100 THz: mean=%.6f rad, rms from -pi/2=%.2e rad (<= 0.020)", mean,
                    rms));
        const double off = r.metric("fringe_offset_rad");
        verdict("6b", std::abs(off - kPi / 2) <= 0.020,
                fmt("fringe offset with vs without compensator=%.5f rad (quadrature pi/2 +-0.020)", off));
    });

    run("7", [] {
        const RunConfig cfg;
        const auto r = run_figure_pipeline(cfg, Figure::fig5, db());
        const double mag = r.metric("jump_magnitude_rad"), off = r.metric("jump_offset_thz");
        const bool ok = std::abs(std::abs(mag) - kPi) <= 0.05 && std::abs(off) <= 2.0;
        verdict("7", ok, fmt("envelope FTSI jump=%.5f rad (|.|=pi +-0.05) at omega0%+.3f THz (+-2 THz)", mag, off));
        info("7", fmt("overshoot near the zero=%.2e rad (reported only)", r.metric("jump_overshoot_rad")));
    });

    run("8a", [] {
        const auto f = gaussian();
        std::vector<double> taus{0.2e-15, 0.1e-15, 0.05e-15, 0.02e-15}, errs;
        for (double t : taus) errs.push_back(relative_l2(replica_difference(f, t), derivative_field_oracle(f, t / 2)));
        const double slope = oracle::loglog_slope(taus, errs);
        verdict("8a", std::abs(slope - 2.0) <= 0.1, fmt("replica -> derivative convergence slope=%.4f (2.0 +-0.1)", slope));
    });

    run("8b", [] {
        const auto g = grid();
        std::vector<double> ls{1.0, 2.0, 4.0, 8.0}, errs;
        for (double um : ls) {
            const auto comp = Compensator::single(quartz(), um * kMicrometre);
            const auto first = first_order_response(comp, g, ResponseMode::field, kW0, Linearization::thickness);
            const auto exact = effective_response(transfer_exact(comp, g, false), ResponseMode::field);
            double worst = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) {
                if (std::abs(g.omega(i) - kW0) > omega_from_thz(50.0)) continue;
                worst = std::max(worst, std::abs(first.values[i] - exact.values[i]) / std::abs(exact.values[i]));
            }
            errs.push_back(worst);
        }
        const double slope = oracle::loglog_slope(ls, errs);
        verdict("8b", std::abs(slope - 2.0) <= 0.1, fmt("first-order -> exact ratio convergence slope=%.4f (2.0 +-0.1)", slope));

        const auto comp = Compensator::single(quartz(), 5.4 * kMicrometre);
        const auto lin = first_order_response(comp, g, ResponseMode::field, kW0);
        const auto ratio = effective_response(transfer_exact(comp, g, false), ResponseMode::field);
        const auto shaped = shaped_response(transfer_exact(comp, g, false), ResponseMode::field, kW0);
        double dr = 0.0, ds = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (std::abs(g.omega(i) - kW0) > omega_from_thz(50.0)) continue;
            dr = std::max(dr, std::abs(lin.values[i] - ratio.values[i]) / std::abs(ratio.values[i]));
            ds = std::max(ds, std::abs(lin.values[i] - shaped.values[i]) / std::abs(shaped.values[i]));
        }
        info("8b", fmt("5.4 um linearized response within omega0 +-50 THz: vs shaped amplitude %.3f%%, vs ratio %.3f%%",
                       100 * ds, 100 * dr));
    });

    run("8c", [] {
        const auto a = gaussian();
        const auto& g = a.grid();
        const double tau = 1000.0 * kFemtosecond;
        std::vector<double> inj(g.size()), extra(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double x = (g.omega(i) - kW0) / omega_from_thz(100.0);
            inj[i] = 0.3 * std::sin(2.1 * x) + 0.2 * x * x - 0.1 * std::cos(3.3 * x + 0.4);
            const double d = g.omega(i) - kW0;
            extra[i] = 160e-30 * d * d / 2 + 40e-45 * d * d * d / 6 + 0.5 * std::sin(d / omega_from_thz(80.0));
        }
        auto b = a;
        for (std::size_t i = 0; i < g.size(); ++i) b[i] *= std::polar(1.0, inj[i]);

        const auto d = differential(a, b, tau, FtsiWindow::for_delay(tau));
        double sq = 0.0;
        std::size_t n = 0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!d.valid(i)) continue;
            sq += std::pow(d.phase[i] - inj[i], 2);
            ++n;
        }
        const double rms = std::sqrt(sq / static_cast<double>(n));
        verdict("8c", rms < 1e-3, fmt("FTSI round trip of injected smooth phase: rms=%.2e rad on %zu samples (< 1e-3)", rms, n));

        const FtsiWindow wide{tau, 0.7 * tau, 32, true};
        const auto plain = differential(a, b, tau, wide);
        const auto dispersed = differential(a, b, tau, wide, extra);
        double worst = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            if (plain.valid(i) && dispersed.valid(i)) worst = std::max(worst, std::abs(plain.phase[i] - dispersed.phase[i]));
        verdict("8d", worst <= 1e-10,
                fmt("reference subtraction of common dispersion (order-32 window, width 0.7 tau): max residual=%.2e rad (<= 1e-10)",
                    worst));
        const auto plain6 = differential(a, b, tau, FtsiWindow::for_delay(tau));
        const auto dispersed6 = differential(a, b, tau, FtsiWindow::for_delay(tau), extra);
        double worst6 = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            if (plain6.valid(i) && dispersed6.valid(i)) worst6 = std::max(worst6, std::abs(plain6.phase[i] - dispersed6.phase[i]));
        info("8d", fmt("same with the default order-6, tau/3 window: max residual=%.2e rad", worst6));
    });

    run("8e", [] {
        const auto g = SpectralGrid::from_thz(300.0, 450.0, 256, kW0);
        const Band band{g.omega_start(), g.omega_end()};
        std::mt19937_64 rng(20240101);
        std::normal_distribution<double> n(0.0, 1.0);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        double worst_inv = 0.0, worst_self = 0.0, max_o = 0.0;
        bool bounded = true;
        for (int k = 0; k < 1000; ++k) {
            auto a = SpectralField::zeros(g, kW0), b = a;
            for (std::size_t i = 0; i < g.size(); ++i) {
                a[i] = Complex(n(rng), n(rng));
                b[i] = Complex(n(rng), n(rng));
            }
            const Complex c = std::polar(std::exp(u(rng)), u(rng));
            auto cb = b, ca = a;
            for (std::size_t i = 0; i < g.size(); ++i) {
                cb[i] *= c;
                ca[i] *= c;
            }
            const double o = mode_overlap(a, b, band);
            bounded = bounded && o >= 0.0 && o <= 1.0;
            max_o = std::max(max_o, o);
            worst_inv = std::max(worst_inv, std::abs(mode_overlap(a, cb, band) - o));
            worst_self = std::max(worst_self, std::abs(mode_overlap(a, ca, band) - 1.0));
        }
        verdict("8e", bounded && worst_inv < 1e-12 && worst_self < 1e-12,
                fmt("1000 random pairs: invariance error=%.1e, proportional-pair error=%.1e, max overlap=%.3f (<= 1)",
                    worst_inv, worst_self, max_o));
    });

    run("8f", [] {
        double worst = 0.0;
        for (const auto& name : db().names()) {
            const auto& m = db().get(name);
            for (const auto* model : {&m.ordinary, &m.extraordinary}) {
                for (double l = 0.6; l <= 1.0 + 1e-12; l += 0.005) {
                    const double fd =
                        oracle::finite_difference_group_index([&](double x) { return refractive_index(*model, x); }, l);
                    const double ng = group_index(*model, l);
                    worst = std::max(worst, std::abs(ng - fd) / ng);
                }
            }
        }
        verdict("8f", worst <= 1e-6,
                fmt("analytic vs finite-difference group index, 600-1000 nm, %zu materials: max rel=%.1e (<= 1e-6)",
                    db().names().size(), worst));
    });

    run("9", [] {
        const double tau = 0.17 * kFemtosecond;
        const auto sol = achromat_design(quartz(), db().get("kdp"), kW0, 0.0, tau);
        const double resid = std::abs(sol.achieved_omega1) / kW0;
        const auto g = SpectralGrid::from_thz(200.0, 600.0, 4096, kW0);
        const auto src = gaussian_pulse(g, kW0, omega_from_thz(100.0), 1e-4);
        const double oa = assess(sol.compensator(), src, ResponseMode::field).overlap;
        const double os = assess(thickness_for_delay(quartz(), kW0, tau).compensator(), src, ResponseMode::field).overlap;
        verdict("9", resid <= 1e-9 && oa >= os,
                fmt("quartz %.3f um + KDP %.3f um: |omega1|/omega0=%.1e (<= 1e-9), overlap %.7f vs single quartz %.7f",
                    sol.segments[0].thickness / kMicrometre, sol.segments[1].thickness / kMicrometre, resid, oa, os));
    });

    std::printf("%s: %d criterion line(s) failed\n", failures ? "FAILED" : "OK", failures);
    return failures ? 1 : 0;
}
