#include <bsbshaper/bsbshaper.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace bsb;

// Flags that map one-to-one onto config keys. Every subcommand accepts all of
// them so that a config file and its overrides look the same everywhere.
struct ConfigFlag {
    const char* flag;
    const char* key;
    const char* help;
};

constexpr ConfigFlag kConfigFlags[] = {
    {"--material", "material", "crystal of the compensator"},
    {"--material-b", "material_b", "second crystal for the achromat"},
    {"--extra-material", "extra_material", "FTSI delay crystal, or none"},
    {"--materials-file", "materials_file", "material database file (default: builtin)"},
    {"--output-dir", "output_dir", "directory for figure outputs"},
    {"--wavelength-nm", "carrier_wavelength_nm", "carrier wavelength"},
    {"--fwhm-thz", "pulse_fwhm_thz", "Gaussian intensity FWHM"},
    {"--grid-lo-thz", "grid_lo_thz", "grid lower frequency"},
    {"--grid-hi-thz", "grid_hi_thz", "grid upper frequency"},
    {"--grid-samples", "grid_samples", "grid size (power of two)"},
    {"--leak-threshold", "leak_threshold", "allowed spectral energy outside the grid"},
    {"--thickness-um", "thickness_um", "compensator thickness, or auto"},
    {"--target-delay-fs", "target_delay_fs", "design delay"},
    {"--order", "order", "design interference order (multiple of 1/2)"},
    {"--target-omega1-ratio", "target_omega1_ratio", "achromat target omega1/omega0"},
    {"--mode", "mode", "field | envelope-integer | envelope-half"},
    {"--tau-fs", "tau_ftsi_fs", "FTSI delay"},
    {"--window-order", "window_order", "FTSI super-Gaussian order"},
    {"--window-width-fs", "window_width_fs", "FTSI window width"},
    {"--band-threshold", "band_threshold", "overlap band threshold relative to peak intensity"},
    {"--seed", "seed", "seed for randomized stimuli"},
};

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> sets;
    std::map<std::string, std::string> flags;
    std::string out;
};

void add_common(CLI::App* app, CommonOptions& opts, bool with_out = true) {
    app->add_option("--config", opts.config_path, "config file (key = value)");
    app->add_option("--set", opts.sets, "override any config key: key=value");
    for (const auto& f : kConfigFlags) {
        app->add_option_function<std::string>(
            f.flag, [&opts, key = std::string(f.key)](const std::string& v) { opts.flags[key] = v; }, f.help);
    }
    if (with_out) app->add_option("-o,--out", opts.out, "output file (default: stdout)");
}

RunConfig load_config(const CommonOptions& opts) {
    RawConfig raw;
    if (!opts.config_path.empty()) raw = RawConfig::from_text(read_text_file(opts.config_path), opts.config_path);
    for (const auto& s : opts.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + s + "'");
        raw.set(std::string(trim(s.substr(0, eq))), std::string(trim(s.substr(eq + 1))));
    }
    for (const auto& [k, v] : opts.flags) raw.set(k, v);
    return validate_config(raw);
}

void emit(const CommonOptions& opts, const std::string& text) {
    if (opts.out.empty() || opts.out == "-") {
        std::cout << text;
    } else {
        write_text_file(opts.out, text);
    }
}

std::string report(const std::vector<std::pair<std::string, std::string>>& lines) {
    std::string out;
    for (const auto& [k, v] : lines) out += k + " = " + v + "\n";
    return out;
}

std::vector<std::string> header(const RunConfig& cfg, const std::string& command) {
    std::vector<std::string> h{"command=" + command};
    const auto d = cfg.describe();
    h.insert(h.end(), d.begin(), d.end());
    return h;
}

std::string material_info(const RunConfig& cfg, const MaterialDatabase& db, const std::string& name,
                          std::optional<double> wavelength_nm) {
    const Material& m = db.get(name);
    const double lambda_um = wavelength_nm ? *wavelength_nm * 1e-3 : wavelength_um_from_omega(cfg.omega0);
    const double w = omega_from_wavelength_um(lambda_um);
    const double w1 = omega1(m, w);
    return report({
        {"material", m.name},
        {"citation", m.citation},
        {"database_version", db.version()},
        {"valid_range_um", format_double(m.lambda_min_um()) + "," + format_double(m.lambda_max_um())},
        {"wavelength_nm", format_double(lambda_um * 1e3)},
        {"n_o", format_double(refractive_index(m.ordinary, lambda_um))},
        {"n_e", format_double(refractive_index(m.extraordinary, lambda_um))},
        {"n_g_o", format_double(group_index(m.ordinary, lambda_um))},
        {"n_g_e", format_double(group_index(m.extraordinary, lambda_um))},
        {"delta_n", format_double(delta_n(m, lambda_um))},
        {"delta_n_g", format_double(delta_group_index(m, lambda_um))},
        {"delta_k_per_m", format_double(delta_k(m, w))},
        {"delta_k_prime_s_per_m", format_double(delta_k_prime(m, w))},
        {"omega1_over_omega0", format_double(w1 / w)},
        {"omega1_thz", format_double(thz_from_omega(w1))},
    });
}

std::string design_report(const RunConfig& cfg, const DesignSolution& sol, ResponseMode mode, bool achromat) {
    std::vector<std::pair<std::string, std::string>> lines;
    for (std::size_t i = 0; i < sol.segments.size(); ++i) {
        const auto& s = sol.segments[i];
        lines.emplace_back("segment" + std::to_string(i) + ".material", s.material.name);
        lines.emplace_back("segment" + std::to_string(i) + ".thickness_um", format_double(s.thickness / kMicrometre));
    }
    lines.emplace_back("delay_fs", format_double(sol.achieved_delay / kFemtosecond));
    lines.emplace_back("order", format_double(sol.achieved_order));
    lines.emplace_back("omega1_over_omega0", format_double(sol.achieved_omega1 / sol.omega0));
    if (achromat) lines.emplace_back("condition_number", format_double(sol.condition_number));
    lines.emplace_back("residual.delay_relative", format_double(sol.residuals.delay_relative));
    lines.emplace_back("residual.order_absolute", format_double(sol.residuals.order_absolute));
    lines.emplace_back("residual.omega1_relative", format_double(sol.residuals.omega1_relative));
    lines.emplace_back("mode", std::string(to_string(mode)));
    if (sol.achieved_delay != 0.0) {
        const auto comp = sol.compensator();
        const auto source = gaussian_pulse(cfg.grid(), cfg.omega0, cfg.pulse_fwhm, cfg.leak_threshold);
        const auto r = assess(comp, source, mode, cfg.band_threshold);
        lines.emplace_back("overlap", format_double(r.overlap));
        lines.emplace_back("efficiency", format_double(r.efficiency));
        lines.emplace_back("overlap_band_thz",
                           format_double(thz_from_omega(r.band.lo)) + "," + format_double(thz_from_omega(r.band.hi)));
        lines.emplace_back("overlap_weighting", r.weighting);
    }
    return report(lines);
}

ResponseMode mode_for_order(double order) {
    const bool half = std::abs(order - std::floor(order) - 0.5) < 1e-9;
    return half ? ResponseMode::envelope_half : ResponseMode::envelope_integer;
}

SpectralField read_field(const std::string& path) { return field_from_table(parse_csv(read_text_file(path), path)); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Birefringent time-differentiator simulator"};
    app.require_subcommand(1);
    CommonOptions opts;

    auto* info = app.add_subcommand("material-info", "dispersion data of a material at the carrier");
    std::string info_name;
    std::optional<double> info_wavelength;
    info->add_option("name", info_name, "material name")->required();
    info->add_option("--at-nm", info_wavelength, "evaluation wavelength (default: carrier)");
    add_common(info, opts);

    auto* design = app.add_subcommand("design", "compensator design solvers");
    design->require_subcommand(1);
    auto* d_delay = design->add_subcommand("delay", "thickness for target_delay_fs");
    auto* d_order = design->add_subcommand("order", "thickness for interference order");
    auto* d_achromat = design->add_subcommand("achromat", "two-material design for target omega1 and delay");
    for (auto* s : {d_delay, d_order, d_achromat}) add_common(s, opts);

    auto* transfer = app.add_subcommand("transfer", "exact effective response of the compensator");
    add_common(transfer, opts);

    auto* pulse = app.add_subcommand("pulse", "spectral field synthesis and derivative oracles");
    pulse->require_subcommand(1);
    auto* p_synth = pulse->add_subcommand("synth", "Gaussian source field");
    auto* p_derive = pulse->add_subcommand("derive", "ideal derivative of a field");
    auto* p_replica = pulse->add_subcommand("replica", "difference of two delayed replicas");
    std::string p_in, p_kind = "field";
    double p_t_fs = 0.0;
    for (auto* s : {p_derive, p_replica}) {
        s->add_option("--in", p_in, "input field CSV")->required();
        add_common(s, opts);
    }
    add_common(p_synth, opts);
    p_derive->add_option("--kind", p_kind, "field | envelope")->check(CLI::IsMember({"field", "envelope"}));
    p_derive->add_option("--t-fs", p_t_fs, "time scale T")->required();
    p_replica->add_option("--delay-fs", p_t_fs, "replica separation")->required();

    auto* ftsi = app.add_subcommand("ftsi", "spectral interferometry");
    ftsi->require_subcommand(1);
    auto* f_synth = ftsi->add_subcommand("synth", "interferogram of two fields");
    auto* f_retrieve = ftsi->add_subcommand("retrieve", "phase from an interferogram");
    auto* f_subtract = ftsi->add_subcommand("subtract", "difference of two retrieved phases");
    auto* f_jump = ftsi->add_subcommand("jump", "phase jump near the carrier");
    std::string f_a, f_b, f_in, f_with, f_without;
    bool f_wrapped = false;
    double f_half_width_thz = thz_from_omega(kDefaultJumpHalfWidth);
    f_synth->add_option("--a", f_a, "field CSV on the undelayed arm")->required();
    f_synth->add_option("--b", f_b, "field CSV on the delayed arm")->required();
    f_retrieve->add_option("--in", f_in, "interferogram CSV")->required();
    f_retrieve->add_flag("--wrapped", f_wrapped, "skip unwrapping");
    f_subtract->add_option("--with", f_with, "phase CSV with the compensator")->required();
    f_subtract->add_option("--without", f_without, "reference phase CSV")->required();
    f_jump->add_option("--in", f_in, "phase CSV")->required();
    f_jump->add_option("--half-width-thz", f_half_width_thz, "level window on each side of the carrier");
    for (auto* s : {f_synth, f_retrieve, f_subtract, f_jump}) add_common(s, opts);

    auto* overlap = app.add_subcommand("overlap", "mode overlap of a shaped field with the objective");
    std::string o_shaped, o_source, o_objective = "field";
    overlap->add_option("--shaped", o_shaped, "shaped field CSV")->required();
    overlap->add_option("--source", o_source, "source field CSV")->required();
    overlap->add_option("--objective", o_objective, "field | envelope")->check(CLI::IsMember({"field", "envelope"}));
    add_common(overlap, opts);

    auto* figure = app.add_subcommand("figure", "figure data files");
    std::string fig_name;
    figure->add_option("name", fig_name, "fig2 | fig3 | fig4 | fig5")->required();
    add_common(figure, opts, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        const RunConfig cfg = load_config(opts);
        std::optional<MaterialDatabase> storage;
        const MaterialDatabase& db = database_for(cfg, storage);

        if (*info) {
            emit(opts, material_info(cfg, db, info_name, info_wavelength));
        } else if (*d_delay) {
            const auto sol = thickness_for_delay(db.get(cfg.material), cfg.omega0, cfg.target_delay);
            emit(opts, design_report(cfg, sol, ResponseMode::field, false));
        } else if (*d_order) {
            const auto sol = thickness_for_order(db.get(cfg.material), cfg.omega0, cfg.order);
            emit(opts, design_report(cfg, sol, mode_for_order(cfg.order), false));
        } else if (*d_achromat) {
            const auto sol = achromat_design(db.get(cfg.material), db.get(cfg.material_b), cfg.omega0,
                                             cfg.target_omega1_ratio * cfg.omega0, cfg.target_delay);
            emit(opts, design_report(cfg, sol, ResponseMode::field, true));
        } else if (*transfer) {
            const auto comp = figure_compensator(cfg, db, cfg.mode);
            const auto pair = transfer_exact(comp, cfg.grid(), false);
            emit(opts, to_csv(transfer_table(effective_response(pair, cfg.mode), pair, header(cfg, "transfer"))));
        } else if (*p_synth) {
            const auto f = gaussian_pulse(cfg.grid(), cfg.omega0, cfg.pulse_fwhm, cfg.leak_threshold);
            emit(opts, to_csv(field_table(f, header(cfg, "pulse synth"))));
        } else if (*p_derive) {
            const auto f = read_field(p_in);
            const double t = p_t_fs * kFemtosecond;
            const auto d = p_kind == "field" ? derivative_field_oracle(f, t) : derivative_envelope_oracle(f, t);
            emit(opts, to_csv(field_table(d, header(cfg, "pulse derive " + p_kind))));
        } else if (*p_replica) {
            const auto d = replica_difference(read_field(p_in), p_t_fs * kFemtosecond);
            emit(opts, to_csv(field_table(d, header(cfg, "pulse replica"))));
        } else if (*f_synth) {
            const auto a = read_field(f_a);
            const auto b = read_field(f_b);
            const auto extra = delay_crystal_phase(cfg, db, a.grid());
            emit(opts, to_csv(interferogram_table(synthesize_interferogram(a, b, cfg.tau_ftsi, extra),
                                                  header(cfg, "ftsi synth"))));
        } else if (*f_retrieve) {
            const auto s = interferogram_from_table(parse_csv(read_text_file(f_in), f_in));
            FtsiWindow window = cfg.window();
            if (!opts.flags.count("tau_ftsi_fs") && s.delay_hint > 0.0) {
                window = FtsiWindow{s.delay_hint, cfg.window_width.value_or(s.delay_hint / 3.0), cfg.window_order, true};
            }
            auto p = retrieve_phase(s, window);
            if (!f_wrapped) p = unwrap(std::move(p));
            emit(opts, to_csv(phase_table(p, header(cfg, "ftsi retrieve"))));
        } else if (*f_subtract) {
            const auto w = phase_from_table(parse_csv(read_text_file(f_with), f_with));
            const auto wo = phase_from_table(parse_csv(read_text_file(f_without), f_without));
            emit(opts, to_csv(phase_table(subtract_reference(w, wo), header(cfg, "ftsi subtract"))));
        } else if (*f_jump) {
            const auto p = phase_from_table(parse_csv(read_text_file(f_in), f_in));
            const auto j = detect_phase_jump(p, cfg.omega0, omega_from_thz(f_half_width_thz));
            emit(opts, report({{"location_thz", format_double(thz_from_omega(j.location))},
                               {"offset_from_carrier_thz", format_double(thz_from_omega(j.location - cfg.omega0))},
                               {"magnitude_rad", format_double(j.magnitude)},
                               {"sign", format_double(j.sign)}}));
        } else if (*overlap) {
            const auto shaped = read_field(o_shaped);
            const auto source = read_field(o_source);
            const auto mode = o_objective == "field" ? ResponseMode::field : ResponseMode::envelope_half;
            const auto objective = apply_transfer(source, objective_for_mode(source.grid(), mode, kFemtosecond, source.carrier()));
            const Band band = source_band(source, cfg.band_threshold);
            emit(opts, report({{"overlap", format_double(mode_overlap(shaped, objective, band))},
                               {"band_thz", format_double(thz_from_omega(band.lo)) + "," +
                                                format_double(thz_from_omega(band.hi))},
                               {"objective", o_objective}}));
        } else if (*figure) {
            const auto result = run_figure_pipeline(cfg, parse_figure(fig_name), db);
            std::filesystem::create_directories(cfg.output_dir);
            for (const auto& f : result.files) {
                const auto path = (std::filesystem::path(cfg.output_dir) / f.name).string();
                write_text_file(path, f.content);
                std::cout << path << "\n";
            }
        }
    } catch (const DegeneracyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
