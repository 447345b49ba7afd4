#pragma once

// Run configuration shared by the CLI and the figure pipelines. A config
// file is `key = value` text; command-line flags override file values.
// validate_config fills defaults, converts to SI and reports every problem
// at once.

#include <bsbshaper/errors.hpp>
#include <bsbshaper/ftsi.hpp>
#include <bsbshaper/material_db.hpp>
#include <bsbshaper/shaper.hpp>
#include <bsbshaper/spectral.hpp>
#include <bsbshaper/text_format.hpp>
#include <bsbshaper/units.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bsb {

/// Unvalidated key/value pairs in the order they were given.
class RawConfig {
public:
    static RawConfig from_text(std::string_view text, std::string_view source = "<config>") {
        const auto doc = KeyValueDocument::parse(text, source);
        RawConfig raw;
        for (const auto& section : doc.sections()) {
            for (const auto& e : section.entries) {
                raw.set(section.name.empty() ? e.key : section.name + "." + e.key, e.value);
            }
        }
        return raw;
    }

    void set(std::string key, std::string value) {
        for (auto& [k, v] : entries_) {
            if (k == key) {
                v = std::move(value);
                return;
            }
        }
        entries_.emplace_back(std::move(key), std::move(value));
    }

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

struct RunConfig {
    std::string material = "quartz";
    std::string material_b = "kdp";
    std::string extra_material = "yvo4";  // FTSI delay crystal; "none" for a pure delay
    double omega0 = omega_from_wavelength_um(0.8);
    double pulse_fwhm = omega_from_thz(100.0);  // intensity FWHM, rad/s
    double grid_lo_thz = 150.0;
    double grid_hi_thz = 600.0;
    std::size_t grid_samples = 4096;
    double leak_threshold = 1e-6;
    std::optional<double> thickness;  // m
    double target_delay = 0.17 * kFemtosecond;
    double order = 0.5;
    double target_omega1_ratio = 0.0;
    ResponseMode mode = ResponseMode::field;
    double tau_ftsi = 1000.0 * kFemtosecond;
    int window_order = 6;
    std::optional<double> window_width;  // s; tau/3 when unset
    double band_threshold = 1e-4;
    std::string output_dir = ".";
    std::uint64_t seed = 1;
    std::string materials_file;  // empty: builtin database

    SpectralGrid grid() const { return SpectralGrid::from_thz(grid_lo_thz, grid_hi_thz, grid_samples, omega0); }

    FtsiWindow window() const {
        return FtsiWindow{tau_ftsi, window_width.value_or(tau_ftsi / 3.0), window_order, true};
    }

    /// Normalized config as `config.key=value` provenance lines, fixed order.
    std::vector<std::string> describe() const {
        auto line = [](const std::string& k, const std::string& v) { return "config." + k + "=" + v; };
        std::vector<std::string> out{
            line("material", material),
            line("material_b", material_b),
            line("extra_material", extra_material),
            line("carrier_wavelength_nm", format_display(wavelength_um_from_omega(omega0) * 1e3)),
            line("omega0_rad_per_s", format_display(omega0)),
            line("pulse_fwhm_thz", format_display(thz_from_omega(pulse_fwhm))),
            line("grid_lo_thz", format_display(grid_lo_thz)),
            line("grid_hi_thz", format_display(grid_hi_thz)),
            line("grid_samples", std::to_string(grid_samples)),
            line("leak_threshold", format_display(leak_threshold)),
            line("thickness_um", thickness ? format_display(*thickness / kMicrometre) : "auto"),
            line("target_delay_fs", format_display(target_delay / kFemtosecond)),
            line("order", format_display(order)),
            line("target_omega1_ratio", format_display(target_omega1_ratio)),
            line("mode", std::string(to_string(mode))),
            line("tau_ftsi_fs", format_display(tau_ftsi / kFemtosecond)),
            line("window_order", std::to_string(window_order)),
            line("window_width_fs", format_display(window().width / kFemtosecond)),
            line("band_threshold", format_display(band_threshold)),
            line("seed", std::to_string(seed)),
            line("materials_file", materials_file.empty() ? "builtin" : materials_file),
        };
        return out;
    }
};

inline const MaterialDatabase& database_for(const RunConfig& cfg, std::optional<MaterialDatabase>& storage) {
    if (cfg.materials_file.empty()) return MaterialDatabase::builtin();
    storage = MaterialDatabase::load(cfg.materials_file);
    return *storage;
}

/// Fills defaults and normalizes units. Throws one ValidationError listing
/// every problem found.
inline RunConfig validate_config(const RawConfig& raw, const MaterialDatabase* db = nullptr) {
    RunConfig cfg;
    std::vector<std::string> errors;

    auto number = [&](const std::string& key, const std::string& value) -> std::optional<double> {
        try {
            const double v = parse_double(value, key);
            if (!std::isfinite(v)) throw ParseError(key + ": must be finite");
            return v;
        } catch (const ParseError& e) {
            errors.push_back(e.what());
            return std::nullopt;
        }
    };
    auto positive = [&](const std::string& key, const std::string& value) -> std::optional<double> {
        auto v = number(key, value);
        if (v && !(*v > 0.0)) {
            errors.push_back(key + ": must be positive, got " + value);
            return std::nullopt;
        }
        return v;
    };

    for (const auto& [key, value] : raw.entries()) {
        if (key == "material") cfg.material = value;
        else if (key == "material_b") cfg.material_b = value;
        else if (key == "extra_material") cfg.extra_material = value;
        else if (key == "materials_file") cfg.materials_file = value;
        else if (key == "output_dir") cfg.output_dir = value;
        else if (key == "carrier_wavelength_nm") {
            if (auto v = positive(key, value)) cfg.omega0 = omega_from_wavelength_um(*v * 1e-3);
        } else if (key == "pulse_fwhm_thz") {
            if (auto v = positive(key, value)) cfg.pulse_fwhm = omega_from_thz(*v);
        } else if (key == "grid_lo_thz") {
            if (auto v = positive(key, value)) cfg.grid_lo_thz = *v;
        } else if (key == "grid_hi_thz") {
            if (auto v = positive(key, value)) cfg.grid_hi_thz = *v;
        } else if (key == "grid_samples") {
            if (auto v = positive(key, value)) cfg.grid_samples = static_cast<std::size_t>(*v);
        } else if (key == "leak_threshold") {
            if (auto v = positive(key, value)) cfg.leak_threshold = *v;
        } else if (key == "thickness_um") {
            if (value != "auto") {
                if (auto v = number(key, value)) {
                    if (std::abs(*v) * kMicrometre > kDefaultMaxThickness) {
                        errors.push_back("thickness_um: |" + value + "| um exceeds the " +
                                         format_double(kDefaultMaxThickness / kMicrometre) + " um bound");
                    } else {
                        cfg.thickness = *v * kMicrometre;
                    }
                }
            }
        } else if (key == "target_delay_fs") {
            if (auto v = number(key, value)) cfg.target_delay = *v * kFemtosecond;
        } else if (key == "order") {
            if (auto v = number(key, value)) {
                if (*v < 0.0 || std::abs(2.0 * *v - std::round(2.0 * *v)) > 1e-9) {
                    errors.push_back("order: must be a non-negative multiple of 1/2, got " + value);
                } else {
                    cfg.order = *v;
                }
            }
        } else if (key == "target_omega1_ratio") {
            if (auto v = number(key, value)) cfg.target_omega1_ratio = *v;
        } else if (key == "mode") {
            try {
                cfg.mode = parse_response_mode(value);
            } catch (const ValidationError& e) {
                errors.push_back(e.what());
            }
        } else if (key == "tau_ftsi_fs") {
            if (auto v = positive(key, value)) cfg.tau_ftsi = *v * kFemtosecond;
        } else if (key == "window_order") {
            if (auto v = number(key, value)) {
                if (*v < 2 || std::abs(*v - std::round(*v)) > 0 || static_cast<long long>(*v) % 2 != 0) {
                    errors.push_back("window_order: must be an even integer >= 2, got " + value);
                } else {
                    cfg.window_order = static_cast<int>(*v);
                }
            }
        } else if (key == "window_width_fs") {
            if (auto v = positive(key, value)) cfg.window_width = *v * kFemtosecond;
        } else if (key == "band_threshold") {
            if (auto v = positive(key, value)) cfg.band_threshold = *v;
        } else if (key == "seed") {
            if (auto v = number(key, value)) cfg.seed = static_cast<std::uint64_t>(*v);
        } else {
            errors.push_back("unknown config key '" + key + "'");
        }
    }

    if (cfg.grid_samples < 2 || (cfg.grid_samples & (cfg.grid_samples - 1)) != 0) {
        errors.push_back("grid_samples: must be a power of two, got " + std::to_string(cfg.grid_samples));
    }
    if (!(cfg.grid_hi_thz > cfg.grid_lo_thz)) errors.push_back("grid_hi_thz must exceed grid_lo_thz");
    else {
        const double f0 = thz_from_omega(cfg.omega0);
        if (f0 < cfg.grid_lo_thz || f0 > cfg.grid_hi_thz) {
            errors.push_back("carrier (" + format_double(f0) + " THz) lies outside the grid");
        }
    }

    std::optional<MaterialDatabase> loaded;
    if (!db) {
        try {
            db = &database_for(cfg, loaded);
        } catch (const Error& e) {
            errors.push_back(e.what());
        }
    }
    if (db) {
        for (const auto* name : {&cfg.material, &cfg.material_b}) {
            if (!db->contains(*name)) {
                errors.push_back("unknown material '" + *name + "' (available: " + db->available() + ")");
            }
        }
        if (cfg.extra_material != "none" && !db->contains(cfg.extra_material)) {
            errors.push_back("unknown material '" + cfg.extra_material + "' (available: " + db->available() +
                             ", or none)");
        }
    }

    if (!errors.empty()) throw ValidationError(std::move(errors));
    return cfg;
}

}  // namespace bsb
