#pragma once

// CSV exchange formats. Every file is:
//   # key=value            metadata / provenance comment lines
//   col_a,col_b,...        header row
//   v,v,...                rows, doubles in shortest round-trip form
//
// Spectral fields carry `omega0=` and `grid=n,start,step` metadata so they
// reload onto the identical grid.

#include <bsbshaper/errors.hpp>
#include <bsbshaper/ftsi.hpp>
#include <bsbshaper/shaper.hpp>
#include <bsbshaper/spectral.hpp>
#include <bsbshaper/text_format.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace bsb {

struct CsvTable {
    std::vector<std::string> comments;  // without the leading "# "
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::optional<std::string> meta(std::string_view key) const {
        for (const auto& c : comments) {
            const auto eq = c.find('=');
            if (eq != std::string::npos && trim(std::string_view(c).substr(0, eq)) == key) {
                return std::string(trim(std::string_view(c).substr(eq + 1)));
            }
        }
        return std::nullopt;
    }

    std::size_t column(std::string_view name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return i;
        throw ParseError("CSV has no column '" + std::string(name) + "'");
    }

    void require_columns(const std::vector<std::string>& expected) const {
        if (columns != expected) {
            std::string want;
            for (const auto& c : expected) want += (want.empty() ? "" : ",") + c;
            throw ParseError("unexpected CSV header, expected '" + want + "'");
        }
    }
};

inline std::string to_csv(const CsvTable& t) {
    std::string out;
    for (const auto& c : t.comments) out += "# " + c + "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += "\n";
    }
    return out;
}

inline CsvTable parse_csv(std::string_view text, std::string_view source = "<csv>") {
    CsvTable t;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            auto body = line.substr(1);
            if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
            t.comments.emplace_back(body);
            continue;
        }
        const auto fields = split(line, ',');
        if (!have_header) {
            for (auto f : fields) t.columns.emplace_back(trim(f));
            have_header = true;
            continue;
        }
        if (fields.size() != t.columns.size()) {
            throw ParseError(std::string(source) + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(t.columns.size()) + " fields, found " + std::to_string(fields.size()));
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (auto f : fields) row.push_back(parse_double(f, std::string(source) + ":" + std::to_string(line_no)));
        t.rows.push_back(std::move(row));
    }
    if (!have_header) throw ParseError(std::string(source) + ": missing CSV header row");
    return t;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << text;
    if (!out) throw ValidationError("failed writing '" + path + "'");
}

namespace detail {

inline std::string grid_meta(const SpectralGrid& g) {
    return "grid=" + std::to_string(g.size()) + "," + format_double(g.omega_start()) + "," + format_double(g.omega_step());
}

inline SpectralGrid grid_from_table(const CsvTable& t) {
    if (auto g = t.meta("grid")) {
        const auto parts = split(*g, ',');
        if (parts.size() != 3) throw ParseError("grid metadata must be 'n,start,step'");
        return SpectralGrid(static_cast<std::size_t>(parse_integer(parts[0], "grid n")),
                            parse_double(parts[1], "grid start"), parse_double(parts[2], "grid step"));
    }
    if (t.rows.size() < 2) throw ParseError("cannot infer a grid from fewer than two rows");
    const double first = t.rows.front()[0], last = t.rows.back()[0];
    return SpectralGrid(t.rows.size(), first, (last - first) / static_cast<double>(t.rows.size() - 1));
}

inline void require_rows(const CsvTable& t, const SpectralGrid& g) {
    if (t.rows.size() != g.size()) {
        throw ParseError("CSV has " + std::to_string(t.rows.size()) + " rows but its grid has " + std::to_string(g.size()));
    }
}

inline std::vector<std::string> with_extra(std::vector<std::string> meta, const std::vector<std::string>& extra) {
    meta.insert(meta.end(), extra.begin(), extra.end());
    return meta;
}

}  // namespace detail

inline CsvTable field_table(const SpectralField& f, const std::vector<std::string>& extra_comments = {}) {
    CsvTable t{detail::with_extra({"omega0=" + format_double(f.carrier()), detail::grid_meta(f.grid())}, extra_comments),
               {"omega_rad_per_s", "re", "im"},
               {}};
    t.rows.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) t.rows.push_back({f.grid().omega(i), f[i].real(), f[i].imag()});
    return t;
}

inline SpectralField field_from_table(const CsvTable& t) {
    t.require_columns({"omega_rad_per_s", "re", "im"});
    const auto grid = detail::grid_from_table(t);
    detail::require_rows(t, grid);
    const auto w0 = t.meta("omega0");
    if (!w0) throw ParseError("field CSV lacks '# omega0=' metadata");
    std::vector<Complex> amp(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) amp[i] = Complex(t.rows[i][1], t.rows[i][2]);
    return SpectralField(grid, std::move(amp), parse_double(*w0, "omega0"));
}

/// Transfer evaluation: effective response R plus the two polarization magnitudes.
inline CsvTable transfer_table(const TransferFunction& r, const TransferPair& pair,
                               const std::vector<std::string>& extra_comments = {}) {
    require_same_grid(r.grid, pair.grid, "transfer_table");
    CsvTable t{detail::with_extra({detail::grid_meta(r.grid)}, extra_comments),
               {"omega_rad_per_s", "abs_R", "arg_R", "abs_Hx", "abs_Hy", "masked"},
               {}};
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        t.rows.push_back({r.grid.omega(i), std::abs(r.values[i]), std::arg(r.values[i]), std::abs(pair.cos_half[i]),
                          std::abs(pair.sin_half[i]), r.is_masked(i) ? 1.0 : 0.0});
    }
    return t;
}

inline CsvTable interferogram_table(const Interferogram& s, const std::vector<std::string>& extra_comments = {}) {
    CsvTable t{detail::with_extra({detail::grid_meta(s.grid), "delay_hint_s=" + format_double(s.delay_hint)},
                                  extra_comments),
               {"omega_rad_per_s", "intensity"},
               {}};
    for (std::size_t i = 0; i < s.intensity.size(); ++i) t.rows.push_back({s.grid.omega(i), s.intensity[i]});
    return t;
}

inline Interferogram interferogram_from_table(const CsvTable& t) {
    t.require_columns({"omega_rad_per_s", "intensity"});
    const auto grid = detail::grid_from_table(t);
    detail::require_rows(t, grid);
    Interferogram s{grid, std::vector<double>(grid.size()), 0.0};
    if (auto d = t.meta("delay_hint_s")) s.delay_hint = parse_double(*d, "delay_hint_s");
    for (std::size_t i = 0; i < grid.size(); ++i) s.intensity[i] = t.rows[i][1];
    s.validate();
    return s;
}

inline CsvTable phase_table(const RetrievedPhase& p, const std::vector<std::string>& extra_comments = {}) {
    CsvTable t{detail::with_extra({detail::grid_meta(p.grid), "sideband_time_s=" + format_double(p.sideband_time)},
                                  extra_comments),
               {"omega_rad_per_s", "phase_rad", "weight", "masked"},
               {}};
    for (std::size_t i = 0; i < p.phase.size(); ++i) {
        t.rows.push_back({p.grid.omega(i), p.phase[i], p.weight[i], p.masked[i] ? 1.0 : 0.0});
    }
    return t;
}

inline RetrievedPhase phase_from_table(const CsvTable& t) {
    t.require_columns({"omega_rad_per_s", "phase_rad", "weight", "masked"});
    const auto grid = detail::grid_from_table(t);
    detail::require_rows(t, grid);
    const std::size_t n = grid.size();
    RetrievedPhase p{grid, std::vector<double>(n), std::vector<double>(n), std::vector<std::uint8_t>(n), 0.0};
    if (auto s = t.meta("sideband_time_s")) p.sideband_time = parse_double(*s, "sideband_time_s");
    for (std::size_t i = 0; i < n; ++i) {
        p.phase[i] = t.rows[i][1];
        p.weight[i] = t.rows[i][2];
        p.masked[i] = t.rows[i][3] != 0.0 ? 1 : 0;
    }
    return p;
}

}  // namespace bsb
