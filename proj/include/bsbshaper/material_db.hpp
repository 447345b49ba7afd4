#pragma once

// Loader for the bundled crystal database (data/materials.txt). The same
// text is compiled into the library so the builtin set needs no file I/O.

#include <bsbshaper/dispersion.hpp>
#include <bsbshaper/material_data.hpp>
#include <bsbshaper/text_format.hpp>

#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bsb {

class MaterialDatabase {
public:
    static MaterialDatabase parse(std::string_view text, std::string_view source = "<materials>") {
        const auto doc = KeyValueDocument::parse(text, source);
        MaterialDatabase db;
        if (auto v = doc.global().get("database_version")) db.version_ = *v;
        if (auto v = doc.global().get("format_version"); v && trim(*v) != "1") {
            throw ParseError(std::string(source) + ": unsupported format_version " + *v);
        }

        struct Partial {
            std::optional<SellmeierModel> ordinary, extraordinary;
            std::string citation;
        };
        std::map<std::string, Partial> partial;
        std::vector<std::string> order;

        for (const auto& section : doc.sections()) {
            if (section.name.empty()) continue;
            const auto dot = section.name.rfind('.');
            if (dot == std::string::npos) {
                throw ParseError(std::string(source) + ": section [" + section.name +
                                 "] must be named <material>.ordinary or <material>.extraordinary");
            }
            const std::string name = section.name.substr(0, dot);
            const std::string axis = section.name.substr(dot + 1);
            if (axis != "ordinary" && axis != "extraordinary") {
                throw ParseError(std::string(source) + ": unknown axis '" + axis + "' in [" + section.name + "]");
            }
            if (!partial.contains(name)) order.push_back(name);
            auto& p = partial[name];
            auto model = parse_model(section, source);
            if (auto c = section.get("citation")) {
                if (p.citation.empty()) p.citation = *c;
                else if (p.citation != *c) p.citation += " / " + *c;
            }
            (axis == "ordinary" ? p.ordinary : p.extraordinary) = std::move(model);
        }

        for (const auto& name : order) {
            auto& p = partial[name];
            if (!p.ordinary || !p.extraordinary) {
                throw ParseError(std::string(source) + ": material '" + name + "' needs both axes");
            }
            db.materials_.push_back(Material{name, *p.ordinary, *p.extraordinary, p.citation});
        }
        return db;
    }

    static MaterialDatabase load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ValidationError("cannot open material database '" + path + "'");
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return parse(text, path);
    }

    static const MaterialDatabase& builtin() {
        static const MaterialDatabase db = parse(kBuiltinMaterialData, "builtin materials");
        return db;
    }

    const Material& get(std::string_view name) const {
        for (const auto& m : materials_)
            if (m.name == name) return m;
        throw ValidationError("unknown material '" + std::string(name) + "' (available: " + available() + ")");
    }

    bool contains(std::string_view name) const {
        for (const auto& m : materials_)
            if (m.name == name) return true;
        return false;
    }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const auto& m : materials_) out.push_back(m.name);
        return out;
    }

    std::string available() const {
        std::string out;
        for (const auto& m : materials_) {
            if (!out.empty()) out += ", ";
            out += m.name;
        }
        return out;
    }

    const std::vector<Material>& materials() const { return materials_; }
    const std::string& version() const { return version_; }

private:
    static SellmeierModel parse_model(const KeyValueSection& section, std::string_view source) {
        const std::string ctx = std::string(source) + " [" + section.name + "]";
        SellmeierModel m;
        m.label = section.name;
        const auto a = section.get("A");
        if (!a) throw ParseError(ctx + ": missing A");
        m.constant = parse_double(*a, ctx + " A");
        for (const auto& term : section.get_all("term")) {
            const auto fields = split_ws(term);
            if (fields.size() != 2) throw ParseError(ctx + ": term needs 'B C', got '" + term + "'");
            m.terms.push_back({parse_double(fields[0], ctx + " term B"), parse_double(fields[1], ctx + " term C")});
        }
        if (auto d = section.get("D")) m.quadratic_um2 = parse_double(*d, ctx + " D");
        const auto range = section.get("valid_range_um");
        if (!range) throw ParseError(ctx + ": missing valid_range_um");
        const auto bounds = split_ws(*range);
        if (bounds.size() != 2) throw ParseError(ctx + ": valid_range_um needs two values");
        m.lambda_min_um = parse_double(bounds[0], ctx + " valid_range_um");
        m.lambda_max_um = parse_double(bounds[1], ctx + " valid_range_um");
        m.validate();
        return m;
    }

    std::vector<Material> materials_;
    std::string version_;
};

}  // namespace bsb
