#include "hetpanel/panel/geometry.hpp"

#include <string>

#include "hetpanel/core/error.hpp"
#include "hetpanel/core/rng.hpp"

namespace hetpanel {

namespace {

void check_range(const DimRange& r, const char* name) {
    if (!(r.lower > 0.0)) {
        throw DomainError(std::string("range '") + name + "' lower bound must be positive, got " +
                          std::to_string(r.lower));
    }
    if (r.upper < r.lower) {
        throw DomainError(std::string("range '") + name + "' has upper < lower (" +
                          std::to_string(r.upper) + " < " + std::to_string(r.lower) + ")");
    }
}

double draw(const DimRange& r, Rng& rng) {
    if (r.upper == r.lower) return r.lower;
    return rng.uniform(r.lower, r.upper);
}

}  // namespace

void GeometryRanges::validate() const {
    if (!(length_m > 0.0) || !(width_m > 0.0)) {
        throw DomainError("panel plan dimensions must be positive (length " +
                          std::to_string(length_m) + " m, width " + std::to_string(width_m) +
                          " m)");
    }
    check_range(plate_thickness_mm, "plate_thickness_mm");
    check_range(web_thickness_mm, "web_thickness_mm");
    check_range(web_height_mm, "web_height_mm");
    check_range(flange_thickness_mm, "flange_thickness_mm");
    check_range(flange_width_mm, "flange_width_mm");
    if (n_stiffeners_min < 1) {
        throw DomainError("n_stiffeners_min must be at least 1, got " +
                          std::to_string(n_stiffeners_min));
    }
    if (n_stiffeners_max < n_stiffeners_min) {
        throw DomainError("n_stiffeners_max (" + std::to_string(n_stiffeners_max) +
                          ") must be >= n_stiffeners_min (" + std::to_string(n_stiffeners_min) +
                          ")");
    }
}

PanelGeometry sample_panel(const GeometryRanges& ranges, Rng& rng) {
    ranges.validate();
    PanelGeometry g;
    g.length_m = ranges.length_m;
    g.width_m = ranges.width_m;
    g.plate_thickness_mm = draw(ranges.plate_thickness_mm, rng);
    g.web_thickness_mm = draw(ranges.web_thickness_mm, rng);
    g.web_height_mm = draw(ranges.web_height_mm, rng);
    g.flange_thickness_mm = draw(ranges.flange_thickness_mm, rng);
    g.flange_width_mm = draw(ranges.flange_width_mm, rng);
    g.n_stiffeners = ranges.n_stiffeners_min == ranges.n_stiffeners_max
                         ? ranges.n_stiffeners_min
                         : ranges.n_stiffeners_min +
                               static_cast<int>(rng.uniform_index(static_cast<uint64_t>(
                                   ranges.n_stiffeners_max - ranges.n_stiffeners_min + 1)));
    validate_geometry(g);
    return g;
}

void validate_geometry(const PanelGeometry& g) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) {
            throw DomainError(std::string("geometry field '") + name +
                              "' must be positive, got " + std::to_string(v));
        }
    };
    positive(g.length_m, "length_m");
    positive(g.width_m, "width_m");
    positive(g.plate_thickness_mm, "plate_thickness_mm");
    positive(g.web_thickness_mm, "web_thickness_mm");
    positive(g.web_height_mm, "web_height_mm");
    positive(g.flange_thickness_mm, "flange_thickness_mm");
    positive(g.flange_width_mm, "flange_width_mm");
    if (g.n_stiffeners < 0) {
        throw DomainError("n_stiffeners must be non-negative, got " +
                          std::to_string(g.n_stiffeners));
    }
    if (g.n_stiffeners > 0 &&
        g.flange_width_mm * 1e-3 >= g.stiffener_spacing_m()) {
        throw DomainError("flange width " + std::to_string(g.flange_width_mm) +
                          " mm is not smaller than the stiffener spacing " +
                          std::to_string(g.stiffener_spacing_m() * 1e3) + " mm");
    }
}

const char* unit_kind_name(UnitKind k) {
    switch (k) {
        case UnitKind::plate_strip: return "plate_strip";
        case UnitKind::web: return "web";
        case UnitKind::flange: return "flange";
    }
    return "?";
}

std::vector<StructuralUnit> structural_units(const PanelGeometry& g) {
    validate_geometry(g);
    const int n = g.n_stiffeners;
    const double L = g.length_m;
    const double W = g.width_m;
    const double hw = g.web_height_mm * 1e-3;
    const double bf = g.flange_width_mm * 1e-3;
    const Vec3 ex{1, 0, 0}, ey{0, 1, 0}, ez{0, 0, 1};

    std::vector<StructuralUnit> units;
    units.reserve(static_cast<size_t>(3 * n + 1));
    auto stiff_y = [&](int i) { return W * (i + 1) / (n + 1); };

    for (int j = 0; j <= n; ++j) {
        const double y0 = (j == 0) ? 0.0 : stiff_y(j - 1);
        const double y1 = (j == n) ? W : stiff_y(j);
        StructuralUnit u;
        u.id = static_cast<int>(units.size());
        u.kind = UnitKind::plate_strip;
        u.index_in_kind = j;
        u.rect = Rect3{{0, y0, 0}, ex, ey, L, y1 - y0};
        u.thickness_mm = g.plate_thickness_mm;
        units.push_back(u);
    }
    for (int i = 0; i < n; ++i) {
        StructuralUnit u;
        u.id = static_cast<int>(units.size());
        u.kind = UnitKind::web;
        u.index_in_kind = i;
        u.rect = Rect3{{0, stiff_y(i), 0}, ex, ez, L, hw};
        u.thickness_mm = g.web_thickness_mm;
        units.push_back(u);
    }
    for (int i = 0; i < n; ++i) {
        StructuralUnit u;
        u.id = static_cast<int>(units.size());
        u.kind = UnitKind::flange;
        u.index_in_kind = i;
        u.rect = Rect3{{0, stiff_y(i) - bf / 2.0, hw}, ex, ey, L, bf};
        u.thickness_mm = g.flange_thickness_mm;
        units.push_back(u);
    }
    return units;
}

}  // namespace hetpanel
