#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace hetpanel {

class Rng;

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
};

/// One stiffened panel, a flat plate with identical evenly spaced
/// tee-stiffeners running along the panel length (the x direction).
/// Plan dimensions in metres, section dimensions in millimetres.
struct PanelGeometry {
    double length_m = 3.0;  // stiffener direction, x
    double width_m = 3.0;   // transverse direction, y
    double plate_thickness_mm = 0.0;
    double web_thickness_mm = 0.0;
    double web_height_mm = 0.0;
    double flange_thickness_mm = 0.0;
    double flange_width_mm = 0.0;
    int n_stiffeners = 0;

    double stiffener_spacing_m() const { return width_m / (n_stiffeners + 1); }
};

struct DimRange {
    double lower = 0.0;
    double upper = 0.0;
};

/// Sampling ranges for the section dimensions. Plan dimensions are held
/// fixed across a sample set. A collapsed interval (lower == upper) pins the
/// dimension to that value.
struct GeometryRanges {
    double length_m = 3.0;
    double width_m = 3.0;
    DimRange plate_thickness_mm{10.0, 20.0};
    DimRange web_thickness_mm{5.0, 20.0};
    DimRange web_height_mm{100.0, 400.0};
    DimRange flange_thickness_mm{5.0, 20.0};
    DimRange flange_width_mm{50.0, 150.0};
    int n_stiffeners_min = 2;
    int n_stiffeners_max = 7;

    void validate() const;
};

/// Draws one panel uniformly from the ranges. Draw order is fixed (plate,
/// web thickness, web height, flange thickness, flange width, stiffener
/// count) so a given rng state always yields the same panel.
PanelGeometry sample_panel(const GeometryRanges& ranges, Rng& rng);

void validate_geometry(const PanelGeometry& geom);

/// Axis-aligned rectangle in 3-d: origin corner plus two orthogonal unit
/// axes and extents (metres). Mid-surface representation of a structural
/// member.
struct Rect3 {
    Vec3 origin;
    Vec3 axis_u, axis_v;  // unit vectors
    double len_u = 0.0, len_v = 0.0;

    Vec3 point(double u, double v) const {
        return origin + axis_u * (u * len_u) + axis_v * (v * len_v);
    }
    Vec3 centroid() const { return point(0.5, 0.5); }
    Vec3 normal() const { return axis_u.cross(axis_v); }
};

enum class UnitKind : int { plate_strip = 0, web = 1, flange = 2 };

const char* unit_kind_name(UnitKind k);

/// One plate-level member of the panel: a plate strip between stiffener
/// lines, a stiffener web, or a stiffener flange.
struct StructuralUnit {
    int id = 0;  // position in the structural_units() ordering
    UnitKind kind = UnitKind::plate_strip;
    int index_in_kind = 0;
    Rect3 rect;            // mid-surface, metres
    double thickness_mm = 0.0;
};

/// Decomposes the panel into 3n+1 units: n+1 plate strips, n webs and n
/// flanges, in that order. The plate mid-plane is z = 0; stiffener i sits at
/// y = width * (i+1) / (n+1), its web spanning z in [0, web_height] and its
/// flange centred on the web top edge.
std::vector<StructuralUnit> structural_units(const PanelGeometry& geom);

}  // namespace hetpanel
