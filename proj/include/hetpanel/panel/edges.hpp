#pragma once

#include <array>
#include <string>
#include <vector>

#include "hetpanel/panel/geometry.hpp"

namespace hetpanel {

enum class Axis : int { X = 0, Y = 1, Z = 2 };

const char* axis_name(Axis a);

/// How a structural unit hangs off an edge: the edge's orientation axis
/// combined with the perpendicular half-axis along which the unit extends
/// away from the edge. 3 orientations x 4 half-axes = 12 relations.
class SpatialRelation {
public:
    SpatialRelation() = default;
    SpatialRelation(Axis orientation, Axis placement_axis, int placement_sign);

    static SpatialRelation from_code(int code);
    static constexpr int kCount = 12;

    Axis orientation() const;
    Axis placement_axis() const;
    int placement_sign() const;  // +1 or -1
    int code() const { return code_; }
    /// Stable short name, e.g. "x_py": edge along x, unit extending toward +y.
    std::string name() const;

    bool operator==(const SpatialRelation& o) const { return code_ == o.code_; }

private:
    int code_ = 0;
};

struct EdgeAdjacency {
    int unit_id = 0;
    SpatialRelation relation;
};

/// A straight physical edge of the panel: either a side of a structural
/// unit's rectangle or a junction line shared by several units. Adjacency
/// lists every unit meeting the edge together with its spatial relation.
struct PhysicalEdge {
    int id = 0;
    Axis orientation = Axis::X;
    Vec3 p0, p1;  // endpoints, metres; p1 > p0 along the orientation axis
    std::vector<EdgeAdjacency> adjacency;
    bool on_panel_boundary = false;  // lies on x=0, x=L, y=0 or y=W
};

/// Extracts the distinct physical edges of the panel. For n stiffeners the
/// count is 10n+4: per stiffener one plate junction line (strip, strip, web),
/// one web-top line (web, flange) and eight free/boundary sides, plus the
/// four outer plate sides. Edge ids are assigned in a fixed discovery order
/// so identical geometry always yields identical ids.
std::vector<PhysicalEdge> physical_edges(const std::vector<StructuralUnit>& units);

/// Edge ids of the four rectangle sides of one unit, in the canonical side
/// order (v=0, v=1, u=0, u=1) used everywhere a unit's own edges are
/// enumerated.
std::array<int, 4> unit_side_edges(const StructuralUnit& u,
                                   const std::vector<PhysicalEdge>& edges);

}  // namespace hetpanel
