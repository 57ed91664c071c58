#include "hetpanel/panel/edges.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

#include "hetpanel/core/error.hpp"

namespace hetpanel {

namespace {

constexpr double kTolM = 1e-9;  // geometric coincidence tolerance, metres

// The two axes perpendicular to each orientation, in X<Y<Z order.
constexpr std::array<std::array<Axis, 2>, 3> kPerp = {{
    {Axis::Y, Axis::Z},
    {Axis::X, Axis::Z},
    {Axis::X, Axis::Y},
}};

double coord(const Vec3& p, Axis a) {
    switch (a) {
        case Axis::X: return p.x;
        case Axis::Y: return p.y;
        case Axis::Z: return p.z;
    }
    return 0.0;
}

Axis dominant_axis(const Vec3& d) {
    const double ax = std::abs(d.x), ay = std::abs(d.y), az = std::abs(d.z);
    if (ax >= ay && ax >= az) return Axis::X;
    if (ay >= az) return Axis::Y;
    return Axis::Z;
}

int64_t quantize(double v) { return static_cast<int64_t>(std::llround(v / kTolM)); }

struct SegmentKey {
    std::array<int64_t, 6> q;
    bool operator<(const SegmentKey& o) const { return q < o.q; }
};

SegmentKey make_key(const Vec3& a, const Vec3& b) {
    return SegmentKey{{quantize(a.x), quantize(a.y), quantize(a.z), quantize(b.x),
                       quantize(b.y), quantize(b.z)}};
}

}  // namespace

const char* axis_name(Axis a) {
    switch (a) {
        case Axis::X: return "x";
        case Axis::Y: return "y";
        case Axis::Z: return "z";
    }
    return "?";
}

SpatialRelation::SpatialRelation(Axis orientation, Axis placement_axis, int placement_sign) {
    if (placement_axis == orientation) {
        throw std::invalid_argument("SpatialRelation: placement axis must differ from orientation");
    }
    if (placement_sign != 1 && placement_sign != -1) {
        throw std::invalid_argument("SpatialRelation: placement sign must be +1 or -1");
    }
    const auto& perp = kPerp[static_cast<int>(orientation)];
    const int which = (placement_axis == perp[0]) ? 0 : 1;
    const int slot = 2 * which + (placement_sign > 0 ? 0 : 1);
    code_ = static_cast<int>(orientation) * 4 + slot;
}

SpatialRelation SpatialRelation::from_code(int code) {
    if (code < 0 || code >= kCount) {
        throw std::invalid_argument("SpatialRelation code out of range: " + std::to_string(code));
    }
    SpatialRelation r;
    r.code_ = code;
    return r;
}

Axis SpatialRelation::orientation() const { return static_cast<Axis>(code_ / 4); }

Axis SpatialRelation::placement_axis() const {
    return kPerp[code_ / 4][(code_ % 4) / 2];
}

int SpatialRelation::placement_sign() const { return (code_ % 2 == 0) ? 1 : -1; }

std::string SpatialRelation::name() const {
    std::string s = axis_name(orientation());
    s += placement_sign() > 0 ? "_p" : "_m";
    s += axis_name(placement_axis());
    return s;
}

std::vector<PhysicalEdge> physical_edges(const std::vector<StructuralUnit>& units) {
    if (units.empty()) {
        throw DomainError("physical_edges: unit list is empty");
    }

    // Panel plan extents, recovered from the plate strips (which tile the plan).
    double length = 0.0, width = 0.0;
    for (const auto& u : units) {
        if (u.kind == UnitKind::plate_strip) {
            length = std::max(length, u.rect.len_u);
            width += u.rect.len_v;
        }
    }

    std::vector<PhysicalEdge> edges;
    std::map<SegmentKey, int> index;

    auto add_side = [&](const StructuralUnit& unit, Vec3 a, Vec3 b, Vec3 extends) {
        Vec3 dir = b - a;
        const Axis ori = dominant_axis(dir);
        if (coord(a, ori) > coord(b, ori)) std::swap(a, b);
        const Axis pax = dominant_axis(extends);
        const int psign = coord(extends, pax) > 0 ? 1 : -1;
        const SegmentKey key = make_key(a, b);
        auto it = index.find(key);
        int id;
        if (it == index.end()) {
            id = static_cast<int>(edges.size());
            index.emplace(key, id);
            PhysicalEdge e;
            e.id = id;
            e.orientation = ori;
            e.p0 = a;
            e.p1 = b;
            edges.push_back(std::move(e));
        } else {
            id = it->second;
        }
        edges[id].adjacency.push_back({unit.id, SpatialRelation(ori, pax, psign)});
    };

    for (const auto& u : units) {
        const Rect3& r = u.rect;
        // Sides in fixed order: v=0, v=1, u=0, u=1.
        add_side(u, r.point(0, 0), r.point(1, 0), r.axis_v);
        add_side(u, r.point(0, 1), r.point(1, 1), r.axis_v * -1.0);
        add_side(u, r.point(0, 0), r.point(0, 1), r.axis_u);
        add_side(u, r.point(1, 0), r.point(1, 1), r.axis_u * -1.0);
    }

    // Interior attachments: an edge lying strictly inside another unit's
    // rectangle (e.g. the web top line inside its flange). The placement is
    // canonically the positive in-plane perpendicular of the host rectangle.
    for (auto& e : edges) {
        for (const auto& u : units) {
            bool already = false;
            for (const auto& adj : e.adjacency) already = already || adj.unit_id == u.id;
            if (already) continue;
            const Rect3& r = u.rect;
            const Vec3 nrm = r.normal();
            const Vec3 d0 = e.p0 - r.origin;
            const Vec3 d1 = e.p1 - r.origin;
            if (std::abs(d0.dot(nrm)) > kTolM || std::abs(d1.dot(nrm)) > kTolM) continue;
            const double u0 = d0.dot(r.axis_u), u1 = d1.dot(r.axis_u);
            const double v0 = d0.dot(r.axis_v), v1 = d1.dot(r.axis_v);
            const bool in_u = u0 > -kTolM && u0 < r.len_u + kTolM && u1 > -kTolM &&
                              u1 < r.len_u + kTolM;
            const bool strict_v =
                v0 > kTolM && v0 < r.len_v - kTolM && v1 > kTolM && v1 < r.len_v - kTolM;
            const bool strict_u =
                u0 > kTolM && u0 < r.len_u - kTolM && u1 > kTolM && u1 < r.len_u - kTolM;
            const bool in_v = v0 > -kTolM && v0 < r.len_v + kTolM && v1 > -kTolM &&
                              v1 < r.len_v + kTolM;
            if (!(in_u && in_v) || !(strict_u || strict_v)) continue;
            const Axis pax = strict_v ? dominant_axis(r.axis_v) : dominant_axis(r.axis_u);
            e.adjacency.push_back({u.id, SpatialRelation(e.orientation, pax, 1)});
        }
    }

    for (auto& e : edges) {
        auto on_plane = [&](Axis a, double v) {
            return std::abs(coord(e.p0, a) - v) < kTolM && std::abs(coord(e.p1, a) - v) < kTolM;
        };
        e.on_panel_boundary = on_plane(Axis::X, 0.0) || on_plane(Axis::X, length) ||
                              on_plane(Axis::Y, 0.0) || on_plane(Axis::Y, width);
        if (e.adjacency.empty() || e.adjacency.size() > 4) {
            throw ValidationError("edge " + std::to_string(e.id) + " has " +
                                  std::to_string(e.adjacency.size()) +
                                  " adjacent units; expected 1..4");
        }
    }
    return edges;
}

std::array<int, 4> unit_side_edges(const StructuralUnit& u,
                                   const std::vector<PhysicalEdge>& edges) {
    const Rect3& r = u.rect;
    const std::array<std::pair<Vec3, Vec3>, 4> sides = {{
        {r.point(0, 0), r.point(1, 0)},
        {r.point(0, 1), r.point(1, 1)},
        {r.point(0, 0), r.point(0, 1)},
        {r.point(1, 0), r.point(1, 1)},
    }};
    std::array<int, 4> out{};
    for (size_t s = 0; s < sides.size(); ++s) {
        int found = -1;
        for (const auto& e : edges) {
            const bool same = ((e.p0 - sides[s].first).norm() < kTolM &&
                               (e.p1 - sides[s].second).norm() < kTolM) ||
                              ((e.p0 - sides[s].second).norm() < kTolM &&
                               (e.p1 - sides[s].first).norm() < kTolM);
            if (same) {
                found = e.id;
                break;
            }
        }
        if (found < 0) {
            throw ValidationError("unit " + std::to_string(u.id) + " side " +
                                  std::to_string(s) + " has no matching physical edge");
        }
        out[s] = found;
    }
    return out;
}

}  // namespace hetpanel
