#include "hetpanel/oracle/grillage.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hetpanel/core/error.hpp"

namespace hetpanel {

void GrillageMesh::validate() const {
    if (n_along < 2 || n_along > 400) {
        throw DomainError("grillage n_along must be in [2, 400], got " +
                          std::to_string(n_along));
    }
    if (per_bay < 1 || per_bay > 64) {
        throw DomainError("grillage per_bay must be in [1, 64], got " + std::to_string(per_bay));
    }
}

namespace {

// Thin rectangular strip of width w and thickness t lying in the plate
// plane; in-plane axis along the member.
SectionComponent plate_component(double w, double t) {
    SectionComponent s;
    s.area = w * t;
    s.i_bend_z = w * t * t * t / 12.0;
    s.i_bend_p = t * w * w * w / 12.0;
    s.j_torsion = w * t * t * t / 3.0;
    s.z_offset = 0.0;
    return s;
}

// Tee stiffener (web + flange) about its own centroid, offset above the
// plate mid-plane.
SectionComponent stiffener_component(const PanelGeometry& g) {
    const double tw = g.web_thickness_mm * 1e-3;
    const double hw = g.web_height_mm * 1e-3;
    const double tf = g.flange_thickness_mm * 1e-3;
    const double bf = g.flange_width_mm * 1e-3;
    const double aw = tw * hw, af = bf * tf;
    const double zw = hw / 2.0, zf = hw + tf / 2.0;
    SectionComponent s;
    s.area = aw + af;
    s.z_offset = (aw * zw + af * zf) / s.area;
    s.i_bend_z = tw * hw * hw * hw / 12.0 + aw * (zw - s.z_offset) * (zw - s.z_offset) +
                 bf * tf * tf * tf / 12.0 + af * (zf - s.z_offset) * (zf - s.z_offset);
    s.i_bend_p = hw * tw * tw * tw / 12.0 + tf * bf * bf * bf / 12.0;
    s.j_torsion = (hw * tw * tw * tw + bf * tf * tf * tf) / 3.0;
    return s;
}

double tributary(const std::vector<double>& coords, size_t i) {
    const size_t n = coords.size();
    const double lo = i == 0 ? coords[0] : 0.5 * (coords[i - 1] + coords[i]);
    const double hi = i + 1 == n ? coords[n - 1] : 0.5 * (coords[i] + coords[i + 1]);
    return hi - lo;
}

}  // namespace

GrillageModel::GrillageModel(const PanelCase& pc, const GrillageMesh& mesh)
    : case_(pc), mesh_(mesh) {
    mesh_.validate();
    units_ = structural_units(pc.geometry);
    edges_ = physical_edges(units_);
    validate_case(pc, units_, edges_);

    const PanelGeometry& g = pc.geometry;
    const int nb = g.n_stiffeners + 1;  // bays
    x_.resize(static_cast<size_t>(mesh_.n_along) + 1);
    for (int i = 0; i <= mesh_.n_along; ++i) {
        x_[static_cast<size_t>(i)] = g.length_m * i / mesh_.n_along;
    }
    const double spacing = g.width_m / nb;
    y_.push_back(0.0);
    for (int b = 0; b < nb; ++b) {
        for (int k = 1; k <= mesh_.per_bay; ++k) {
            y_.push_back(spacing * b + spacing * k / mesh_.per_bay);
        }
    }
    for (int s = 0; s < g.n_stiffeners; ++s) {
        stiff_lines_.push_back((s + 1) * mesh_.per_bay);
    }

    const int ns = static_cast<int>(x_.size());
    const int nl = static_cast<int>(y_.size());
    const double tp = g.plate_thickness_mm * 1e-3;
    const SectionComponent stiff =
        g.n_stiffeners > 0 ? stiffener_component(g) : SectionComponent{};

    for (int j = 0; j < nl; ++j) {
        const bool on_stiff = std::find(stiff_lines_.begin(), stiff_lines_.end(), j) !=
                              stiff_lines_.end();
        const double w = tributary(y_, static_cast<size_t>(j));
        for (int i = 0; i + 1 < ns; ++i) {
            GrillageMember m;
            m.node0 = node_id(j, i);
            m.node1 = node_id(j, i + 1);
            m.dir = Axis::X;
            m.sections.push_back(plate_component(w, tp));
            if (on_stiff) m.sections.push_back(stiff);
            members_.push_back(std::move(m));
        }
    }
    for (int i = 0; i < ns; ++i) {
        const double w = tributary(x_, static_cast<size_t>(i));
        for (int j = 0; j + 1 < nl; ++j) {
            GrillageMember m;
            m.node0 = node_id(j, i);
            m.node1 = node_id(j + 1, i);
            m.dir = Axis::Y;
            m.sections.push_back(plate_component(w, tp));
            members_.push_back(std::move(m));
        }
    }
}

Vec3 GrillageModel::node_pos(int node) const {
    const int ns = static_cast<int>(x_.size());
    return {x_[static_cast<size_t>(node % ns)], y_[static_cast<size_t>(node / ns)], 0.0};
}

}  // namespace hetpanel
