#include "hetpanel/panel/case.hpp"

#include <cmath>
#include <string>

#include "hetpanel/core/error.hpp"
#include "hetpanel/core/rng.hpp"

namespace hetpanel {

const char* channel_name(Channel c) {
    switch (c) {
        case Channel::u1: return "u1";
        case Channel::u2: return "u2";
        case Channel::u3: return "u3";
        case Channel::stress: return "stress";
    }
    return "?";
}

Channel channel_from_string(const std::string& s) {
    if (s == "u1") return Channel::u1;
    if (s == "u2") return Channel::u2;
    if (s == "u3") return Channel::u3;
    if (s == "stress") return Channel::stress;
    throw ConfigError("unknown channel '" + s + "' (expected u1, u2, u3 or stress)");
}

const char* dof_name(Dof d) {
    switch (d) {
        case Dof::u1: return "u1";
        case Dof::u2: return "u2";
        case Dof::u3: return "u3";
        case Dof::r1: return "r1";
        case Dof::r2: return "r2";
        case Dof::r3: return "r3";
    }
    return "?";
}

void validate_case(const PanelCase& pc, const std::vector<StructuralUnit>& units,
                   const std::vector<PhysicalEdge>& edges) {
    if (pc.edge_bcs.size() != edges.size()) {
        throw ValidationError("case has " + std::to_string(pc.edge_bcs.size()) +
                              " edge boundary conditions but the panel has " +
                              std::to_string(edges.size()) + " physical edges");
    }
    if (pc.loads.size() != units.size()) {
        throw ValidationError("case has " + std::to_string(pc.loads.size()) +
                              " load profiles but the panel has " + std::to_string(units.size()) +
                              " structural units");
    }
    bool any_known = false;
    for (size_t i = 0; i < edges.size(); ++i) {
        const EdgeBC& bc = pc.edge_bcs[i];
        if (bc.edge_id != edges[i].id) {
            throw ValidationError("edge bc at position " + std::to_string(i) +
                                  " refers to edge " + std::to_string(bc.edge_id) +
                                  " but physical edge " + std::to_string(edges[i].id) +
                                  " was expected");
        }
        for (int d = 0; d < kNumDofs; ++d) {
            for (int j = 0; j < kProfileSamples; ++j) {
                const double v = bc.profiles[d][j];
                if (!std::isfinite(v)) {
                    throw ValidationError("edge " + std::to_string(bc.edge_id) + " dof " +
                                          dof_name(static_cast<Dof>(d)) + " sample " +
                                          std::to_string(j) + " is not finite");
                }
                if (!bc.known[d] && v != 0.0) {
                    throw ValidationError("edge " + std::to_string(bc.edge_id) + " dof " +
                                          dof_name(static_cast<Dof>(d)) +
                                          " is masked but carries non-zero samples");
                }
            }
            any_known = any_known || bc.known[d];
        }
    }
    if (!any_known) {
        throw ValidationError("case prescribes no boundary dof on any edge");
    }
    for (size_t i = 0; i < units.size(); ++i) {
        const LoadProfile& lp = pc.loads[i];
        if (lp.unit_id != units[i].id) {
            throw ValidationError("load profile at position " + std::to_string(i) +
                                  " refers to unit " + std::to_string(lp.unit_id) + " but unit " +
                                  std::to_string(units[i].id) + " was expected");
        }
        for (int j = 0; j < kProfileSamples; ++j) {
            if (!std::isfinite(lp.samples[j])) {
                throw ValidationError("load profile for unit " + std::to_string(lp.unit_id) +
                                      " sample " + std::to_string(j) + " is not finite");
            }
        }
    }
    if (!pc.targets.empty() && pc.targets.size() != units.size()) {
        throw ValidationError("case has " + std::to_string(pc.targets.size()) +
                              " target grids but the panel has " + std::to_string(units.size()) +
                              " structural units");
    }
}

std::vector<double> resample_profile(const std::vector<double>& samples, int count) {
    if (samples.size() < 2) {
        throw DomainError("resample_profile: need at least 2 input samples, got " +
                          std::to_string(samples.size()));
    }
    if (count < 2) {
        throw DomainError("resample_profile: need at least 2 output samples, got " +
                          std::to_string(count));
    }
    const int n = static_cast<int>(samples.size());
    std::vector<double> out(static_cast<size_t>(count));
    for (int j = 0; j < count; ++j) {
        const double t = static_cast<double>(j) / (count - 1) * (n - 1);
        const int i0 = std::min(static_cast<int>(std::floor(t)), n - 2);
        const double f = t - i0;
        out[static_cast<size_t>(j)] = samples[i0] * (1.0 - f) + samples[i0 + 1] * f;
    }
    return out;
}

namespace {

// One smooth scalar field over the panel volume, a short cosine series in
// normalised coordinates. Sampling every edge profile from the same field
// keeps meeting edges consistent at shared points.
struct SmoothField {
    struct Mode {
        int a = 0, b = 0, c = 0;
        double phase = 0.0, weight = 0.0;
    };
    std::vector<Mode> modes;

    double eval(double xi, double eta, double zeta) const {
        double v = 0.0;
        for (const auto& m : modes) {
            v += m.weight *
                 std::cos(M_PI * (m.a * xi + m.b * eta + m.c * zeta) + m.phase);
        }
        return v;
    }
};

SmoothField draw_field(const CaseGenConfig& cfg, Rng& rng) {
    SmoothField f;
    const int m = 1 + static_cast<int>(rng.uniform_index(
                          static_cast<uint64_t>(std::max(1, cfg.max_modes))));
    for (int k = 0; k < m; ++k) {
        SmoothField::Mode mode;
        mode.a = static_cast<int>(rng.uniform_index(3));
        mode.b = static_cast<int>(rng.uniform_index(3));
        mode.c = static_cast<int>(rng.uniform_index(3));
        mode.phase = rng.uniform(0.0, 2.0 * M_PI);
        mode.weight = rng.uniform(-1.0, 1.0);
        f.modes.push_back(mode);
    }
    return f;
}

}  // namespace

PanelCase synthesize_case(const PanelGeometry& geom, const MaterialLaw& mat,
                          const CaseGenConfig& cfg, Rng& rng) {
    validate_geometry(geom);
    mat.validate();
    const auto units = structural_units(geom);
    const auto edges = physical_edges(units);

    PanelCase pc;
    pc.geometry = geom;
    pc.material = mat;

    // Fixed draw order: six dof fields, then pressures.
    std::array<SmoothField, kNumDofs> fields;
    for (int d = 0; d < kNumDofs; ++d) fields[d] = draw_field(cfg, rng);

    const double zref =
        std::max(1e-3 * (geom.web_height_mm + geom.flange_thickness_mm), 1e-6);
    pc.edge_bcs.reserve(edges.size());
    for (const auto& e : edges) {
        EdgeBC bc;
        bc.edge_id = e.id;
        if (e.on_panel_boundary) {
            for (int d = 0; d < kNumDofs; ++d) {
                bc.known[d] = true;
                const double amp = d < 3 ? cfg.bc_disp_amp_mm : cfg.bc_rot_amp_rad;
                for (int j = 0; j < kProfileSamples; ++j) {
                    const double t = static_cast<double>(j) / (kProfileSamples - 1);
                    const Vec3 p = e.p0 + (e.p1 - e.p0) * t;
                    bc.profiles[d][j] = amp * fields[d].eval(p.x / geom.length_m,
                                                             p.y / geom.width_m, p.z / zref);
                }
            }
        }
        pc.edge_bcs.push_back(bc);
    }

    const double base = rng.uniform(cfg.pressure_min_pa, cfg.pressure_max_pa);
    pc.loads.reserve(units.size());
    for (const auto& u : units) {
        LoadProfile lp;
        lp.unit_id = u.id;
        if (u.kind == UnitKind::plate_strip) {
            const int a = 1 + static_cast<int>(rng.uniform_index(2));
            const double phase = rng.uniform(0.0, 2.0 * M_PI);
            const double w = rng.uniform(-1.0, 1.0);
            for (int j = 0; j < kProfileSamples; ++j) {
                const double t = static_cast<double>(j) / (kProfileSamples - 1);
                lp.samples[j] =
                    base * (1.0 + cfg.pressure_ripple * w * std::cos(M_PI * a * t + phase));
            }
        }
        pc.loads.push_back(lp);
    }

    validate_case(pc, units, edges);
    return pc;
}

}  // namespace hetpanel
