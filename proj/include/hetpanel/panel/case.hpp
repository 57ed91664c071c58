#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hetpanel/panel/edges.hpp"
#include "hetpanel/panel/field_grid.hpp"
#include "hetpanel/panel/geometry.hpp"
#include "hetpanel/panel/material.hpp"

namespace hetpanel {

constexpr int kProfileSamples = 20;
constexpr int kNumDofs = 6;
using Profile = std::array<double, kProfileSamples>;

/// The six nodal degrees of freedom: three translations then three
/// rotations about the global axes.
enum class Dof : int { u1 = 0, u2 = 1, u3 = 2, r1 = 3, r2 = 4, r3 = 5 };

const char* dof_name(Dof d);

/// Prescribed kinematics on one physical edge. For each dof a 20-point
/// profile sampled evenly along the edge (endpoints inclusive) plus a flag
/// saying whether the dof is actually prescribed. Translations in mm,
/// rotations in rad. Unknown dofs carry all-zero profiles by convention.
struct EdgeBC {
    int edge_id = 0;
    std::array<Profile, kNumDofs> profiles{};
    std::array<bool, kNumDofs> known{};
};

/// Lateral pressure on one structural unit, sampled evenly along the unit's
/// long direction (endpoints inclusive), in Pa, acting along the unit
/// normal. Non-plate units normally carry all-zero profiles.
struct LoadProfile {
    int unit_id = 0;
    Profile samples{};
};

/// One fully specified sample: geometry, material, boundary conditions on
/// every edge, loads on every unit and (once solved) target fields.
struct PanelCase {
    PanelGeometry geometry;
    MaterialLaw material;
    std::vector<EdgeBC> edge_bcs;     // aligned with physical_edges() order
    std::vector<LoadProfile> loads;   // aligned with structural_units() order
    std::vector<FieldGrid> targets;   // empty until solved
};

/// Checks the case against its derived topology: one EdgeBC per physical
/// edge and one LoadProfile per unit, ids matching, all values finite.
/// Throws ValidationError with a description of the first defect.
void validate_case(const PanelCase& pc, const std::vector<StructuralUnit>& units,
                   const std::vector<PhysicalEdge>& edges);

/// Resamples a piecewise-linear profile to a different sample count; the
/// samples span [0,1] with endpoints inclusive in both representations.
std::vector<double> resample_profile(const std::vector<double>& samples, int count);

/// Knobs for the synthetic case generator.
struct CaseGenConfig {
    double bc_disp_amp_mm = 1.5;
    double bc_rot_amp_rad = 0.004;
    double pressure_min_pa = 0.5e5;
    double pressure_max_pa = 3.0e5;
    double pressure_ripple = 0.3;
    int max_modes = 3;
};

/// Builds one case for the given geometry: boundary-edge kinematics are
/// sampled from a smooth global field per dof (so profiles agree wherever
/// edges meet) and plate strips get a rippled lateral pressure. Deterministic
/// in the rng state.
PanelCase synthesize_case(const PanelGeometry& geom, const MaterialLaw& mat,
                          const CaseGenConfig& cfg, Rng& rng);

}  // namespace hetpanel
