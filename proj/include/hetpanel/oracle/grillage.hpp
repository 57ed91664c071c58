#pragma once

#include <vector>

#include "hetpanel/panel/case.hpp"

namespace hetpanel {

/// Mesh density for the grillage idealisation: divisions along the panel
/// length and per stiffener bay across the width.
struct GrillageMesh {
    int n_along = 20;
    int per_bay = 4;

    void validate() const;
};

/// A beam section component contributing to a grillage member. Offsets are
/// measured from the plate mid-plane (the node line) upward; the stiffness
/// contribution is transformed by the rigid-section law u_c = u + theta x r.
struct SectionComponent {
    double area = 0.0;      // m^2
    double i_bend_z = 0.0;  // second moment for out-of-plane bending, m^4
    double i_bend_p = 0.0;  // second moment for in-plane bending, m^4
    double j_torsion = 0.0; // St Venant constant, m^4
    double z_offset = 0.0;  // centroid height above plate mid-plane, m
};

struct GrillageMember {
    int node0 = 0, node1 = 0;
    Axis dir = Axis::X;
    std::vector<SectionComponent> sections;
};

/// Plane grillage idealisation of a stiffened panel: a grid of 6-dof nodes
/// on the plate mid-plane (z = 0) joined by space-frame beams. Longitudinal
/// lines run along x on every division line, with composite plate+stiffener
/// sections on stiffener lines; transverse beams join neighbouring lines at
/// every station.
class GrillageModel {
public:
    GrillageModel(const PanelCase& pc, const GrillageMesh& mesh = {});

    const PanelCase& panel_case() const { return case_; }
    const GrillageMesh& mesh() const { return mesh_; }
    const std::vector<StructuralUnit>& units() const { return units_; }
    const std::vector<PhysicalEdge>& edges() const { return edges_; }

    const std::vector<double>& x_stations() const { return x_; }
    const std::vector<double>& y_lines() const { return y_; }
    int n_nodes() const { return static_cast<int>(x_.size() * y_.size()); }
    int n_dofs() const { return 6 * n_nodes(); }
    /// Node ids enumerate line-major: id = line * n_stations + station.
    int node_id(int line, int station) const {
        return line * static_cast<int>(x_.size()) + station;
    }
    Vec3 node_pos(int node) const;
    const std::vector<GrillageMember>& members() const { return members_; }
    /// Index into y_lines() of each stiffener line, one per stiffener.
    const std::vector<int>& stiffener_lines() const { return stiff_lines_; }

private:
    PanelCase case_;
    GrillageMesh mesh_;
    std::vector<StructuralUnit> units_;
    std::vector<PhysicalEdge> edges_;
    std::vector<double> x_, y_;
    std::vector<int> stiff_lines_;
    std::vector<GrillageMember> members_;
};

struct SolveOptions {
    double residual_tol = 1e-10;  // relative, against the load norm
    int refine_steps = 1;         // iterative refinement passes
};

/// Static solution: all nodal dofs (translations m, rotations rad) in node
/// order, plus the achieved relative residual.
struct GrillageSolution {
    std::vector<double> u;
    double residual_rel = 0.0;
    int constrained_dofs = 0;
};

/// Assembles and solves K u = f with the prescribed edge kinematics applied
/// at plate-plane boundary nodes. Throws NumericError naming the first
/// unconstrained rigid-body mode if the constraints cannot anchor the panel,
/// or reporting the residual if the factorisation fails the tolerance.
GrillageSolution solve_static(const GrillageModel& model, const SolveOptions& opts = {});

/// Samples the solved displacement state onto each structural unit's
/// 10x20 grid (displacements mm, stress proxy MPa). Web and flange points
/// follow the stiffener line by the rigid-section law.
std::vector<FieldGrid> extract_fields(const GrillageModel& model, const GrillageSolution& sol);

/// Convenience: build, solve and attach targets to the case.
PanelCase solve_case(PanelCase pc, const GrillageMesh& mesh = {}, const SolveOptions& opts = {});

}  // namespace hetpanel
