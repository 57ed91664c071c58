#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "hetpanel/core/error.hpp"
#include "hetpanel/oracle/grillage.hpp"

namespace hetpanel {

namespace {

constexpr double kTol = 1e-9;

using Mat12 = Eigen::Matrix<double, 12, 12>;
using Mat3 = Eigen::Matrix3d;

// Standard 3-d frame element in local coordinates: axial, torsion and
// bending about both principal axes.
Mat12 frame_local(double E, double G, double L, const SectionComponent& s) {
    Mat12 k = Mat12::Zero();
    const double ea = E * s.area / L;
    const double gj = G * s.j_torsion / L;
    const double iy = s.i_bend_z;  // bending about local y -> deflection in z
    const double iz = s.i_bend_p;  // bending about local z -> in-plane deflection
    const double L2 = L * L, L3 = L2 * L;

    k(0, 0) = ea; k(0, 6) = -ea; k(6, 6) = ea;
    k(3, 3) = gj; k(3, 9) = -gj; k(9, 9) = gj;

    k(1, 1) = 12 * E * iz / L3;
    k(1, 5) = 6 * E * iz / L2;
    k(1, 7) = -12 * E * iz / L3;
    k(1, 11) = 6 * E * iz / L2;
    k(5, 5) = 4 * E * iz / L;
    k(5, 7) = -6 * E * iz / L2;
    k(5, 11) = 2 * E * iz / L;
    k(7, 7) = 12 * E * iz / L3;
    k(7, 11) = -6 * E * iz / L2;
    k(11, 11) = 4 * E * iz / L;

    k(2, 2) = 12 * E * iy / L3;
    k(2, 4) = -6 * E * iy / L2;
    k(2, 8) = -12 * E * iy / L3;
    k(2, 10) = -6 * E * iy / L2;
    k(4, 4) = 4 * E * iy / L;
    k(4, 8) = 6 * E * iy / L2;
    k(4, 10) = 2 * E * iy / L;
    k(8, 8) = 12 * E * iy / L3;
    k(8, 10) = 6 * E * iy / L2;
    k(10, 10) = 4 * E * iy / L;

    for (int i = 0; i < 12; ++i) {
        for (int j = 0; j < i; ++j) k(i, j) = k(j, i);
    }
    return k;
}

// Rigid offset of the section centroid above the node line, in local
// coordinates (offset along local z): u_centroid = u_node - [r]x theta.
Mat12 offset_transform(double zc) {
    Mat12 a = Mat12::Identity();
    if (zc != 0.0) {
        // [r]x for r = (0,0,zc)
        Mat3 rx = Mat3::Zero();
        rx(0, 1) = -zc;
        rx(1, 0) = zc;
        a.block<3, 3>(0, 3) = -rx;
        a.block<3, 3>(6, 9) = -rx;
    }
    return a;
}

Mat12 rotation(Axis dir) {
    Mat3 r;  // rows: local x, y, z in global coordinates
    if (dir == Axis::X) {
        r << 1, 0, 0, 0, 1, 0, 0, 0, 1;
    } else {
        r << 0, 1, 0, -1, 0, 0, 0, 0, 1;
    }
    Mat12 out = Mat12::Zero();
    for (int b = 0; b < 4; ++b) out.block<3, 3>(3 * b, 3 * b) = r;
    return out;
}

double profile_at(const Profile& p, double t) {
    const double s = std::clamp(t, 0.0, 1.0) * (kProfileSamples - 1);
    const int i0 = std::min(static_cast<int>(std::floor(s)), kProfileSamples - 2);
    const double f = s - i0;
    return p[i0] * (1.0 - f) + p[i0 + 1] * f;
}

struct RigidMode {
    const char* name;
    // Value of the mode at (position, dof).
    double (*value)(const Vec3&, int);
};

const std::array<RigidMode, 6> kRigidModes = {{
    {"translation along x", [](const Vec3&, int d) { return d == 0 ? 1.0 : 0.0; }},
    {"translation along y", [](const Vec3&, int d) { return d == 1 ? 1.0 : 0.0; }},
    {"translation along z", [](const Vec3&, int d) { return d == 2 ? 1.0 : 0.0; }},
    {"rotation about x",
     [](const Vec3& p, int d) {
         switch (d) {
             case 1: return -p.z;
             case 2: return p.y;
             case 3: return 1.0;
             default: return 0.0;
         }
     }},
    {"rotation about y",
     [](const Vec3& p, int d) {
         switch (d) {
             case 0: return p.z;
             case 2: return -p.x;
             case 4: return 1.0;
             default: return 0.0;
         }
     }},
    {"rotation about z",
     [](const Vec3& p, int d) {
         switch (d) {
             case 0: return -p.y;
             case 1: return p.x;
             case 5: return 1.0;
             default: return 0.0;
         }
     }},
}};

}  // namespace

GrillageSolution solve_static(const GrillageModel& model, const SolveOptions& opts) {
    if (!(opts.residual_tol > 0.0)) {
        throw DomainError("solve_static: residual tolerance must be positive, got " +
                          std::to_string(opts.residual_tol));
    }
    const PanelCase& pc = model.panel_case();
    const MaterialLaw& mat = pc.material;
    const double E = mat.youngs_modulus_pa;
    const double G = mat.shear_modulus_pa();
    const int ndof = model.n_dofs();

    // --- prescribed dofs from plate-plane boundary edges, first edge wins ---
    std::map<int, double> prescribed;
    for (size_t ei = 0; ei < model.edges().size(); ++ei) {
        const PhysicalEdge& e = model.edges()[ei];
        const EdgeBC& bc = pc.edge_bcs[ei];
        if (!e.on_panel_boundary) continue;
        if (std::abs(e.p0.z) > kTol || std::abs(e.p1.z) > kTol) continue;
        bool any = false;
        for (bool k : bc.known) any = any || k;
        if (!any) continue;
        const Vec3 d = e.p1 - e.p0;
        const double len2 = d.dot(d);
        for (int n = 0; n < model.n_nodes(); ++n) {
            const Vec3 p = model.node_pos(n);
            const double t = (p - e.p0).dot(d) / len2;
            if (t < -kTol || t > 1.0 + kTol) continue;
            const Vec3 foot = e.p0 + d * t;
            if ((p - foot).norm() > kTol) continue;
            for (int dof = 0; dof < kNumDofs; ++dof) {
                if (!bc.known[dof]) continue;
                const double raw = profile_at(bc.profiles[dof], std::clamp(t, 0.0, 1.0));
                const double val = dof < 3 ? raw * 1e-3 : raw;  // mm -> m
                prescribed.emplace(n * 6 + dof, val);
            }
        }
    }
    if (prescribed.empty()) {
        throw NumericError(
            "grillage system is unconstrained: no boundary dof is prescribed on any "
            "plate-plane edge");
    }

    // --- rigid-body mode screening ---
    for (const RigidMode& mode : kRigidModes) {
        double support = 0.0;
        for (const auto& [gdof, val] : prescribed) {
            (void)val;
            const Vec3 p = model.node_pos(gdof / 6);
            support = std::max(support, std::abs(mode.value(p, gdof % 6)));
        }
        if (support < 1e-9) {
            throw NumericError(std::string("grillage system is unconstrained: rigid-body ") +
                               mode.name + " is unrestrained by the prescribed boundary dofs");
        }
    }

    // --- external loads ---
    Eigen::VectorXd f = Eigen::VectorXd::Zero(ndof);
    auto add_force = [&](int node, const Vec3& F, const Vec3& r) {
        f[node * 6 + 0] += F.x;
        f[node * 6 + 1] += F.y;
        f[node * 6 + 2] += F.z;
        const Vec3 m = r.cross(F);
        f[node * 6 + 3] += m.x;
        f[node * 6 + 4] += m.y;
        f[node * 6 + 5] += m.z;
    };
    const auto& xs = model.x_stations();
    const auto& ys = model.y_lines();
    auto trib = [](const std::vector<double>& c, int i) {
        const int n = static_cast<int>(c.size());
        const double lo = i == 0 ? c[0] : 0.5 * (c[i - 1] + c[i]);
        const double hi = i + 1 == n ? c[n - 1] : 0.5 * (c[i] + c[i + 1]);
        return std::pair<double, double>(lo, hi);
    };
    const PanelGeometry& g = pc.geometry;
    for (size_t ui = 0; ui < model.units().size(); ++ui) {
        const StructuralUnit& u = model.units()[ui];
        const Profile& q = pc.loads[ui].samples;
        bool nonzero = false;
        for (double v : q) nonzero = nonzero || v != 0.0;
        if (!nonzero) continue;
        if (u.kind == UnitKind::plate_strip) {
            const double y0 = u.rect.origin.y, y1 = y0 + u.rect.len_v;
            for (int j = 0; j < static_cast<int>(ys.size()); ++j) {
                if (ys[j] < y0 - kTol || ys[j] > y1 + kTol) continue;
                auto [ylo, yhi] = trib(ys, j);
                const double dy = std::min(yhi, y1) - std::max(ylo, y0);
                if (dy <= 0.0) continue;
                for (int i = 0; i < static_cast<int>(xs.size()); ++i) {
                    auto [xlo, xhi] = trib(xs, i);
                    const double qv = profile_at(q, xs[i] / g.length_m);
                    add_force(model.node_id(j, i), Vec3{0, 0, qv * dy * (xhi - xlo)}, {});
                }
            }
        } else {
            const int line = model.stiffener_lines()[static_cast<size_t>(u.index_in_kind)];
            const double hw = g.web_height_mm * 1e-3;
            const Vec3 nrm = u.rect.normal();
            for (int i = 0; i < static_cast<int>(xs.size()); ++i) {
                auto [xlo, xhi] = trib(xs, i);
                const double qv = profile_at(q, xs[i] / g.length_m);
                const double area = (xhi - xlo) * u.rect.len_v;
                const Vec3 F = nrm * (qv * area);
                const Vec3 r = u.kind == UnitKind::web ? Vec3{0, 0, hw / 2.0}
                                                       : Vec3{0, 0, hw};
                add_force(model.node_id(line, i), F, r);
            }
        }
    }

    // --- assembly ---
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(model.members().size() * 144);
    for (const GrillageMember& m : model.members()) {
        const Vec3 p0 = model.node_pos(m.node0), p1 = model.node_pos(m.node1);
        const double L = (p1 - p0).norm();
        Mat12 k_node = Mat12::Zero();
        for (const SectionComponent& s : m.sections) {
            const Mat12 a = offset_transform(s.z_offset);
            k_node += a.transpose() * frame_local(E, G, L, s) * a;
        }
        const Mat12 r = rotation(m.dir);
        const Mat12 kg = r.transpose() * k_node * r;
        const std::array<int, 12> map = {m.node0 * 6,     m.node0 * 6 + 1, m.node0 * 6 + 2,
                                         m.node0 * 6 + 3, m.node0 * 6 + 4, m.node0 * 6 + 5,
                                         m.node1 * 6,     m.node1 * 6 + 1, m.node1 * 6 + 2,
                                         m.node1 * 6 + 3, m.node1 * 6 + 4, m.node1 * 6 + 5};
        for (int a = 0; a < 12; ++a) {
            for (int b = 0; b < 12; ++b) {
                if (kg(a, b) != 0.0) trips.emplace_back(map[a], map[b], kg(a, b));
            }
        }
    }

    // --- partition into free / constrained ---
    std::vector<int> free_index(static_cast<size_t>(ndof), -1);
    int nfree = 0;
    for (int d = 0; d < ndof; ++d) {
        if (prescribed.find(d) == prescribed.end()) free_index[static_cast<size_t>(d)] = nfree++;
    }
    Eigen::VectorXd uc = Eigen::VectorXd::Zero(ndof);
    for (const auto& [d, v] : prescribed) uc[d] = v;

    Eigen::VectorXd b(nfree);
    for (int d = 0; d < ndof; ++d) {
        if (free_index[static_cast<size_t>(d)] >= 0) b[free_index[static_cast<size_t>(d)]] = f[d];
    }
    std::vector<Eigen::Triplet<double>> ff;
    ff.reserve(trips.size());
    for (const auto& t : trips) {
        const int fr = free_index[static_cast<size_t>(t.row())];
        const int fc = free_index[static_cast<size_t>(t.col())];
        if (fr >= 0 && fc >= 0) {
            ff.emplace_back(fr, fc, t.value());
        } else if (fr >= 0) {
            b[fr] -= t.value() * uc[t.col()];
        }
    }
    Eigen::SparseMatrix<double> K(nfree, nfree);
    K.setFromTriplets(ff.begin(), ff.end());
    K.makeCompressed();

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    solver.compute(K);
    if (solver.info() != Eigen::Success) {
        throw NumericError("grillage factorisation failed (matrix not positive definite); "
                           "the constraint pattern leaves an internal mechanism");
    }
    Eigen::VectorXd x = solver.solve(b);
    const double bnorm = std::max(b.norm(), 1.0);
    double res = (K * x - b).norm() / bnorm;
    for (int pass = 0; pass < opts.refine_steps && res > opts.residual_tol; ++pass) {
        const Eigen::VectorXd dr = b - K * x;
        x += solver.solve(dr);
        res = (K * x - b).norm() / bnorm;
    }
    if (!x.allFinite()) {
        throw NumericError("grillage solution contains non-finite values");
    }
    if (res > opts.residual_tol) {
        throw NumericError("grillage solve did not reach the residual tolerance: relative "
                           "residual " + std::to_string(res) + " > " +
                           std::to_string(opts.residual_tol));
    }

    GrillageSolution sol;
    sol.u.assign(static_cast<size_t>(ndof), 0.0);
    for (int d = 0; d < ndof; ++d) {
        const int fi = free_index[static_cast<size_t>(d)];
        sol.u[static_cast<size_t>(d)] = fi >= 0 ? x[fi] : uc[d];
    }
    sol.residual_rel = res;
    sol.constrained_dofs = static_cast<int>(prescribed.size());
    return sol;
}

PanelCase solve_case(PanelCase pc, const GrillageMesh& mesh, const SolveOptions& opts) {
    GrillageModel model(pc, mesh);
    const GrillageSolution sol = solve_static(model, opts);
    pc.targets = extract_fields(model, sol);
    return pc;
}

}  // namespace hetpanel
