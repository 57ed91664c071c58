#include <algorithm>
#include <cmath>
#include <vector>

#include "hetpanel/core/error.hpp"
#include "hetpanel/oracle/grillage.hpp"

namespace hetpanel {

namespace {

// Kinematic state of a grid line at one sample point: the six dofs plus the
// along-line derivatives needed for fiber strains. Everything in SI units.
struct LineState {
    double u1 = 0, u2 = 0, u3 = 0;
    double th1 = 0, th2 = 0, th3 = 0;
    double du_axial = 0;   // derivative of the along-line displacement
    double dth_twist = 0;  // twist rate
    double kappa_w = 0;    // second derivative of out-of-plane deflection
    double kappa_v = 0;    // second derivative of in-plane deflection
    double du_inplane = 0; // derivative of the in-plane transverse displacement
};

struct Hermite {
    double val, d1, d2;  // value and derivatives w.r.t. the physical coordinate
};

Hermite hermite(double s, double h, double f0, double g0, double f1, double g1) {
    const double s2 = s * s, s3 = s2 * s;
    Hermite out;
    out.val = (1 - 3 * s2 + 2 * s3) * f0 + (s - 2 * s2 + s3) * h * g0 +
              (3 * s2 - 2 * s3) * f1 + (-s2 + s3) * h * g1;
    out.d1 = ((-6 * s + 6 * s2) * f0 + (1 - 4 * s + 3 * s2) * h * g0 +
              (6 * s - 6 * s2) * f1 + (-2 * s + 3 * s2) * h * g1) / h;
    out.d2 = ((-6 + 12 * s) * f0 + (-4 + 6 * s) * h * g0 + (6 - 12 * s) * f1 +
              (-2 + 6 * s) * h * g1) / (h * h);
    return out;
}

int find_interval(const std::vector<double>& c, double v) {
    int i = static_cast<int>(std::upper_bound(c.begin(), c.end(), v) - c.begin()) - 1;
    return std::clamp(i, 0, static_cast<int>(c.size()) - 2);
}

class Sampler {
public:
    Sampler(const GrillageModel& model, const GrillageSolution& sol)
        : model_(model), u_(sol.u) {}

    // Longitudinal line (along x) on y-line `j`, sampled at x.
    LineState along_x(int j, double x) const {
        const auto& xs = model_.x_stations();
        const int i = find_interval(xs, x);
        const double h = xs[i + 1] - xs[i];
        const double s = (x - xs[i]) / h;
        const double* a = dof6(model_.node_id(j, i));
        const double* b = dof6(model_.node_id(j, i + 1));
        LineState st;
        // Out-of-plane deflection w = u3, slope dw/dx = -theta2.
        const Hermite w = hermite(s, h, a[2], -a[4], b[2], -b[4]);
        // In-plane deflection v = u2, slope dv/dx = +theta3.
        const Hermite v = hermite(s, h, a[1], a[5], b[1], b[5]);
        st.u3 = w.val;
        st.u2 = v.val;
        st.u1 = a[0] * (1 - s) + b[0] * s;
        st.th1 = a[3] * (1 - s) + b[3] * s;
        st.th2 = -w.d1;
        st.th3 = v.d1;
        st.du_axial = (b[0] - a[0]) / h;
        st.dth_twist = (b[3] - a[3]) / h;
        st.kappa_w = w.d2;
        st.kappa_v = v.d2;
        st.du_inplane = v.d1;
        return st;
    }

    // Transverse line (along y) at station `i`, sampled at y.
    LineState along_y(int i, double y) const {
        const auto& ys = model_.y_lines();
        const int j = find_interval(ys, y);
        const double h = ys[j + 1] - ys[j];
        const double s = (y - ys[j]) / h;
        const double* a = dof6(model_.node_id(j, i));
        const double* b = dof6(model_.node_id(j + 1, i));
        LineState st;
        // Along y: dw/dy = +theta1, in-plane x-displacement slope = -theta3.
        const Hermite w = hermite(s, h, a[2], a[3], b[2], b[3]);
        const Hermite v = hermite(s, h, a[0], -a[5], b[0], -b[5]);
        st.u3 = w.val;
        st.u1 = v.val;
        st.u2 = a[1] * (1 - s) + b[1] * s;
        st.th1 = w.d1;
        st.th2 = a[4] * (1 - s) + b[4] * s;
        st.th3 = -v.d1;
        st.du_axial = (b[1] - a[1]) / h;
        st.dth_twist = (b[4] - a[4]) / h;
        st.kappa_w = w.d2;
        st.kappa_v = v.d2;
        st.du_inplane = v.d1;
        return st;
    }

private:
    const double* dof6(int node) const { return u_.data() + 6 * node; }

    const GrillageModel& model_;
    const std::vector<double>& u_;
};

double mises_proxy(double sx, double sy) {
    return std::sqrt(sx * sx - sx * sy + sy * sy);
}

}  // namespace

std::vector<FieldGrid> extract_fields(const GrillageModel& model, const GrillageSolution& sol) {
    if (sol.u.size() != static_cast<size_t>(model.n_dofs())) {
        throw DomainError("extract_fields: solution has " + std::to_string(sol.u.size()) +
                          " dofs but the model expects " + std::to_string(model.n_dofs()));
    }
    const Sampler smp(model, sol);
    const PanelGeometry& g = model.panel_case().geometry;
    const MaterialLaw& mat = model.panel_case().material;
    const double E = mat.youngs_modulus_pa;
    const double tp = g.plate_thickness_mm * 1e-3;
    const double hw = g.web_height_mm * 1e-3;
    const auto& ys = model.y_lines();

    std::vector<FieldGrid> out;
    out.reserve(model.units().size());
    for (const StructuralUnit& unit : model.units()) {
        FieldGrid grid(unit.id);
        for (int row = 0; row < FieldGrid::kRows; ++row) {
            const double v = grid_coord(row, FieldGrid::kRows);
            for (int col = 0; col < FieldGrid::kCols; ++col) {
                const double uu = grid_coord(col, FieldGrid::kCols);
                const double x = uu * unit.rect.len_u + unit.rect.origin.x;
                double d1, d2, d3, sx, sy;
                if (unit.kind == UnitKind::plate_strip) {
                    const double y = unit.rect.origin.y + v * unit.rect.len_v;
                    const int j = find_interval(ys, y);
                    const double a = (y - ys[j]) / (ys[j + 1] - ys[j]);
                    const LineState lo = smp.along_x(j, x);
                    const LineState hi = smp.along_x(j + 1, x);
                    auto mix = [&](double p, double q) { return p * (1 - a) + q * a; };
                    d1 = mix(lo.u1, hi.u1);
                    d2 = mix(lo.u2, hi.u2);
                    d3 = mix(lo.u3, hi.u3);
                    sx = E * (mix(lo.du_axial, hi.du_axial) -
                              tp / 2 * mix(lo.kappa_w, hi.kappa_w));
                    // Transverse stress from the y-direction lines bracketing x.
                    const auto& xs = model.x_stations();
                    const int i = find_interval(xs, x);
                    const double ax = (x - xs[i]) / (xs[i + 1] - xs[i]);
                    const LineState ty0 = smp.along_y(i, y);
                    const LineState ty1 = smp.along_y(i + 1, y);
                    auto mixx = [&](double p, double q) { return p * (1 - ax) + q * ax; };
                    sy = E * (mixx(ty0.du_axial, ty1.du_axial) -
                              tp / 2 * mixx(ty0.kappa_w, ty1.kappa_w));
                } else {
                    const int line =
                        model.stiffener_lines()[static_cast<size_t>(unit.index_in_kind)];
                    const LineState st = smp.along_x(line, x);
                    if (unit.kind == UnitKind::web) {
                        const double z = v * unit.rect.len_v;
                        d1 = st.u1 + st.th2 * z;
                        d2 = st.u2 - st.th1 * z;
                        d3 = st.u3;
                        sx = E * (st.du_axial - z * st.kappa_w);
                        sy = 0.0;
                    } else {
                        const double yoff = (v - 0.5) * unit.rect.len_v;
                        d1 = st.u1 + st.th2 * hw - st.th3 * yoff;
                        d2 = st.u2 - st.th1 * hw;
                        d3 = st.u3 + st.th1 * yoff;
                        sx = E * (st.du_axial - hw * st.kappa_w - yoff * st.kappa_v);
                        sy = 0.0;
                    }
                }
                grid.at(Channel::u1, row, col) = d1 * 1e3;  // m -> mm
                grid.at(Channel::u2, row, col) = d2 * 1e3;
                grid.at(Channel::u3, row, col) = d3 * 1e3;
                grid.at(Channel::stress, row, col) = mises_proxy(sx, sy) * 1e-6;  // Pa -> MPa
            }
        }
        out.push_back(std::move(grid));
    }
    return out;
}

}  // namespace hetpanel
