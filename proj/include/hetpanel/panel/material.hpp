#pragma once

namespace hetpanel {

/// Elastic-plastic steel described by an initial yield plateau followed by
/// power-law work hardening. Stresses in Pa, strains dimensionless.
struct MaterialLaw {
    double youngs_modulus_pa = 200e9;
    double poisson_ratio = 0.3;
    double yield_stress_pa = 355e6;
    double hardening_coeff_pa = 530e6;   // K
    double hardening_exponent = 0.26;    // n
    double plateau_strain = 0.006;       // eps_L

    void validate() const;

    double shear_modulus_pa() const {
        return youngs_modulus_pa / (2.0 * (1.0 + poisson_ratio));
    }
};

/// Reference strain (sigma0/K)^(1/n) - eps_L; makes the flow curve continuous
/// at the plateau boundary.
double ref_strain(const MaterialLaw& law);

/// Flow stress at a given plastic strain: the yield plateau below eps_L,
/// power-law hardening above it.
double flow_stress(const MaterialLaw& law, double plastic_strain);

}  // namespace hetpanel
