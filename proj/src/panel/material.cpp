#include "hetpanel/panel/material.hpp"

#include <cmath>
#include <string>

#include "hetpanel/core/error.hpp"

namespace hetpanel {

void MaterialLaw::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) {
            throw DomainError(std::string("material parameter '") + name +
                              "' must be positive, got " + std::to_string(v));
        }
    };
    positive(youngs_modulus_pa, "youngs_modulus_pa");
    positive(yield_stress_pa, "yield_stress_pa");
    positive(hardening_coeff_pa, "hardening_coeff_pa");
    positive(hardening_exponent, "hardening_exponent");
    if (!(plateau_strain >= 0.0)) {
        throw DomainError("material parameter 'plateau_strain' must be non-negative, got " +
                          std::to_string(plateau_strain));
    }
    if (!(poisson_ratio > -1.0 && poisson_ratio < 0.5)) {
        throw DomainError("material parameter 'poisson_ratio' must lie in (-1, 0.5), got " +
                          std::to_string(poisson_ratio));
    }
}

double ref_strain(const MaterialLaw& law) {
    return std::pow(law.yield_stress_pa / law.hardening_coeff_pa,
                    1.0 / law.hardening_exponent) -
           law.plateau_strain;
}

double flow_stress(const MaterialLaw& law, double plastic_strain) {
    if (!(plastic_strain >= 0.0)) {
        throw DomainError("flow_stress: plastic strain must be non-negative, got " +
                          std::to_string(plastic_strain));
    }
    if (plastic_strain <= law.plateau_strain) {
        return law.yield_stress_pa;
    }
    return law.hardening_coeff_pa *
           std::pow(ref_strain(law) + plastic_strain, law.hardening_exponent);
}

}  // namespace hetpanel
