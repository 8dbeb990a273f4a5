#include "mtjsc/cost.hpp"

#include <stdexcept>

#include "mtjsc/errors.hpp"

namespace mtjsc::cost {

void CostProfile::validate() const {
    if (!(e_cyc > 0.0) || !(t_cyc > 0.0)) {
        throw ConfigError("cost profile '" + label + "' needs positive e_cyc and t_cyc");
    }
    if (n_cmos < 0.0) throw ConfigError("cost profile '" + label + "' has negative n_cmos");
}

Totals totals(const CostProfile& p) {
    const double n = static_cast<double>(p.n_cyc);
    // nJ -> uJ and ns -> us.
    return {p.e_cyc * n * 1e-3, p.t_cyc * n * 1e-3};
}

double compare(const CostProfile& a, const CostProfile& b) {
    const double eb = totals(b).energy_uj;
    if (!(eb > 0.0)) throw std::invalid_argument("reference profile has zero energy");
    return totals(a).energy_uj / eb;
}

CostProfile simulated_profile(const RunAccounting& run, std::string label) {
    if (run.bitstream_length == 0) throw std::invalid_argument("run has zero cycles");
    CostProfile p;
    p.label = std::move(label);
    p.e_cyc = run.sbg_energy / static_cast<double>(run.bitstream_length);
    p.t_cyc = run.t_cyc;
    p.n_cyc = run.bitstream_length;
    p.n_cmos = static_cast<double>(run.transistors_per_sbg * run.m + run.m * run.n_prime) / 1e3;
    return p;
}

}  // namespace mtjsc::cost
