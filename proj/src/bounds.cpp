#include "fairbound/bounds.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace fairbound::bounds {

namespace {

void check_unit(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument(std::string(name) + " must lie in [0,1]");
}

} // namespace

void BoundParams::validate() const {
    check_unit(alpha, "alpha");
    check_unit(beta, "beta");
    check_unit(dtv_global, "dtv_global");
    check_unit(dtv_a, "dtv_a");
    check_unit(dtv_b, "dtv_b");
}

const char* branch_name(Branch b) { return b == Branch::T1 ? "T1" : "T2"; }

double unconstrained_bound(double alpha, double dtv_global) {
    check_unit(alpha, "alpha");
    check_unit(dtv_global, "dtv_global");
    return std::max(1.0 - alpha, alpha) + std::min(1.0 - alpha, alpha) * dtv_global;
}

EoBoundValue eo_bound(const BoundParams& params, double eps) {
    params.validate();
    check_unit(eps, "eps");
    const double lead = std::min(1.0 - params.alpha, params.alpha);
    const double t1 = lead * params.dtv_b + params.beta * eps;
    const double t2 = lead * params.dtv_a + (1.0 - params.beta) * eps;
    EoBoundValue out;
    out.branch = t1 <= t2 ? Branch::T1 : Branch::T2;
    const double raw = std::max(1.0 - params.alpha, params.alpha) + std::min(t1, t2);
    out.value = std::min(raw, 1.0); // accuracy cannot exceed 1
    return out;
}

double effective_bound(const BoundParams& params, double eps) {
    return std::min(unconstrained_bound(params.alpha, params.dtv_global),
                    eo_bound(params, eps).value);
}

BoundCurve bound_curve(const BoundParams& params, const std::vector<double>& eps_grid) {
    if (eps_grid.empty()) throw std::invalid_argument("empty epsilon grid");
    for (std::size_t i = 1; i < eps_grid.size(); ++i)
        if (!(eps_grid[i] > eps_grid[i - 1]))
            throw std::invalid_argument("epsilon grid must be strictly ascending");

    BoundCurve curve;
    curve.epsilons = eps_grid;
    curve.eo_bound_values.reserve(eps_grid.size());
    curve.active_branch.reserve(eps_grid.size());
    for (double eps : eps_grid) {
        const EoBoundValue v = eo_bound(params, eps);
        curve.eo_bound_values.push_back(v.value);
        curve.active_branch.push_back(v.branch);
    }
    curve.unconstrained_value = unconstrained_bound(params.alpha, params.dtv_global);
    return curve;
}

} // namespace fairbound::bounds
