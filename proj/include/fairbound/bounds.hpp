#pragma once

#include <vector>

namespace fairbound::bounds {

/// Inputs the accuracy bounds consume: class balance, group balance and
/// the three total-variation distances (global and per group).
struct BoundParams {
    double alpha = 0.0;      // P(Y=1)
    double beta = 0.0;       // P(Z=a)
    double dtv_global = 0.0; // d_TV(P1, P0)
    double dtv_a = 0.0;      // d_TV(P1^a, P0^a)
    double dtv_b = 0.0;      // d_TV(P1^b, P0^b)

    void validate() const; // every field in [0,1]
};

enum class Branch { T1, T2 };

const char* branch_name(Branch b);

struct EoBoundValue {
    double value = 0.0;
    Branch branch = Branch::T1;
};

/// max(1-alpha, alpha) + min(1-alpha, alpha) * dtv_global
double unconstrained_bound(double alpha, double dtv_global);

/// T1 = min(1-alpha,alpha)*dtv_b + beta*eps
/// T2 = min(1-alpha,alpha)*dtv_a + (1-beta)*eps
/// value = max(1-alpha,alpha) + min(T1,T2), capped at 1. Branch is the
/// argmin, T1 on ties.
EoBoundValue eo_bound(const BoundParams& params, double eps);

/// The tighter of the two valid upper bounds at eps.
double effective_bound(const BoundParams& params, double eps);

struct BoundCurve {
    std::vector<double> epsilons;
    std::vector<double> eo_bound_values;
    std::vector<Branch> active_branch;
    double unconstrained_value = 0.0;
};

/// Pointwise evaluation of eo_bound over an ascending grid.
BoundCurve bound_curve(const BoundParams& params, const std::vector<double>& eps_grid);

} // namespace fairbound::bounds
