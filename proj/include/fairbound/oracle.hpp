#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairbound/bounds.hpp"
#include "fairbound/core.hpp"

namespace fairbound::oracle {

/// Exact finite joint distribution P(x, y, z) with x in {0..K-1},
/// y in {0,1}, z in {a,b}. Everything the theorems talk about is
/// computable in closed form here.
struct DiscreteJoint {
    std::size_t support_size = 0;
    std::vector<double> mass; // K*2*2, indexed by (x, y, z)

    explicit DiscreteJoint(std::size_t k = 0)
        : support_size(k), mass(k * 4, 0.0) {}

    double& at(std::size_t x, int y, core::Group z) {
        return mass[(x * 2 + static_cast<std::size_t>(y)) * 2 + static_cast<std::size_t>(z)];
    }
    double at(std::size_t x, int y, core::Group z) const {
        return mass[(x * 2 + static_cast<std::size_t>(y)) * 2 + static_cast<std::size_t>(z)];
    }

    double p_x(std::size_t x) const;
    double p_xy(std::size_t x, int y) const;
    double p_y(int y) const;
    double p_yz(int y, core::Group z) const;
    double p_z(core::Group z) const;

    // masses >= 0 and total = 1 within 1e-12
    void validate() const;
};

/// Per-point probability of deciding 1; the feasible set the bounds
/// quantify over.
struct RandomizedClassifier {
    std::vector<double> q; // componentwise in [0,1]
};

/// alpha, beta and the three exact TV distances of the joint. Throws if a
/// required conditional has zero mass.
bounds::BoundParams exact_params(const DiscreteJoint& joint);

struct BayesResult {
    RandomizedClassifier clf; // q in {0,1}^K
    double accuracy = 0.0;    // sum_x P(x) max(phi, 1-phi)
};

/// Decides 1 wherever P(Y=1|x) >= 1/2.
BayesResult bayes_classifier(const DiscreteJoint& joint);

/// Second route to the Bayes accuracy: 1/2 + (1/2) sum_x |P(x,1) - P(x,0)|.
/// Kept separate from bayes_classifier so the two can check each other.
double bayes_accuracy_l1_form(const DiscreteJoint& joint);

/// sum_x [P(x,1) q_x + P(x,0) (1 - q_x)]
double classifier_accuracy(const DiscreteJoint& joint, const RandomizedClassifier& clf);

/// Exact population Delta_EO of the randomized classifier.
double classifier_delta_eo(const DiscreteJoint& joint, const RandomizedClassifier& clf);

// ---------------------------------------------------------------------------
// LP over randomized classifiers

enum class Relation { LessEq, GreaterEq };

struct ConstraintRow {
    std::vector<double> coeffs;
    Relation rel = Relation::LessEq;
    double rhs = 0.0;
};

/// max objective . q subject to the rows and the box q in [0,1]^K.
struct LpInstance {
    std::vector<double> objective;
    std::vector<ConstraintRow> rows;
};

struct LpSolution {
    std::vector<double> x;
    double objective = 0.0;
    int pivots = 0;
};

/// Dense tableau simplex with Bland's rule. Requires nonnegative rhs after
/// normalizing GreaterEq rows, so the slack basis is feasible.
LpSolution solve_lp(const LpInstance& lp, double tol = 1e-10, int max_pivots = 100000);

struct FairOptimum {
    double accuracy = 0.0;
    RandomizedClassifier clf;
};

/// Best achievable accuracy of any randomized classifier with
/// Delta_EO <= eps, solved exactly as a K-variable LP.
FairOptimum optimal_fair_accuracy(const DiscreteJoint& joint, double eps, double lp_tol = 1e-10);

// ---------------------------------------------------------------------------
// Fixture generation and serialization

struct JointSkew {
    std::optional<double> alpha; // exact class-balance target
    std::optional<double> beta;  // group-balance target
    double disparity = 1.0;      // 0 = identical group conditionals
    bool symmetric = false;      // mirror the two groups exactly
};

/// Seeded random joint with all four (y,z) cells positive unless alpha is
/// pinned to 0 or 1. Deterministic per seed.
DiscreteJoint random_joint(std::uint64_t seed, std::size_t k, const JointSkew& skew = {});

/// Plain-text tabular dump, one row per (x,y,z) with mass.
void save_joint(const DiscreteJoint& joint, const std::string& path);
DiscreteJoint load_joint(const std::string& path);

} // namespace fairbound::oracle
