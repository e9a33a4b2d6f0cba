#include "fairbound/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>

#include "fairbound/divergence.hpp"
#include "fairbound/rng.hpp"

namespace fairbound::oracle {

using core::Group;

double DiscreteJoint::p_x(std::size_t x) const {
    return at(x, 0, Group::A) + at(x, 0, Group::B) + at(x, 1, Group::A) + at(x, 1, Group::B);
}

double DiscreteJoint::p_xy(std::size_t x, int y) const {
    return at(x, y, Group::A) + at(x, y, Group::B);
}

double DiscreteJoint::p_y(int y) const {
    double total = 0.0;
    for (std::size_t x = 0; x < support_size; ++x) total += p_xy(x, y);
    return total;
}

double DiscreteJoint::p_yz(int y, Group z) const {
    double total = 0.0;
    for (std::size_t x = 0; x < support_size; ++x) total += at(x, y, z);
    return total;
}

double DiscreteJoint::p_z(Group z) const { return p_yz(0, z) + p_yz(1, z); }

void DiscreteJoint::validate() const {
    if (support_size == 0) throw std::invalid_argument("joint has empty support");
    if (mass.size() != support_size * 4)
        throw std::invalid_argument("joint mass size does not match support");
    double total = 0.0;
    for (double m : mass) {
        if (m < 0.0) throw std::invalid_argument("joint mass must be nonnegative");
        total += m;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("joint masses must sum to 1");
}

namespace {

divergence::DiscretePmf conditional_given_y(const DiscreteJoint& joint, int y) {
    const double denom = joint.p_y(y);
    if (denom <= 0.0)
        throw std::runtime_error(std::string("conditional undefined: P(Y=") +
                                 std::to_string(y) + ") is zero");
    divergence::DiscretePmf pmf;
    pmf.masses.resize(joint.support_size);
    for (std::size_t x = 0; x < joint.support_size; ++x)
        pmf.masses[x] = joint.p_xy(x, y) / denom;
    return pmf;
}

divergence::DiscretePmf conditional_given_yz(const DiscreteJoint& joint, int y, Group z) {
    const double denom = joint.p_yz(y, z);
    if (denom <= 0.0)
        throw std::runtime_error(std::string("conditional undefined: P(Y=") +
                                 std::to_string(y) + ",Z=" + core::group_name(z) +
                                 ") is zero");
    divergence::DiscretePmf pmf;
    pmf.masses.resize(joint.support_size);
    for (std::size_t x = 0; x < joint.support_size; ++x)
        pmf.masses[x] = joint.at(x, y, z) / denom;
    return pmf;
}

} // namespace

bounds::BoundParams exact_params(const DiscreteJoint& joint) {
    joint.validate();
    bounds::BoundParams params;
    params.alpha = joint.p_y(1);
    params.beta = joint.p_z(Group::A);
    params.dtv_global =
        divergence::exact_tv_discrete(conditional_given_y(joint, 1), conditional_given_y(joint, 0));
    params.dtv_a = divergence::exact_tv_discrete(conditional_given_yz(joint, 1, Group::A),
                                                 conditional_given_yz(joint, 0, Group::A));
    params.dtv_b = divergence::exact_tv_discrete(conditional_given_yz(joint, 1, Group::B),
                                                 conditional_given_yz(joint, 0, Group::B));
    return params;
}

BayesResult bayes_classifier(const DiscreteJoint& joint) {
    joint.validate();
    BayesResult result;
    result.clf.q.resize(joint.support_size);
    double acc = 0.0;
    for (std::size_t x = 0; x < joint.support_size; ++x) {
        const double p1 = joint.p_xy(x, 1);
        const double p0 = joint.p_xy(x, 0);
        // phi(x) >= 1/2 iff P(x,1) >= P(x,0); points with P(x)=0 carry no
        // accuracy mass, decide 1 for definiteness
        result.clf.q[x] = p1 >= p0 ? 1.0 : 0.0;
        acc += std::max(p1, p0);
    }
    result.accuracy = acc;
    return result;
}

double bayes_accuracy_l1_form(const DiscreteJoint& joint) {
    joint.validate();
    double l1 = 0.0;
    for (std::size_t x = 0; x < joint.support_size; ++x)
        l1 += std::abs(joint.p_xy(x, 1) - joint.p_xy(x, 0));
    return 0.5 + 0.5 * l1;
}

double classifier_accuracy(const DiscreteJoint& joint, const RandomizedClassifier& clf) {
    if (clf.q.size() != joint.support_size)
        throw std::invalid_argument("classifier dimension does not match joint");
    double acc = 0.0;
    for (std::size_t x = 0; x < joint.support_size; ++x)
        acc += joint.p_xy(x, 1) * clf.q[x] + joint.p_xy(x, 0) * (1.0 - clf.q[x]);
    return acc;
}

double classifier_delta_eo(const DiscreteJoint& joint, const RandomizedClassifier& clf) {
    if (clf.q.size() != joint.support_size)
        throw std::invalid_argument("classifier dimension does not match joint");
    double worst = 0.0;
    for (int y = 0; y < 2; ++y) {
        double rate[2];
        for (Group z : {Group::A, Group::B}) {
            const double denom = joint.p_yz(y, z);
            if (denom <= 0.0)
                throw std::runtime_error(std::string("conditional undefined: P(Y=") +
                                         std::to_string(y) + ",Z=" + core::group_name(z) +
                                         ") is zero");
            double numer = 0.0;
            for (std::size_t x = 0; x < joint.support_size; ++x)
                numer += joint.at(x, y, z) * clf.q[x];
            rate[static_cast<int>(z)] = numer / denom;
        }
        worst = std::max(worst, std::abs(rate[0] - rate[1]));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Dense tableau simplex, Bland's rule.

LpSolution solve_lp(const LpInstance& lp, double tol, int max_pivots) {
    const std::size_t n = lp.objective.size();
    if (n == 0) throw std::invalid_argument("LP has no variables");

    // Normalize: all rows as <=, then append the box rows q_x <= 1.
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (const ConstraintRow& row : lp.rows) {
        if (row.coeffs.size() != n)
            throw std::invalid_argument("constraint row length mismatch");
        std::vector<double> coeffs = row.coeffs;
        double b = row.rhs;
        if (row.rel == Relation::GreaterEq) {
            for (double& c : coeffs) c = -c;
            b = -b;
        }
        if (b < 0.0)
            throw std::invalid_argument("LP rhs negative after normalization; "
                                        "slack basis would be infeasible");
        rows.push_back(std::move(coeffs));
        rhs.push_back(b);
    }
    for (std::size_t x = 0; x < n; ++x) {
        std::vector<double> box(n, 0.0);
        box[x] = 1.0;
        rows.push_back(std::move(box));
        rhs.push_back(1.0);
    }

    const std::size_t m = rows.size();
    // Tableau: m rows of [A | I | b], objective row below. Basis starts at
    // the slacks, which is feasible because rhs >= 0.
    const std::size_t width = n + m + 1;
    std::vector<std::vector<double>> tab(m + 1, std::vector<double>(width, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) tab[i][j] = rows[i][j];
        tab[i][n + i] = 1.0;
        tab[i][width - 1] = rhs[i];
    }
    for (std::size_t j = 0; j < n; ++j) tab[m][j] = -lp.objective[j];

    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

    LpSolution sol;
    for (;;) {
        // Bland: entering = lowest-index column with negative reduced cost
        std::size_t enter = width;
        for (std::size_t j = 0; j + 1 < width; ++j) {
            if (tab[m][j] < -tol) {
                enter = j;
                break;
            }
        }
        if (enter == width) break; // optimal

        // Ratio test; ties broken by smallest basis variable index (Bland)
        std::size_t leave = m;
        double best_ratio = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (tab[i][enter] > tol) {
                const double ratio = tab[i][width - 1] / tab[i][enter];
                if (leave == m || ratio < best_ratio - tol ||
                    (std::abs(ratio - best_ratio) <= tol && basis[i] < basis[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
        }
        if (leave == m)
            throw std::runtime_error("LP unbounded"); // cannot happen with the box rows

        // Pivot
        const double pivot = tab[leave][enter];
        for (double& v : tab[leave]) v /= pivot;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == leave) continue;
            const double factor = tab[i][enter];
            if (factor == 0.0) continue;
            for (std::size_t j = 0; j < width; ++j) tab[i][j] -= factor * tab[leave][j];
        }
        basis[leave] = enter;

        if (++sol.pivots > max_pivots)
            throw std::runtime_error("LP did not converge after " +
                                     std::to_string(sol.pivots) + " pivots");
    }

    sol.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) sol.x[basis[i]] = tab[i][width - 1];
    sol.objective = tab[m][width - 1];
    return sol;
}

FairOptimum optimal_fair_accuracy(const DiscreteJoint& joint, double eps, double lp_tol) {
    joint.validate();
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in [0,1]");
    const std::size_t k = joint.support_size;

    // Accuracy = (1-alpha) + sum_x (P(x,1) - P(x,0)) q_x: maximize the
    // linear part, add the constant back at the end.
    LpInstance lp;
    lp.objective.resize(k);
    for (std::size_t x = 0; x < k; ++x)
        lp.objective[x] = joint.p_xy(x, 1) - joint.p_xy(x, 0);

    // |rate(y,a) - rate(y,b)| <= eps, split into paired inequalities
    for (int y = 0; y < 2; ++y) {
        const double pa = joint.p_yz(y, Group::A);
        const double pb = joint.p_yz(y, Group::B);
        if (pa <= 0.0 || pb <= 0.0)
            throw std::runtime_error(std::string("conditional undefined: P(Y=") +
                                     std::to_string(y) + ",Z=" +
                                     (pa <= 0.0 ? "a" : "b") + ") is zero");
        ConstraintRow pos, neg;
        pos.coeffs.resize(k);
        neg.coeffs.resize(k);
        for (std::size_t x = 0; x < k; ++x) {
            const double diff = joint.at(x, y, Group::A) / pa - joint.at(x, y, Group::B) / pb;
            pos.coeffs[x] = diff;
            neg.coeffs[x] = -diff;
        }
        pos.rhs = eps;
        neg.rhs = eps;
        lp.rows.push_back(std::move(pos));
        lp.rows.push_back(std::move(neg));
    }

    const LpSolution sol = solve_lp(lp, lp_tol);
    FairOptimum out;
    out.clf.q = sol.x;
    for (double& v : out.clf.q) v = std::clamp(v, 0.0, 1.0);
    out.accuracy = sol.objective + joint.p_y(0);
    return out;
}

// ---------------------------------------------------------------------------
// Fixtures and serialization

DiscreteJoint random_joint(std::uint64_t seed, std::size_t k, const JointSkew& skew) {
    if (k < 2) throw std::invalid_argument("joint support must have at least 2 points");
    SeededRng rng(seed);

    const double alpha = skew.alpha ? *skew.alpha : rng.next_uniform(0.2, 0.8);
    const double beta_target = skew.beta ? *skew.beta : rng.next_uniform(0.2, 0.8);
    // Split beta across the two label slices; keep every cell away from 0
    // unless alpha itself is degenerate.
    const double eta = skew.symmetric ? beta_target
                                      : std::clamp(beta_target + rng.next_uniform(-0.15, 0.15),
                                                   0.05, 0.95);
    // Solve alpha*eta + (1-alpha)*gamma = beta for gamma when possible.
    double gamma = eta;
    if (alpha < 1.0) {
        gamma = std::clamp((beta_target - alpha * eta) / (1.0 - alpha), 0.05, 0.95);
    }

    // Cell conditionals P(x | y, z).
    std::array<std::array<std::vector<double>, 2>, 2> cond; // [y][z]
    auto draw_pmf = [&]() {
        std::vector<double> pmf(k);
        double total = 0.0;
        for (double& v : pmf) {
            v = 0.05 + rng.next_unit();
            total += v;
        }
        for (double& v : pmf) v /= total;
        return pmf;
    };
    for (int y = 0; y < 2; ++y) {
        cond[y][0] = draw_pmf();
        if (skew.symmetric) {
            cond[y][1] = cond[y][0];
        } else {
            std::vector<double> other = draw_pmf();
            // disparity 0 reproduces group a exactly; 1 is an independent draw
            for (std::size_t x = 0; x < k; ++x)
                other[x] = (1.0 - skew.disparity) * cond[y][0][x] + skew.disparity * other[x];
            cond[y][1] = other;
        }
    }

    const double cell_mass[2][2] = {{(1.0 - alpha) * gamma, (1.0 - alpha) * (1.0 - gamma)},
                                    {alpha * eta, alpha * (1.0 - eta)}};
    DiscreteJoint joint(k);
    for (std::size_t x = 0; x < k; ++x)
        for (int y = 0; y < 2; ++y)
            for (Group z : {Group::A, Group::B})
                joint.at(x, y, z) = cell_mass[y][static_cast<int>(z)] *
                                    cond[y][static_cast<int>(z)][x];
    return joint;
}

void save_joint(const DiscreteJoint& joint, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "x,y,z,mass\n";
    char buf[64];
    for (std::size_t x = 0; x < joint.support_size; ++x) {
        for (int y = 0; y < 2; ++y) {
            for (Group z : {Group::A, Group::B}) {
                std::snprintf(buf, sizeof(buf), "%.17g", joint.at(x, y, z));
                out << x << ',' << y << ',' << core::group_name(z) << ',' << buf << '\n';
            }
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

DiscreteJoint load_joint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "x,y,z,mass")
        throw std::runtime_error("bad joint file header in " + path);

    std::vector<std::tuple<std::size_t, int, int, double>> entries;
    std::size_t max_x = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string xs, ys, zs, ms;
        if (!std::getline(ss, xs, ',') || !std::getline(ss, ys, ',') ||
            !std::getline(ss, zs, ',') || !std::getline(ss, ms))
            throw std::runtime_error("bad joint row: " + line);
        const std::size_t x = std::stoul(xs);
        const int y = std::stoi(ys);
        int z;
        if (zs == "a")
            z = 0;
        else if (zs == "b")
            z = 1;
        else
            throw std::runtime_error("bad group value in joint row: " + line);
        entries.emplace_back(x, y, z, std::stod(ms));
        max_x = std::max(max_x, x);
    }
    DiscreteJoint joint(max_x + 1);
    for (const auto& [x, y, z, m] : entries)
        joint.at(x, y, static_cast<Group>(z)) = m;
    return joint;
}

} // namespace fairbound::oracle
