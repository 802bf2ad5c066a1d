#include "cdbundle/feasibility.hpp"

#include <algorithm>
#include <cmath>

#include "cdbundle/error.hpp"
#include "cdbundle/invariants.hpp"

namespace cdbundle {

Triple triple_to_abc(const Triple& d) {
    return {(d[0] + d[1] + d[2]) / 3.0, (d[1] + d[2] - 2.0 * d[0] - 6.0) / 3.0,
            (2.0 * d[2] - d[0] - d[1] - 6.0) / 3.0};
}

namespace {

double mu2_numerator(double a, double b, double c) { return 2.0 * (a - c) * (a - 1.0) + b * c; }

LedgerEntry clause(std::string name, double lhs, double threshold, double margin) {
    return {std::move(name), lhs, threshold, lhs > threshold + margin};
}

bool all_pass(const std::vector<LedgerEntry>& v) {
    return std::all_of(v.begin(), v.end(), [](const LedgerEntry& e) { return e.pass; });
}

std::vector<LedgerEntry> base_clauses(const Triple& d, double margin) {
    const Triple x = triple_to_abc(d);
    return {
        clause("sum>6", d[0] + d[1] + d[2], 6.0, margin),
        clause("mix1>6", d[1] + d[2] - 2.0 * d[0], 6.0, margin),
        clause("mix2>6", 2.0 * d[2] - d[0] - d[1], 6.0, margin),
        clause("mu2_pos", mu2_numerator(x[0], x[1], x[2]), 0.0, margin),
        clause("delta1_pos", d[0], 0.0, margin),
    };
}

}  // namespace

std::optional<HomogeneousParams> abc_to_params(double a, double b, double c) {
    if (b == 0.0 || c == 0.0) throw DegeneracyError("abc_to_params: b and c must be nonzero");
    const double lambda = a / 2.0;
    if (!(lambda > 1.0) || !(b > 0.0) || !(c > 0.0)) return std::nullopt;
    const double d1 = 1.0 / b;
    HomogeneousParams p;
    p.lambda = lambda;
    p.mu1_sq = d1 - 1.0 / (2.0 * (lambda - 1.0));
    p.mu2_sq = mu2_numerator(a, b, c) / (b * c * lambda * (a - 1.0));
    if (!(p.mu1_sq > 0.0) || !(p.mu2_sq > 0.0)) return std::nullopt;
    return p;
}

FeasibilityResult feasibility(const Triple& delta, double margin) {
    FeasibilityResult r;
    r.delta = delta;
    r.abc = triple_to_abc(delta);
    r.checks = base_clauses(delta, margin);
    r.feasible = all_pass(r.checks);
    if (r.feasible) {
        r.params = abc_to_params(r.abc[0], r.abc[1], r.abc[2]);
        // Rounding at the edge of a clause can still push a parameter to zero.
        if (!r.params) r.feasible = false;
    }
    return r;
}

RegionCheck check_region(const Triple& d, Region region, double margin) {
    RegionCheck out;
    switch (region) {
        case Region::Base:
            out.clauses = base_clauses(d, margin);
            break;
        case Region::Perm1:
            out.clauses = {
                clause("2(d1+d2)>d3-6", 2.0 * (d[0] + d[1]) - (d[2] - 6.0), 0.0, margin),
                clause("d3-6>2d1-d2", (d[2] - 6.0) - (2.0 * d[0] - d[1]), 0.0, margin),
                clause("d3-6>2d2-d1", (d[2] - 6.0) - (2.0 * d[1] - d[0]), 0.0, margin),
                clause("d1!=d2", std::abs(d[0] - d[1]), 0.0, margin),
            };
            break;
        case Region::Perm2:
            out.clauses = {
                clause("d3>d2", d[2] - d[1], 0.0, margin),
                clause("d2>3+d3/2", d[1] - (3.0 + d[2] / 2.0), 0.0, margin),
                clause("d1<2d3-d2-6", (2.0 * d[2] - d[1] - 6.0) - d[0], 0.0, margin),
                clause("d1<2d2-d3-6", (2.0 * d[1] - d[2] - 6.0) - d[0], 0.0, margin),
            };
            break;
    }
    out.holds = all_pass(out.clauses);
    return out;
}

const std::array<Ordering, 6>& orderings() {
    static const std::array<Ordering, 6> table{{
        {"id", {1, 2, 3}},
        {"rho", {2, 1, 3}},
        {"tau", {1, 3, 2}},
        {"sigma_321", {3, 2, 1}},
        {"sigma_231", {2, 3, 1}},
        {"sigma_312", {3, 1, 2}},
    }};
    return table;
}

Triple permute(const Triple& delta, const std::array<int, 3>& sigma) {
    return {delta[sigma[0] - 1], delta[sigma[1] - 1], delta[sigma[2] - 1]};
}

PermutationAnalysis permutation_analysis(const Triple& delta, double margin) {
    PermutationAnalysis pa;
    pa.delta = delta;
    pa.base_holds = check_region(delta, Region::Base, margin).holds;
    pa.exclusion_holds = true;
    for (std::size_t i = 0; i < orderings().size(); ++i) {
        const Ordering& o = orderings()[i];
        pa.results[i] = feasibility(permute(delta, o.sigma), margin);
        if (pa.results[i].feasible) {
            pa.feasible.push_back(o.name);
            if (i >= 3) pa.exclusion_holds = false;
        }
    }
    return pa;
}

std::optional<Rank2Params> rank2_feasibility(double d1, double d2) {
    if (!(d1 > 0.0) || !(d2 > 0.0) || !(d2 - d1 > 2.0)) return std::nullopt;
    Rank2Params p;
    p.lambda = (d1 + d2) / 4.0;
    p.b = (d2 - d1 - 2.0) / 2.0;
    p.mu1_sq = 1.0 / p.b - 1.0 / (2.0 * p.lambda - 1.0);
    if (!(p.mu1_sq > 0.0)) return std::nullopt;
    return p;
}

KernelSpec homogeneous_from_params(const HomogeneousParams& p) {
    return KernelSpec::homogeneous(p.lambda, {1.0, std::sqrt(p.mu1_sq), std::sqrt(p.mu2_sq)}, 2);
}

KernelSpec homogeneous_from_params(const Rank2Params& p) {
    return KernelSpec::homogeneous(p.lambda, {1.0, std::sqrt(p.mu1_sq)}, 1);
}

namespace {

double diagonal_residual(const KernelSpec& spec, const std::vector<double>& target) {
    const PointInvariants inv = invariants_at_zero(kernel_taylor(spec, 3));
    double worst = 0.0;
    for (Eigen::Index i = 0; i < inv.curvature.rows(); ++i)
        for (Eigen::Index j = 0; j < inv.curvature.cols(); ++j) {
            const cplx want = i == j ? cplx(target[i], 0.0) : cplx(0.0, 0.0);
            worst = std::max(worst, std::abs(inv.curvature(i, j) - want));
        }
    return worst;
}

}  // namespace

double roundtrip_check(const Triple& delta) {
    const FeasibilityResult r = feasibility(delta);
    if (!r.feasible) throw DomainError("roundtrip_check: triple is not feasible");
    return diagonal_residual(homogeneous_from_params(*r.params), {delta[0], delta[1], delta[2]});
}

double rank2_roundtrip_check(double d1, double d2) {
    const auto p = rank2_feasibility(d1, d2);
    if (!p) throw DomainError("rank2_roundtrip_check: pair is not feasible");
    return diagonal_residual(homogeneous_from_params(*p), {d1, d2});
}

}  // namespace cdbundle
