#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cdbundle/kernels.hpp"

namespace cdbundle {

using Triple = std::array<double, 3>;

struct LedgerEntry {
    std::string name;
    double lhs;  // evaluated left-hand side; the clause is lhs > threshold
    double threshold;
    bool pass;
};

struct HomogeneousParams {
    double lambda;
    double mu1_sq;
    double mu2_sq;
};

struct FeasibilityResult {
    Triple delta{};
    Triple abc{};
    std::optional<HomogeneousParams> params;
    std::vector<LedgerEntry> checks;
    bool feasible = false;
};

// Solves A (a, b, c)^t = (d1 + 2, d2, d3 - 2)^t for A = [[1,-1,0],[1,1,-1],[1,0,1]].
Triple triple_to_abc(const Triple& delta);

// Absent unless lambda > 1 and b, c, mu1^2, mu2^2 are all positive; b = 0 or c = 0 throws DegeneracyError.
std::optional<HomogeneousParams> abc_to_params(double a, double b, double c);

// Every clause is strict: lhs > threshold + margin.
FeasibilityResult feasibility(const Triple& delta, double margin = 0.0);

enum class Region { Base, Perm1, Perm2 };

struct RegionCheck {
    bool holds = false;
    std::vector<LedgerEntry> clauses;
};

RegionCheck check_region(const Triple& delta, Region region, double margin = 0.0);

struct Ordering {
    std::string name;
    std::array<int, 3> sigma;  // 1-based images
};

// id, rho = (2,1,3), tau = (1,3,2), then the three remaining orderings.
const std::array<Ordering, 6>& orderings();

Triple permute(const Triple& delta, const std::array<int, 3>& sigma);

struct PermutationAnalysis {
    Triple delta{};
    bool base_holds = false;
    std::array<FeasibilityResult, 6> results;
    std::vector<std::string> feasible;  // names of feasible orderings, in orderings() order
    bool exclusion_holds = false;       // no ordering outside {id, rho, tau} is feasible
};

PermutationAnalysis permutation_analysis(const Triple& delta, double margin = 0.0);

struct Rank2Params {
    double lambda;
    double b;
    double mu1_sq;
};

std::optional<Rank2Params> rank2_feasibility(double d1, double d2);

KernelSpec homogeneous_from_params(const HomogeneousParams& p);
KernelSpec homogeneous_from_params(const Rank2Params& p);

// Max abs deviation of the series-path curvature at 0 from diag(delta); throws DomainError if infeasible.
double roundtrip_check(const Triple& delta);
double rank2_roundtrip_check(double d1, double d2);

}  // namespace cdbundle
