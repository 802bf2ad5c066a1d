#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "cdbundle/equivalence.hpp"
#include "cdbundle/feasibility.hpp"
#include "cdbundle/invariants.hpp"
#include "cdbundle/kernels.hpp"
#include "cdbundle/oracle.hpp"
#include "support.hpp"

using namespace cdbundle;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double rel(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

PointInvariants series_at_zero(const KernelSpec& spec) { return invariants_at_zero(kernel_taylor(spec, 6)); }

ComplexMatrix diag(const std::vector<double>& v) {
    const auto n = static_cast<Eigen::Index>(v.size());
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = v[i];
    return m;
}

// Transpose of the weighted shift with the given subdiagonal weights.
ComplexMatrix shift_t(const std::vector<double>& c) {
    const auto n = static_cast<Eigen::Index>(c.size()) + 1;
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (Eigen::Index l = 1; l < n; ++l) m(l - 1, l) = c[l - 1];
    return m;
}

std::vector<cplx> polar_grid(int radii, int angles, double rmax) {
    std::vector<cplx> pts;
    for (int i = 1; i <= radii; ++i)
        for (int j = 0; j < angles; ++j)
            pts.push_back(std::polar(rmax * i / radii, 2.0 * std::numbers::pi * (j + 0.5 * i) / angles));
    return pts;
}

std::vector<Triple> random_feasible(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d1(0.05, 4.0), d2(0.05, 12.0), d3(0.05, 30.0);
    std::vector<Triple> out;
    while (static_cast<int>(out.size()) < count) {
        const Triple t{d1(rng), d2(rng), d3(rng)};
        if (feasibility(t, 1e-6).feasible) out.push_back(t);
    }
    return out;
}

Outcome bergman_field() {
    Outcome o;
    double worst = 0.0;
    const auto pts = polar_grid(10, 10, 0.7);
    for (double lambda : {1.0, 2.5}) {
        for (cplx z : pts) {
            const double want = lambda / std::pow(1.0 - std::norm(z), 2.0);
            worst = std::max(worst, rel(curvature_fd(KernelSpec::bergman(lambda), z)(0, 0).real(), want));
        }
    }
    o.require(worst <= 1e-5, "max rel error " + fmt(worst));
    o.detail = o.detail.empty() ? "200 points, max rel error " + fmt(worst) : o.detail;
    return o;
}

Outcome example_one() {
    Outcome o;
    const KernelSpec sum = KernelSpec::direct_sum({KernelSpec::bergman(1.0), KernelSpec::bergman(5.0)});
    const KernelSpec jet = KernelSpec::jet(1.0, 1.0, 1);
    std::vector<cplx> pts;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) pts.emplace_back(-0.5 + 0.25 * i, -0.5 + 0.25 * j);
    double worst = 0.0;
    for (cplx z : pts) {
        const auto a = curvature_eigenvalues_fd(sum, z), b = curvature_eigenvalues_fd(jet, z);
        for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, rel(a[k], b[k]));
    }
    o.require(worst <= 1e-5, "eigenvalue fields differ by " + fmt(worst));
    const auto i1 = series_at_zero(sum), i2 = series_at_zero(jet);
    const double z1 = max_abs(i1.d_zbar), z2 = max_abs(i2.d_zbar);
    o.require(z1 < 1e-12, "direct sum d_zbar(0) not zero: " + fmt(z1));
    o.require(z2 > 1e-6, "jet d_zbar(0) vanishes");
    const auto r = simultaneous_pair_equiv(i1, i2);
    o.require(r.verdict == Verdict::EigenvaluesMatchOnly, "verdict " + to_string(r.verdict));
    if (o.pass) o.detail = "eigen fields agree to " + fmt(worst) + "; |d_zbar| 0 vs " + fmt(z2) + "; EigenvaluesMatchOnly";
    return o;
}

Outcome relcur() {
    Outcome o;
    double series_gap = 0.0, oracle_gap = 0.0;
    std::string ledger;
    for (double alpha : {1.0, 2.0}) {
        for (double beta : {1.0, 2.0}) {
            const double bp = 1.5 * beta + 2.0;
            const KernelSpec k1 = KernelSpec::direct_sum({KernelSpec::bergman(alpha), KernelSpec::jet(alpha, bp, 1)});
            const KernelSpec k2 = KernelSpec::jet(alpha, beta, 2);
            const auto i1 = series_at_zero(k1), i2 = series_at_zero(k2);
            series_gap = std::max({series_gap, max_abs(i1.curvature - diag({alpha, alpha, alpha + 2.0 * bp + 2.0})),
                                   max_abs(i2.curvature - diag({alpha, alpha, alpha + 3.0 * beta + 6.0})),
                                   max_abs(i1.d_zbar - shift_t({0.0, -2.0 * std::sqrt(bp) * (bp + 1.0)})),
                                   max_abs(i2.d_zbar - shift_t({0.0, -3.0 * std::sqrt(2.0 * (beta + 1.0)) * (beta + 2.0)}))});
            const auto o1 = orthonormal_oracle_at(k1, 0.0), o2 = orthonormal_oracle_at(k2, 0.0);
            oracle_gap = std::max({oracle_gap, max_abs(o1.d_zzbar - i1.d_zzbar), max_abs(o2.d_zzbar - i2.d_zzbar)});

            // Printed variants of the (1,1) derivative against the computed diagonal.
            const double r1_plus = alpha + bp * (1.0 - bp) + 2.0, r1 = alpha + bp * (1.0 - bp);
            const ComplexMatrix a_with = 2.0 * diag({alpha, alpha + bp * (bp + 1.0), r1_plus});
            const ComplexMatrix a_without = 2.0 * diag({alpha, alpha + bp * (bp + 1.0), r1});
            const ComplexMatrix b_printed = diag({alpha, alpha + 3.0 * (beta + 1.0) * (beta + 2.0), alpha - 3.0 * beta * (beta + 2.0)});
            const bool a_plus_ok = max_abs(i1.d_zzbar - a_with) < 1e-8;
            const bool a_ok = max_abs(i1.d_zzbar - a_without) < 1e-8;
            const bool b_ok = max_abs(i2.d_zzbar - b_printed) < 1e-8;
            const bool b2_ok = max_abs(i2.d_zzbar - 2.0 * b_printed) < 1e-8;
            if (alpha == 1.0 && beta == 2.0) {
                ledger = std::string("sum: 2diag(..,+2) ") + (a_plus_ok ? "matches" : "differs") +
                         ", without +2 " + (a_ok ? "matches" : "differs") + "; jet: printed " +
                         (b_ok ? "matches" : "differs") + ", times 2 " + (b2_ok ? "matches" : "differs");
            }
        }
    }
    o.require(series_gap <= 1e-10, "series vs printed K, K_zbar gap " + fmt(series_gap));
    o.require(oracle_gap <= 1e-5, "oracle vs series K_zzbar gap " + fmt(oracle_gap));
    o.detail = (o.pass ? "series gap " + fmt(series_gap) + ", oracle gap " + fmt(oracle_gap) + "; " : o.detail + "; ") + ledger;
    return o;
}

Outcome example_two() {
    Outcome o;
    const double alpha = 1.0, beta = 2.0, bp = 5.0;
    const auto i1 = series_at_zero(KernelSpec::direct_sum({KernelSpec::bergman(alpha), KernelSpec::jet(alpha, bp, 1)}));
    const auto i2 = series_at_zero(KernelSpec::jet(alpha, beta, 2));
    const double eta_t = i1.d_zbar(1, 2).real(), eta = i2.d_zbar(1, 2).real();
    const double printed = (2.0 * std::sqrt(bp) * (bp + 1.0)) / (3.0 * std::sqrt(2.0 * (beta + 1.0)) * (beta + 2.0));
    const double want = std::sqrt(5.0 / 6.0);
    o.require(std::abs(eta_t / eta - want) < 1e-10, "series ratio " + fmt(eta_t / eta));
    o.require(std::abs(printed - want) < 1e-12, "printed ratio " + fmt(printed));
    const auto r = simultaneous_pair_equiv(i1, i2);
    o.require(r.verdict == Verdict::Equivalent,
              "pair verdict " + to_string(r.verdict) + " at " + r.certificate.level + " (" + r.certificate.reason + ")");
    const bool zz = zzbar_distinguishes(i1, i2);
    o.require(zz, "zzbar_distinguishes false");
    if (o.pass) o.detail = "ratio " + fmt(eta_t / eta) + " both ways; pair Equivalent; zzbar distinguishes";
    else o.detail += "; ratio " + fmt(eta_t / eta) + " both ways; zzbar distinguishes " + (zz ? "true" : "false");
    return o;
}

// d = L (1, mu1^2, mu2^2) for m = 2 with 2 lambda_j = 2 lambda - 2 + 2 j.
std::array<double, 3> weights(double lambda, double mu1, double mu2) {
    const double l0 = 2.0 * lambda - 2.0, l1 = 2.0 * lambda;
    return {1.0, 1.0 / l0 + mu1 * mu1, 2.0 / (l0 * (l0 + 1.0)) + 4.0 / l1 * mu1 * mu1 + mu2 * mu2};
}

Outcome curvp() {
    Outcome o;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> lam(1.05, 4.0), mu(0.2, 2.5);
    double series_gap = 0.0, oracle_gap = 0.0, min_norm = 1e300;
    for (int t = 0; t < 20; ++t) {
        const double lambda = lam(rng), mu1 = mu(rng), mu2 = mu(rng);
        const auto d = weights(lambda, mu1, mu2);
        const double a = 2.0 * lambda, b = 1.0 / d[1], c = 4.0 * d[1] / d[2];
        const ComplexMatrix k = diag({a - b - 2.0, a + b - c, a + c + 2.0});
        const ComplexMatrix dz = 2.0 * shift_t({-std::sqrt(b) * (1.0 + b - c / 2.0), -std::sqrt(c) * (1.0 + c - b / 2.0)});
        const KernelSpec spec = KernelSpec::homogeneous(lambda, {1.0, mu1, mu2}, 2);
        const auto s = series_at_zero(spec);
        const auto f = orthonormal_oracle_at(spec, 0.0);
        series_gap = std::max({series_gap, max_abs(s.curvature - k), max_abs(s.d_zbar - dz)});
        oracle_gap = std::max({oracle_gap, max_abs(f.curvature - k), max_abs(f.d_zbar - dz)});
        min_norm = std::min(min_norm, max_abs(s.d_zbar));
    }
    o.require(series_gap <= 1e-10, "series gap " + fmt(series_gap));
    o.require(oracle_gap <= 1e-5, "oracle gap " + fmt(oracle_gap));
    o.require(min_norm > 1e-6, "d_zbar(0) vanished");
    if (o.pass) o.detail = "series gap " + fmt(series_gap) + ", oracle gap " + fmt(oracle_gap) + ", min |d_zbar| " + fmt(min_norm);
    return o;
}

Outcome regions() {
    Outcome o;
    for (double d3 : {9.5, 10.5, 11.5}) {
        const Triple t{1.0, 2.0, d3};
        o.require(check_region(t, Region::Perm1).holds, "perm1 region fails at d3=" + fmt(d3));
        const auto pa = permutation_analysis(t);
        o.require(pa.feasible == std::vector<std::string>{"id", "rho"}, "feasible set at d3=" + fmt(d3));
    }
    for (double d1 : {0.25, 0.5, 0.75}) {
        const Triple t{d1, 7.5, 8.0};
        o.require(check_region(t, Region::Perm2).holds, "perm2 region fails at d1=" + fmt(d1));
        const auto pa = permutation_analysis(t);
        o.require(pa.feasible == std::vector<std::string>{"id", "tau"}, "feasible set at d1=" + fmt(d1));
    }
    int violations = 0;
    for (const Triple& t : random_feasible(6, 100)) {
        for (const auto& ord : orderings()) {
            if (ord.name == "id" || ord.name == "rho" || ord.name == "tau") continue;
            // Independent check: the permuted triple must fail one of the three linear clauses or mu2 > 0.
            const Triple p = permute(t, ord.sigma);
            const double a = (p[0] + p[1] + p[2]) / 3.0, b = (p[1] + p[2] - 2.0 * p[0] - 6.0) / 3.0,
                         c = (2.0 * p[2] - p[0] - p[1] - 6.0) / 3.0;
            const bool lin = a > 2.0 && b > 0.0 && c > 0.0 && p[0] > 0.0;
            const bool mu1 = lin && 1.0 / b - 1.0 / (a - 2.0) > 0.0;
            const bool mu2 = lin && 2.0 * (a - c) * (a - 1.0) + b * c > 0.0;
            if ((lin && mu1 && mu2) || feasibility(p).feasible) ++violations;
        }
    }
    o.require(violations == 0, std::to_string(violations) + " excluded orderings feasible");
    if (o.pass) o.detail = "reference triples in regions; sets {id,rho} and {id,tau}; 100 random triples exclude the rest";
    return o;
}

Outcome roundtrip() {
    Outcome o;
    double worst = 0.0;
    int partners = 0, bad_partners = 0;
    auto check_partner = [&](const Triple& t, const std::array<int, 3>& sigma) {
        const auto p = feasibility(t).params;
        const auto q = feasibility(permute(t, sigma)).params;
        if (!p || !q) return;
        ++partners;
        const double gap = std::abs(p->lambda - q->lambda) + std::abs(p->mu1_sq - q->mu1_sq) + std::abs(p->mu2_sq - q->mu2_sq);
        const auto r = full_report(homogeneous_from_params(*p), homogeneous_from_params(*q));
        if (gap < 1e-9 || r.verdict != Verdict::EigenvaluesMatchOnly || r.certificate.level != "(0,1)") ++bad_partners;
    };
    for (const Triple& t : random_feasible(7, 100)) {
        const auto p = *feasibility(t).params;
        const auto inv = series_at_zero(KernelSpec::homogeneous(p.lambda, {1.0, std::sqrt(p.mu1_sq), std::sqrt(p.mu2_sq)}, 2));
        worst = std::max(worst, max_abs(inv.curvature - diag({t[0], t[1], t[2]})));
        check_partner(t, {2, 1, 3});
        check_partner(t, {1, 3, 2});
    }
    for (double d3 : {9.5, 10.5, 11.5}) check_partner({1.0, 2.0, d3}, {2, 1, 3});
    for (double d1 : {0.25, 0.5, 0.75}) check_partner({d1, 7.5, 8.0}, {1, 3, 2});
    o.require(worst <= 1e-9, "roundtrip residual " + fmt(worst));
    o.require(bad_partners == 0, std::to_string(bad_partners) + " of " + std::to_string(partners) + " partners not separated at (0,1)");
    if (o.pass) o.detail = "roundtrip residual " + fmt(worst) + "; " + std::to_string(partners) + " partner pairs separated at (0,1)";
    return o;
}

Outcome rank_two() {
    Outcome o;
    int cases = 0;
    for (double gap : {1.9, 2.0, 2.1}) {
        for (double d1 : {0.1, 0.5, 1.0, 2.0, 5.0}) {
            const double d2 = d1 + gap;
            ++cases;
            const auto p = rank2_feasibility(d1, d2);
            o.require(p.has_value() == (gap > 2.0), "pair (" + fmt(d1) + "," + fmt(d2) + ")");
            o.require(!rank2_feasibility(d2, d1), "swapped pair (" + fmt(d2) + "," + fmt(d1) + ") feasible");
            if (p) {
                const auto inv = series_at_zero(KernelSpec::homogeneous(p->lambda, {1.0, std::sqrt(p->mu1_sq)}, 1));
                o.require(max_abs(inv.curvature - diag({d1, d2})) < 1e-9, "recovered kernel misses (" + fmt(d1) + "," + fmt(d2) + ")");
            }
        }
    }
    if (o.pass) o.detail = std::to_string(cases) + " pairs: feasible exactly when d2-d1>2; swaps infeasible";
    return o;
}

Outcome homogeneity() {
    Outcome o;
    const std::vector<KernelSpec> specs{
        KernelSpec::homogeneous(2.0, {1.0, 1.0, 1.0}, 2), KernelSpec::homogeneous(1.7, {1.0, 0.6, 1.3}, 2),
        KernelSpec::homogeneous(3.0, {1.0, 2.0, 0.5}, 2), KernelSpec::homogeneous(1.0, {1.0, 1.0}, 1),
        KernelSpec::homogeneous(0.8, {1.0, 0.3}, 1),
    };
    const auto pts = polar_grid(4, 5, 0.6);
    double worst = 0.0;
    for (const auto& spec : specs) {
        const auto e0 = hermitian_eigenvalues(series_at_zero(spec).curvature);
        for (cplx z : pts) {
            const auto e = curvature_eigenvalues_fd(spec, z);
            const double s = std::pow(1.0 - std::norm(z), -2.0);
            for (std::size_t i = 0; i < e.size(); ++i) worst = std::max(worst, rel(e[i], e0[i] * s));
        }
    }
    o.require(worst <= 1e-5, "max rel error " + fmt(worst));
    if (o.pass) o.detail = "5 specs x 20 points, max rel error " + fmt(worst);
    return o;
}

Outcome oracle_vs_series() {
    Outcome o;
    double worst = 0.0;
    for (const auto& spec : testing_support::zoo_fixtures()) {
        const auto s = invariants_at_zero(kernel_taylor(spec, 6));
        const auto f = orthonormal_oracle_at(spec, 0.0);
        worst = std::max({worst, max_abs(f.curvature - s.curvature), max_abs(f.d_zbar - s.d_zbar),
                          max_abs(f.d_zzbar - s.d_zzbar)});
    }
    o.require(worst <= 1e-5, "oracle gap " + fmt(worst));
    const KernelSpec b = KernelSpec::bergman(3.0);
    const double exact = 3.0 / (0.75 * 0.75);
    auto err = [&](double h) { return std::abs(curvature_fd(b, 0.5, FDConfig{h, FDScheme::Central, 1, 1.0})(0, 0).real() - exact); };
    const double ratio = err(8e-3) / err(4e-3);
    o.require(ratio >= 3.0 && ratio <= 5.0, "convergence ratio " + fmt(ratio));
    if (o.pass) o.detail = "zoo oracle gap " + fmt(worst) + "; central ratio " + fmt(ratio);
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"bergman curvature field", bergman_field},
        {"curvature does not decide equivalence", example_one},
        {"jet and direct-sum closed forms", relcur},
        {"first-derivative pair and (1,1) distinguisher", example_two},
        {"homogeneous m=2 closed forms", curvp},
        {"feasibility regions and exclusions", regions},
        {"roundtrip and partner separation", roundtrip},
        {"rank-2 feasibility boundary", rank_two},
        {"homogeneity scaling", homogeneity},
        {"oracle versus series", oracle_vs_series},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!out.pass) ++failures;
        std::printf("%s %2zu %s (%.2fs): %s\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs,
                    out.detail.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
