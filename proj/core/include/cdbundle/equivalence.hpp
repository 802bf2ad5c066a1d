#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cdbundle/invariants.hpp"
#include "cdbundle/kernels.hpp"

namespace cdbundle {

enum class Verdict { Equivalent, EigenvaluesMatchOnly, Distinct };

std::string to_string(Verdict v);

struct EquivTolerances {
    double zero = 1e-9;        // structural zero threshold
    double residual = 1e-8;    // intertwining residual
    double unitarity = 1e-10;  // |U*U - I|
    double eig = 1e-7;         // eigenvalue matching
};

struct Certificate {
    std::string level;   // "(0,0)", "(0,1)", "(1,1)"; empty on success
    std::string reason;
    std::vector<std::pair<std::string, double>> values;
};

struct EquivalenceReport {
    Verdict verdict = Verdict::Distinct;
    std::optional<ComplexMatrix> witness;
    Certificate certificate;
    bool homogeneous = false;
    std::string scope;
};

// Sorted eigenvalue comparison of Hermitian matrices.
bool eig_multiset_equal(const ComplexMatrix& h1, const ComplexMatrix& h2, double tol = 1e-7);

// max |U A - B U|
double intertwining_residual(const ComplexMatrix& u, const ComplexMatrix& a, const ComplexMatrix& b);

struct IntertwinerResult {
    bool found = false;
    ComplexMatrix witness;
    int failed_level = -1;  // 0: curvature spectra, r >= 1: r-th derivative matrix
    std::string reason;
    std::vector<std::pair<std::string, double>> values;
};

// Unitary U with U K1 = K2 U and U D1[r] = D2[r] U for every r, for diagonal K and rank <= 3.
IntertwinerResult find_intertwiner(const ComplexMatrix& k1, const ComplexMatrix& k2,
                                   const std::vector<ComplexMatrix>& d1, const std::vector<ComplexMatrix>& d2,
                                   const EquivTolerances& tol = {});

// Decides U curvature_1 = curvature_2 U together with U d_zbar_1 = d_zbar_2 U.
EquivalenceReport simultaneous_pair_equiv(const PointInvariants& inv1, const PointInvariants& inv2,
                                          const EquivTolerances& tol = {});

// True iff no unitary intertwining the curvature and d_zbar also intertwines d_zzbar;
// with a candidate, tests that single unitary.
bool zzbar_distinguishes(const PointInvariants& inv1, const PointInvariants& inv2,
                         const std::optional<ComplexMatrix>& candidate = std::nullopt,
                         const EquivTolerances& tol = {});

// Diagonal d_zzbar entries compared as multisets, with no reference to lower orders.
bool zzbar_multisets_differ(const PointInvariants& inv1, const PointInvariants& inv2, double tol = 1e-7);

EquivalenceReport full_report(const KernelSpec& spec1, const KernelSpec& spec2, int order = 6,
                              const EquivTolerances& tol = {});

}  // namespace cdbundle
