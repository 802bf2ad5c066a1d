#pragma once

#include <functional>
#include <vector>

#include "cdbundle/kernels.hpp"
#include "cdbundle/series.hpp"

namespace cdbundle {

enum class FDScheme { Central, Richardson };

struct FDConfig {
    double step = 1e-4;  // first-derivative step
    FDScheme scheme = FDScheme::Richardson;
    int levels = 4;  // Romberg columns over h, h/2, h/4, ...
    double order_growth = 8.0;  // step multiplier per extra derivative order

    // Single-step central differences tuned for order-4 partials.
    static FDConfig central() { return {5e-6, FDScheme::Central, 1, 4.0}; }
};

void validate(const FDConfig& cfg);

// Step actually used for partial derivatives of total order k (k >= 1).
double order_step(const FDConfig& cfg, int k);

using MetricField = std::function<ComplexMatrixLD(cplxld)>;

enum class OracleDepth { Curvature, Zbar, Zzbar };

// Raw-frame quantities at a point; derivatives not requested by the depth are left empty.
struct OracleResult {
    ComplexMatrix metric;
    ComplexMatrix curvature;
    ComplexMatrix d_zbar;
    ComplexMatrix d_zzbar;
};

// h(z) = K(z, z)^t
ComplexMatrix metric_at(const KernelSpec& spec, cplx z);
MetricField metric_field(const KernelSpec& spec);

OracleResult oracle_at(const MetricField& h, cplx z, const FDConfig& cfg, OracleDepth depth);
OracleResult oracle_at(const KernelSpec& spec, cplx z, const FDConfig& cfg, OracleDepth depth);

ComplexMatrix curvature_fd(const KernelSpec& spec, cplx z, const FDConfig& cfg = {});
ComplexMatrix covd_zbar_fd(const KernelSpec& spec, cplx z, const FDConfig& cfg = {});
ComplexMatrix covd_zzbar_fd(const KernelSpec& spec, cplx z, const FDConfig& cfg = {});

// h0^{1/2} M h0^{-1/2}: the frame f h0^{-1/2} is orthonormal at the point.
ComplexMatrix to_orthonormal_frame(const ComplexMatrix& m, const ComplexMatrix& h0);

// All three invariants at z in the orthonormal frame at z.
OracleResult orthonormal_oracle_at(const KernelSpec& spec, cplx z, const FDConfig& cfg = {});

// Ascending real parts of the raw-frame curvature eigenvalues.
std::vector<double> curvature_eigenvalues_fd(const KernelSpec& spec, cplx z, const FDConfig& cfg = {});

// Concurrent sweep; results are in input order regardless of scheduling.
std::vector<std::vector<double>> curvature_eigen_sweep(const KernelSpec& spec, const std::vector<cplx>& points,
                                                       const FDConfig& cfg = {}, unsigned threads = 0);

}  // namespace cdbundle
