#include <gtest/gtest.h>

#include <random>

#include "cdbundle/error.hpp"
#include "cdbundle/invariants.hpp"
#include "cdbundle/kernels.hpp"
#include "cdbundle/oracle.hpp"
#include "support.hpp"

using namespace cdbundle;

namespace {

double relative(const ComplexMatrix& got, const ComplexMatrix& want) {
    return max_abs(got - want) / std::max(1.0, max_abs(want));
}

}  // namespace

TEST(Oracle, MetricIsTransposedDiagonalKernel) {
    const auto spec = KernelSpec::jet(1.0, 2.0, 2);
    const cplx z(0.3, -0.2);
    EXPECT_LT(max_abs(metric_at(spec, z) - kernel_evaluate(spec, z, z).transpose()), 1e-15);
    EXPECT_NEAR(metric_at(KernelSpec::bergman(2.0), 0.5)(0, 0).real(), 1.0 / (0.75 * 0.75), 1e-13);
    EXPECT_THROW(metric_at(spec, 1.0), DomainError);
    const ComplexMatrixLD ld = metric_field(spec)(cplxld(z));
    EXPECT_LT(max_abs(ld.cast<cplx>() - metric_at(spec, z)), 1e-13);
}

TEST(Oracle, BergmanCurvatureValue) {
    const ComplexMatrix c = curvature_fd(KernelSpec::bergman(3.0), 0.5);
    EXPECT_NEAR(c(0, 0).real(), 3.0 / (0.75 * 0.75), 1e-8);
    EXPECT_NEAR(c(0, 0).imag(), 0.0, 1e-8);
}

TEST(Oracle, JetCurvatureMatchesTransport) {
    const auto spec = KernelSpec::jet(1.0, 1.0, 1);
    const cplx z(0.3, 0.0);
    const auto want = transport_eigenvalues(invariants_at_zero(kernel_taylor(spec, 3)), z);
    const auto got = curvature_eigenvalues_fd(spec, z);
    ASSERT_EQ(got.size(), 2u);
    for (int i = 0; i < 2; ++i) EXPECT_NEAR(got[i], want[i], 1e-7 * want[i]);
}

TEST(Oracle, ConstantMetricIsFlat) {
    ComplexMatrixLD h0(2, 2);
    h0 << cplxld(2.0L), cplxld(0.5L, 0.25L), cplxld(0.5L, -0.25L), cplxld(1.0L);
    const MetricField flat = [h0](cplxld) { return h0; };
    const OracleResult r = oracle_at(flat, cplx(0.2, 0.1), FDConfig{}, OracleDepth::Zzbar);
    EXPECT_LT(max_abs(r.curvature), 1e-12);
    EXPECT_LT(max_abs(r.d_zbar), 1e-12);
    EXPECT_LT(max_abs(r.d_zzbar), 1e-12);
}

TEST(Oracle, ConstantFrameChangeConjugatesCurvature) {
    const auto spec = KernelSpec::jet(1.0, 2.0, 1);
    ComplexMatrix a(2, 2);
    a << cplx(1.0, 0.2), cplx(0.3, 0.0), cplx(-0.4, 0.1), cplx(1.5, 0.0);
    const ComplexMatrixLD ald = a.cast<cplxld>();
    const MetricField base = metric_field(spec);
    const MetricField moved = [&](cplxld z) -> ComplexMatrixLD { return ald * base(z) * ald.adjoint(); };
    const cplx z(0.25, -0.1);
    const ComplexMatrix c = oracle_at(base, z, FDConfig{}, OracleDepth::Curvature).curvature;
    const ComplexMatrix cm = oracle_at(moved, z, FDConfig{}, OracleDepth::Curvature).curvature;
    const ComplexMatrix ai = a.adjoint().inverse();
    EXPECT_LT(relative(cm, ai * c * a.adjoint()), 1e-8);
}

TEST(Oracle, OrthonormalFrameAtZeroMatchesSeries) {
    for (const auto& spec : testing_support::zoo_fixtures()) {
        const auto inv = invariants_at_zero(kernel_taylor(spec, 4));
        const OracleResult r = orthonormal_oracle_at(spec, 0.0);
        EXPECT_LT(relative(r.curvature, inv.curvature), 1e-7) << kernel_spec_to_json(spec);
        EXPECT_LT(relative(r.d_zbar, inv.d_zbar), 1e-6) << kernel_spec_to_json(spec);
        EXPECT_LT(relative(r.d_zzbar, inv.d_zzbar), 1e-5) << kernel_spec_to_json(spec);
        const OracleResult c = orthonormal_oracle_at(spec, 0.0, FDConfig::central());
        EXPECT_LT(relative(c.curvature, inv.curvature), 1e-3) << kernel_spec_to_json(spec);
        EXPECT_LT(relative(c.d_zzbar, inv.d_zzbar), 1e-3) << kernel_spec_to_json(spec);
    }
}

TEST(Oracle, RawFrameHelpersAgreeWithOrthonormalOracle) {
    const auto spec = KernelSpec::homogeneous(2.0, {1.0, 1.0, 1.0}, 2);
    const cplx z(-0.15, 0.2);
    const ComplexMatrix h0 = metric_at(spec, z);
    const OracleResult r = orthonormal_oracle_at(spec, z);
    EXPECT_LT(relative(to_orthonormal_frame(curvature_fd(spec, z), h0), r.curvature), 1e-9);
    EXPECT_LT(relative(to_orthonormal_frame(covd_zbar_fd(spec, z), h0), r.d_zbar), 1e-9);
    EXPECT_LT(relative(to_orthonormal_frame(covd_zzbar_fd(spec, z), h0), r.d_zzbar), 1e-9);
}

TEST(Oracle, CentralSchemeConvergesQuadratically) {
    const auto spec = KernelSpec::bergman(3.0);
    const double exact = 3.0 / (0.75 * 0.75);
    auto err = [&](double h) {
        const FDConfig cfg{h, FDScheme::Central, 1, 1.0};
        return std::abs(curvature_fd(spec, 0.5, cfg)(0, 0).real() - exact);
    };
    const double ratio = err(8e-3) / err(4e-3);
    EXPECT_GE(ratio, 3.0);
    EXPECT_LE(ratio, 5.0);
}

TEST(Oracle, SweepIsDeterministicAcrossThreadCounts) {
    const auto spec = KernelSpec::jet(1.0, 2.0, 2);
    std::vector<cplx> pts;
    for (int i = 0; i < 17; ++i) pts.emplace_back(0.04 * i - 0.3, 0.02 * i - 0.1);
    const auto one = curvature_eigen_sweep(spec, pts, FDConfig{}, 1);
    const auto many = curvature_eigen_sweep(spec, pts, FDConfig{}, 5);
    ASSERT_EQ(one.size(), pts.size());
    EXPECT_EQ(one, many);
    for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_EQ(one[i], curvature_eigenvalues_fd(spec, pts[i]));
}

TEST(Oracle, ConfigValidation) {
    EXPECT_NO_THROW(validate(FDConfig{}));
    EXPECT_NO_THROW(validate(FDConfig::central()));
    EXPECT_THROW(validate(FDConfig{0.0, FDScheme::Central, 1, 4.0}), DomainError);
    EXPECT_THROW(validate(FDConfig{0.5, FDScheme::Central, 1, 4.0}), DomainError);
    EXPECT_THROW(validate(FDConfig{1e-4, FDScheme::Richardson, 0, 8.0}), DomainError);
    EXPECT_THROW(validate(FDConfig{1e-4, FDScheme::Richardson, 4, 0.5}), DomainError);
    EXPECT_NEAR(order_step(FDConfig{}, 3), 1e-4 * 64.0, 1e-18);
    EXPECT_THROW(curvature_fd(KernelSpec::bergman(1.0), cplx(0.9999, 0.0)), DomainError);
}

TEST(Oracle, BergmanCurvatureTransformsByCocycle) {
    for (double lambda : {1.0, 2.5}) {
        const auto spec = KernelSpec::bergman(lambda);
        for (cplx a : {cplx(0.2, 0.0), cplx(0.0, 0.5)}) {
            const MobiusMap phi = make_mobius(1.0, a);
            const MobiusMap inv = mobius_inverse(phi);
            for (cplx z : {cplx(0.1, 0.2), cplx(-0.3, 0.05), cplx(0.0, -0.4)}) {
                const double lhs = curvature_fd(spec, z)(0, 0).real();
                const double rhs = std::norm(cocycle_c(phi, z)) * curvature_fd(spec, mobius_apply(inv, z))(0, 0).real();
                EXPECT_NEAR(lhs, rhs, 1e-5 * std::abs(lhs));
            }
        }
    }
}
