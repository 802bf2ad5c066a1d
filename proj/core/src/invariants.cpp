#include "cdbundle/invariants.hpp"

#include <algorithm>
#include <cmath>

#include "cdbundle/error.hpp"

namespace cdbundle {

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

namespace {

Eigen::SelfAdjointEigenSolver<ComplexMatrix> checked_eigen(const ComplexMatrix& h, double floor,
                                                          const char* what) {
    if (h.rows() != h.cols()) {
        throw DimensionError(std::string(what) + ": matrix is not square");
    }
    const double scale = std::max(1.0, max_abs(h));
    if (hermitian_defect(h) > 1e-10 * scale) {
        throw DegeneracyError(std::string(what) + ": matrix is not Hermitian");
    }
    const ComplexMatrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
    if (es.info() != Eigen::Success) {
        throw DegeneracyError(std::string(what) + ": eigendecomposition failed");
    }
    if (es.eigenvalues().minCoeff() < floor) {
        throw DegeneracyError(std::string(what) + ": matrix is not positive definite");
    }
    return es;
}

ComplexMatrix real_power(const ComplexMatrix& h, double p, double floor, const char* what) {
    const auto es = checked_eigen(h, floor, what);
    Eigen::VectorXd vals = es.eigenvalues();
    for (Eigen::Index i = 0; i < vals.size(); ++i) vals(i) = std::pow(vals(i), p);
    return es.eigenvectors() * vals.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

ComplexMatrix psd_sqrt(const ComplexMatrix& h, double floor) { return real_power(h, 0.5, floor, "psd_sqrt"); }

ComplexMatrix psd_inv_sqrt(const ComplexMatrix& h, double floor) {
    return real_power(h, -0.5, floor, "psd_inv_sqrt");
}

namespace {

struct NormalizationFactors {
    ComplexMatrix root;
    MatrixPowerSeries2 left;   // K(z, 0)^{-1}
    MatrixPowerSeries2 right;  // K(0, w)^{-1}
};

NormalizationFactors factors(const MatrixPowerSeries2& k) {
    ComplexMatrix root;
    try {
        root = psd_sqrt(k(0, 0));
    } catch (const DegeneracyError& e) {
        throw DegeneracyError(std::string("normalize: a_00 ") + e.what());
    }
    MatrixPowerSeries2 left = series_invert(series_z_slice(k));
    MatrixPowerSeries2 right = series_adjoint(left);
    return {root, std::move(left), std::move(right)};
}

}  // namespace

MatrixPowerSeries2 normalize(const MatrixPowerSeries2& k) {
    const NormalizationFactors f = factors(k);
    const MatrixPowerSeries2 core = series_multiply(series_multiply(f.left, k), f.right);
    return series_scale(core, f.root, f.root);
}

ComplexMatrix tilde_a_closed(const MatrixPowerSeries2& k, TildeCoefficient which) {
    if (k.order() < 2) {
        throw TruncationError("tilde_a_closed: order must be at least 2");
    }
    const ComplexMatrix s = psd_inv_sqrt(k(0, 0));
    const ComplexMatrix inv = k(0, 0).inverse();
    const ComplexMatrix& a01 = k(0, 1);
    const ComplexMatrix& a02 = k(0, 2);
    const ComplexMatrix& a10 = k(1, 0);
    const ComplexMatrix& a11 = k(1, 1);
    const ComplexMatrix& a12 = k(1, 2);
    const ComplexMatrix& a20 = k(2, 0);
    const ComplexMatrix& a21 = k(2, 1);
    const ComplexMatrix& a22 = k(2, 2);

    const ComplexMatrix reduced11 = a11 - a10 * inv * a01;
    const ComplexMatrix reduced12 = a12 - reduced11 * inv * a01 - a10 * inv * a02;
    switch (which) {
        case TildeCoefficient::A11:
            return s * reduced11 * s;
        case TildeCoefficient::A12:
            return s * reduced12 * s;
        case TildeCoefficient::A22: {
            const ComplexMatrix inner = a22 + (a20 * inv * a01 - a21) * inv * a01 - a20 * inv * a02 -
                                        a10 * inv * reduced12;
            return s * inner * s;
        }
    }
    throw DomainError("tilde_a_closed: unknown coefficient");
}

ComplexMatrix tilde_a_general(const MatrixPowerSeries2& k, int kk, int ll) {
    if (kk < 0 || ll < 0) {
        throw DomainError("tilde_a_general: indices must be non-negative");
    }
    if (kk + 1 > k.order() || ll + 1 > k.order()) {
        throw TruncationError("tilde_a_general: order too small for the requested coefficient");
    }
    const NormalizationFactors f = factors(k);
    const int n = k.rank();
    auto b_s0 = [&](int s) -> const ComplexMatrix& { return f.left(s, 0); };
    auto b_0t = [&](int t) -> const ComplexMatrix& { return f.right(0, t); };

    ComplexMatrix acc = ComplexMatrix::Zero(n, n);
    for (int s = 1; s <= kk; ++s) {
        for (int t = 1; t <= ll; ++t) {
            acc += b_s0(s) * k(kk + 1 - s, ll + 1 - t) * b_0t(t);
        }
    }
    for (int s = 1; s <= kk; ++s) acc += b_s0(s) * k(kk + 1 - s, ll + 1) * b_0t(0);
    for (int t = 1; t <= ll; ++t) acc += b_s0(0) * k(kk + 1, ll + 1 - t) * b_0t(t);
    acc += b_s0(0) * k(kk + 1, ll + 1) * b_0t(0);
    acc -= b_s0(kk + 1) * k(0, 0) * b_0t(ll + 1);
    return f.root * acc * f.root;
}

PointInvariants invariants_at_zero(const MatrixPowerSeries2& k) {
    if (k.order() < 2) {
        throw TruncationError("invariants_at_zero: order must be at least 2");
    }
    const MatrixPowerSeries2 t = normalize(k);
    PointInvariants inv;
    inv.point = 0.0;
    inv.curvature = t(1, 1).transpose();
    inv.d_zbar = 2.0 * t(1, 2).transpose();
    inv.d_zzbar = 2.0 * (2.0 * t(2, 2) - t(1, 1) * t(1, 1)).transpose();
    inv.frame = Frame::OrthonormalAtPoint;
    return inv;
}

ComplexMatrix covd_zbar_n_at_zero(const MatrixPowerSeries2& k, int n) {
    if (n < 1) {
        throw DomainError("covd_zbar_n_at_zero: n must be positive");
    }
    if (k.order() < n + 1) {
        throw TruncationError("covd_zbar_n_at_zero: order must be at least n + 1");
    }
    const MatrixPowerSeries2 t = normalize(k);
    return rising_factorial(1.0, n + 1) * t(1, n + 1).transpose();
}

PointInvariants homogeneous_invariants_closed(double lambda, const std::vector<double>& mu, int m) {
    // Validates the parameters.
    (void)KernelSpec::homogeneous(lambda, mu, m);
    const TriangularData td = triangular_data(lambda, mu, m);
    const int n = m + 1;
    const ComplexMatrix b = td.B.cast<cplx>();
    const ComplexMatrix binv = td.d.cwiseInverse().cast<cplx>().asDiagonal();
    const ComplexMatrix broot = td.d.cwiseSqrt().cast<cplx>().asDiagonal();
    const ComplexMatrix dm = td.Dm.cast<cplx>();
    const ComplexMatrix s = canonical_shift(m);
    const ComplexMatrix sa = s.adjoint();
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);

    const ComplexMatrix conj_shift = binv * s * b;
    const ComplexMatrix a11 = conj_shift * sa - sa * conj_shift + (2.0 * lambda + m) * id - 2.0 * dm;
    const ComplexMatrix inner = 0.5 * (binv * s * s * b * sa * binv + sa * binv * s * s) +
                                binv * (dm * s - s * dm) - binv * s * b * sa * binv * s;
    const ComplexMatrix a12 = broot * inner * broot;

    PointInvariants inv;
    inv.curvature = a11.transpose();
    inv.d_zbar = 2.0 * a12.transpose();
    return inv;
}

CurvpValues homogeneous_m2_closed(double lambda, double mu1, double mu2) {
    const std::vector<double> mu{1.0, mu1, mu2};
    (void)KernelSpec::homogeneous(lambda, mu, 2);
    const TriangularData td = triangular_data(lambda, mu, 2);
    CurvpValues v;
    v.a = 2.0 * lambda;
    v.b = 1.0 / td.d(1);
    v.c = 4.0 * td.d(1) / td.d(2);
    v.curvature = ComplexMatrix::Zero(3, 3);
    v.curvature(0, 0) = v.a - v.b - 2.0;
    v.curvature(1, 1) = v.a + v.b - v.c;
    v.curvature(2, 2) = v.a + v.c + 2.0;
    const double c1 = -std::sqrt(v.b) * (1.0 + v.b - v.c / 2.0);
    const double c2 = -std::sqrt(v.c) * (1.0 + v.c - v.b / 2.0);
    v.d_zbar = 2.0 * shift_matrix({cplx(c1, 0.0), cplx(c2, 0.0)}).transpose();
    return v;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) {
    const ComplexMatrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym, Eigen::EigenvaluesOnly);
    std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> transport_eigenvalues(const PointInvariants& inv0, cplx z) {
    if (std::abs(z) >= 1.0) {
        throw DomainError("transport_eigenvalues: point outside the open unit disc");
    }
    const double scale = std::pow(1.0 - std::norm(z), -2.0);
    std::vector<double> eig = hermitian_eigenvalues(inv0.curvature);
    for (double& e : eig) e *= scale;
    return eig;
}

}  // namespace cdbundle
