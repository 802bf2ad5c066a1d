#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "cdbundle/kernels.hpp"
#include "cdbundle/series.hpp"

namespace testing_support {

using cdbundle::ComplexMatrix;
using cdbundle::cplx;
using cdbundle::KernelSpec;
using cdbundle::MatrixPowerSeries2;

// a_{kl} = (2 pi i)^{-2} oint oint K(z, w) z^{-k-1} conj(w)^{-l-1}, rectangle rule on |z| = |w| = r.
inline MatrixPowerSeries2 cauchy_coefficients(const std::function<ComplexMatrix(cplx, cplx)>& k, int rank,
                                              int order, double r = 0.4, int m = 48) {
    MatrixPowerSeries2 out(rank, order);
    std::vector<cplx> nodes(m);
    for (int j = 0; j < m; ++j) nodes[j] = std::polar(r, 2.0 * std::numbers::pi * j / m);
    std::vector<std::vector<ComplexMatrix>> vals(m, std::vector<ComplexMatrix>(m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) vals[a][b] = k(nodes[a], nodes[b]);
    for (int p = 0; p <= order; ++p) {
        for (int q = 0; q <= order; ++q) {
            ComplexMatrix acc = ComplexMatrix::Zero(rank, rank);
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b)
                    acc += vals[a][b] * (std::pow(std::conj(nodes[a]) / r, p) * std::pow(nodes[b] / r, q));
            out.set(p, q, acc / (static_cast<double>(m) * m * std::pow(r, p + q)));
        }
    }
    return out;
}

inline ComplexMatrix random_matrix(std::mt19937_64& rng, int n, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
    return m;
}

inline ComplexMatrix random_unitary(std::mt19937_64& rng, int n) {
    Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(rng, n));
    return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

inline double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline std::vector<KernelSpec> zoo_fixtures() {
    using cdbundle::KernelSpec;
    return {
        KernelSpec::bergman(2.0),
        KernelSpec::bergman(2.5),
        KernelSpec::jet(1.0, 1.0, 1),
        KernelSpec::jet(1.0, 2.0, 2),
        KernelSpec::jet(2.0, 1.5, 2),
        KernelSpec::direct_sum({KernelSpec::bergman(1.0), KernelSpec::bergman(5.0)}),
        KernelSpec::direct_sum({KernelSpec::bergman(1.0), KernelSpec::jet(1.0, 5.0, 1)}),
        KernelSpec::homogeneous(1.0, {1.0, 1.0}, 1),
        KernelSpec::homogeneous(2.0, {1.0, 1.0, 1.0}, 2),
        KernelSpec::homogeneous(1.7, {1.0, 0.6, 1.3}, 2),
        KernelSpec::permuted({3, 1, 2}, KernelSpec::homogeneous(2.0, {1.0, 1.0, 1.0}, 2)),
    };
}

}  // namespace testing_support
