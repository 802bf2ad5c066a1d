#include "cdbundle/series.hpp"

#include <cmath>
#include <string>

#include "cdbundle/error.hpp"

namespace cdbundle {

void require_finite(const ComplexMatrix& m, const char* what) {
    if (!m.allFinite()) {
        throw DomainError(std::string(what) + ": non-finite entry");
    }
}

double hermitian_defect(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) {
        throw DimensionError("hermitian_defect: matrix is not square");
    }
    if (m.size() == 0) {
        return 0.0;
    }
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
    return m.rows() == m.cols() && hermitian_defect(m) <= tol;
}

MatrixPowerSeries2::MatrixPowerSeries2(int rank, int order) : rank_(rank), order_(order) {
    if (rank <= 0) {
        throw DimensionError("MatrixPowerSeries2: rank must be positive");
    }
    if (order < 0) {
        throw DimensionError("MatrixPowerSeries2: order must be non-negative");
    }
    coeffs_.assign(static_cast<std::size_t>((order + 1) * (order + 1)),
                   ComplexMatrix::Zero(rank, rank));
}

MatrixPowerSeries2 MatrixPowerSeries2::identity(int rank, int order) {
    MatrixPowerSeries2 s(rank, order);
    s.set(0, 0, ComplexMatrix::Identity(rank, rank));
    return s;
}

int MatrixPowerSeries2::index(int k, int l) const {
    if (k < 0 || l < 0 || k > order_ || l > order_) {
        throw TruncationError("MatrixPowerSeries2: index (" + std::to_string(k) + "," +
                              std::to_string(l) + ") beyond order " + std::to_string(order_));
    }
    return k * (order_ + 1) + l;
}

const ComplexMatrix& MatrixPowerSeries2::operator()(int k, int l) const {
    return coeffs_[static_cast<std::size_t>(index(k, l))];
}

void MatrixPowerSeries2::set(int k, int l, const ComplexMatrix& value) {
    if (value.rows() != rank_ || value.cols() != rank_) {
        throw DimensionError("MatrixPowerSeries2::set: coefficient shape mismatch");
    }
    require_finite(value, "MatrixPowerSeries2::set");
    coeffs_[static_cast<std::size_t>(index(k, l))] = value;
}

void MatrixPowerSeries2::add(int k, int l, const ComplexMatrix& value) {
    if (value.rows() != rank_ || value.cols() != rank_) {
        throw DimensionError("MatrixPowerSeries2::add: coefficient shape mismatch");
    }
    auto& slot = coeffs_[static_cast<std::size_t>(index(k, l))];
    slot += value;
    require_finite(slot, "MatrixPowerSeries2::add");
}

namespace {

void require_compatible(const MatrixPowerSeries2& a, const MatrixPowerSeries2& b, const char* op) {
    if (a.rank() != b.rank() || a.order() != b.order()) {
        throw DimensionError(std::string(op) + ": rank/order mismatch");
    }
}

}  // namespace

MatrixPowerSeries2 series_multiply(const MatrixPowerSeries2& a, const MatrixPowerSeries2& b) {
    require_compatible(a, b, "series_multiply");
    const int n = a.rank();
    const int order = a.order();
    MatrixPowerSeries2 out(n, order);
    for (int k = 0; k <= order; ++k) {
        for (int l = 0; l <= order; ++l) {
            ComplexMatrix acc = ComplexMatrix::Zero(n, n);
            for (int k1 = 0; k1 <= k; ++k1) {
                for (int l1 = 0; l1 <= l; ++l1) {
                    acc.noalias() += a(k1, l1) * b(k - k1, l - l1);
                }
            }
            out.set(k, l, acc);
        }
    }
    return out;
}

MatrixPowerSeries2 series_invert(const MatrixPowerSeries2& k) {
    const int n = k.rank();
    const int order = k.order();
    Eigen::PartialPivLU<ComplexMatrix> lu(k(0, 0));
    const ComplexMatrix& a00 = k(0, 0);
    const double scale = a00.cwiseAbs().maxCoeff();
    if (scale == 0.0 || std::abs(lu.determinant()) <= 1e-300 || lu.rcond() < 1e-14) {
        throw SingularityError("series_invert: a_00 is singular");
    }
    const ComplexMatrix a00_inv = lu.inverse();

    MatrixPowerSeries2 b(n, order);
    b.set(0, 0, a00_inv);
    // Right inverse: sum over (k1, l1) of a_{k1 l1} b_{k-k1, l-l1} vanishes off the origin.
    for (int total = 1; total <= 2 * order; ++total) {
        for (int kk = std::max(0, total - order); kk <= std::min(order, total); ++kk) {
            const int ll = total - kk;
            ComplexMatrix acc = ComplexMatrix::Zero(n, n);
            for (int k1 = 0; k1 <= kk; ++k1) {
                for (int l1 = 0; l1 <= ll; ++l1) {
                    if (k1 == 0 && l1 == 0) {
                        continue;
                    }
                    acc.noalias() += k(k1, l1) * b(kk - k1, ll - l1);
                }
            }
            b.set(kk, ll, -a00_inv * acc);
        }
    }
    return b;
}

double hermitian_symmetry_defect(const MatrixPowerSeries2& k) {
    double worst = 0.0;
    for (int i = 0; i <= k.order(); ++i) {
        for (int j = 0; j <= k.order(); ++j) {
            const double d = (k(i, j).adjoint() - k(j, i)).cwiseAbs().maxCoeff();
            worst = std::max(worst, d);
        }
    }
    return worst;
}

ComplexMatrix series_evaluate(const MatrixPowerSeries2& k, cplx z, cplx w) {
    if (std::abs(z) >= 1.0 || std::abs(w) >= 1.0) {
        throw DomainError("series_evaluate: point outside the open unit disc");
    }
    const int n = k.rank();
    const cplx wbar = std::conj(w);
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    cplx zk = 1.0;
    for (int i = 0; i <= k.order(); ++i) {
        cplx term = zk;
        for (int j = 0; j <= k.order(); ++j) {
            out += term * k(i, j);
            term *= wbar;
        }
        zk *= z;
    }
    return out;
}

MatrixPowerSeries2 series_z_slice(const MatrixPowerSeries2& k) {
    MatrixPowerSeries2 out(k.rank(), k.order());
    for (int i = 0; i <= k.order(); ++i) {
        out.set(i, 0, k(i, 0));
    }
    return out;
}

MatrixPowerSeries2 series_adjoint(const MatrixPowerSeries2& k) {
    MatrixPowerSeries2 out(k.rank(), k.order());
    for (int i = 0; i <= k.order(); ++i) {
        for (int j = 0; j <= k.order(); ++j) {
            out.set(i, j, k(j, i).adjoint());
        }
    }
    return out;
}

MatrixPowerSeries2 series_scale(const MatrixPowerSeries2& k, const ComplexMatrix& left,
                                const ComplexMatrix& right) {
    MatrixPowerSeries2 out(k.rank(), k.order());
    for (int i = 0; i <= k.order(); ++i) {
        for (int j = 0; j <= k.order(); ++j) {
            out.set(i, j, left * k(i, j) * right);
        }
    }
    return out;
}

double series_max_abs_diff(const MatrixPowerSeries2& a, const MatrixPowerSeries2& b) {
    require_compatible(a, b, "series_max_abs_diff");
    double worst = 0.0;
    for (int i = 0; i <= a.order(); ++i) {
        for (int j = 0; j <= a.order(); ++j) {
            worst = std::max(worst, (a(i, j) - b(i, j)).cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

}  // namespace cdbundle
