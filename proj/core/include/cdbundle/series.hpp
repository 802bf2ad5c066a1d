#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace cdbundle {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

// Throws DomainError when any entry is NaN or infinite.
void require_finite(const ComplexMatrix& m, const char* what);

// Max entrywise |M* - M|.
double hermitian_defect(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = 1e-12);

// Truncated sum over (k, l) in [0, N]^2 of a_{kl} z^k conj(w)^l with n x n coefficients.
class MatrixPowerSeries2 {
public:
    MatrixPowerSeries2(int rank, int order);

    static MatrixPowerSeries2 identity(int rank, int order);

    int rank() const { return rank_; }
    int order() const { return order_; }

    const ComplexMatrix& operator()(int k, int l) const;
    void set(int k, int l, const ComplexMatrix& value);
    void add(int k, int l, const ComplexMatrix& value);

private:
    int index(int k, int l) const;

    int rank_;
    int order_;
    std::vector<ComplexMatrix> coeffs_;
};

MatrixPowerSeries2 series_multiply(const MatrixPowerSeries2& a, const MatrixPowerSeries2& b);

// Two-sided inverse lattice b_{kl}; requires invertible a_00.
MatrixPowerSeries2 series_invert(const MatrixPowerSeries2& k);

// max over (k, l) of entrywise |a_{kl}* - a_{lk}|.
double hermitian_symmetry_defect(const MatrixPowerSeries2& k);

ComplexMatrix series_evaluate(const MatrixPowerSeries2& k, cplx z, cplx w);

// Lattice of K(z, 0): keeps the l = 0 column.
MatrixPowerSeries2 series_z_slice(const MatrixPowerSeries2& k);

// Lattice of K(w, z)*: c_{kl} = a_{lk}*.
MatrixPowerSeries2 series_adjoint(const MatrixPowerSeries2& k);

MatrixPowerSeries2 series_scale(const MatrixPowerSeries2& k, const ComplexMatrix& left,
                                const ComplexMatrix& right);

double series_max_abs_diff(const MatrixPowerSeries2& a, const MatrixPowerSeries2& b);

}  // namespace cdbundle
