#pragma once

#include <vector>

#include "cdbundle/kernels.hpp"
#include "cdbundle/series.hpp"

namespace cdbundle {

enum class Frame { OrthonormalAtPoint };

struct PointInvariants {
    cplx point{0.0, 0.0};
    ComplexMatrix curvature;
    ComplexMatrix d_zbar;
    ComplexMatrix d_zzbar;  // empty when not computed
    Frame frame = Frame::OrthonormalAtPoint;
};

// Principal square root of a Hermitian positive definite matrix; rejects eigenvalues below floor.
ComplexMatrix psd_sqrt(const ComplexMatrix& h, double floor = 1e-10);
ComplexMatrix psd_inv_sqrt(const ComplexMatrix& h, double floor = 1e-10);

// K(0,0)^{1/2} K(z,0)^{-1} K(z,w) K(0,w)^{-1} K(0,0)^{1/2}
MatrixPowerSeries2 normalize(const MatrixPowerSeries2& k);

enum class TildeCoefficient { A11, A12, A22 };

// Closed expressions for the normalized coefficients in terms of the raw lattice.
ComplexMatrix tilde_a_closed(const MatrixPowerSeries2& k, TildeCoefficient which);

// Coefficient of z^{k+1} conj(w)^{l+1} of the normalized kernel via the inverse lattice b.
ComplexMatrix tilde_a_general(const MatrixPowerSeries2& k, int kk, int ll);

// curvature = a11^t, d_zbar = 2 a12^t, d_zzbar = 2 (2 a22 - a11^2)^t on the normalized lattice.
PointInvariants invariants_at_zero(const MatrixPowerSeries2& k);

// (n+1)! a_{1,n+1}^t
ComplexMatrix covd_zbar_n_at_zero(const MatrixPowerSeries2& k, int n);

// Curvature and d_zbar of K^(lambda, mu) at 0 from the commutator formulas; d_zzbar left empty.
PointInvariants homogeneous_invariants_closed(double lambda, const std::vector<double>& mu, int m);

// Specialized m = 2 values; a = 2 lambda, b = 1/d_1, c = 4 d_1 / d_2.
struct CurvpValues {
    double a;
    double b;
    double c;
    ComplexMatrix curvature;
    ComplexMatrix d_zbar;
};
CurvpValues homogeneous_m2_closed(double lambda, double mu1, double mu2);

double max_abs(const ComplexMatrix& m);

// phi_{t,a}(z) = t (z - a) / (1 - conj(a) z)
struct MobiusMap {
    cplx t{1.0, 0.0};
    cplx a{0.0, 0.0};
};

MobiusMap make_mobius(cplx t, cplx a);
cplx mobius_apply(const MobiusMap& phi, cplx z);
MobiusMap mobius_inverse(const MobiusMap& phi);
// (f o g)(z) = f(g(z))
MobiusMap mobius_compose(const MobiusMap& f, const MobiusMap& g);
cplx mobius_derivative(const MobiusMap& phi, cplx z);
// c(phi^{-1}, z) = (phi^{-1})'(z)
cplx cocycle_c(const MobiusMap& phi, cplx z);

// Eigenvalues of curvature at 0 scaled by (1 - |z|^2)^{-2}, ascending.
std::vector<double> transport_eigenvalues(const PointInvariants& inv0, cplx z);

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h);

}  // namespace cdbundle
