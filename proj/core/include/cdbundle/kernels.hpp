#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "cdbundle/series.hpp"

namespace cdbundle {

using cplxld = std::complex<long double>;
using ComplexMatrixLD = Eigen::Matrix<cplxld, Eigen::Dynamic, Eigen::Dynamic>;

class KernelSpec;

// (1 - z conj(w))^{-lambda}
struct BergmanPower {
    double lambda;
};

// Jet construction of order k from two scalar Bergman powers alpha and beta.
struct Jet {
    double alpha;
    double beta;
    int k;
};

struct DirectSum {
    std::vector<KernelSpec> parts;
};

// (1 - z conj(w))^{-2 lambda - m} D(z conj w) exp(conj(w) S) B exp(z S*) D(z conj w)
struct Homogeneous {
    double lambda;
    std::vector<double> mu;
    int m;
};

// P_sigma K P_sigma*, sigma given as 1-based images.
struct Permuted {
    std::vector<int> sigma;
    std::shared_ptr<const KernelSpec> inner;
};

class KernelSpec {
public:
    using Node = std::variant<BergmanPower, Jet, DirectSum, Homogeneous, Permuted>;

    static KernelSpec bergman(double lambda);
    static KernelSpec jet(double alpha, double beta, int k);
    static KernelSpec direct_sum(std::vector<KernelSpec> parts);
    static KernelSpec homogeneous(double lambda, std::vector<double> mu, int m);
    static KernelSpec permuted(std::vector<int> sigma, KernelSpec inner);

    const Node& node() const { return node_; }
    int rank() const { return rank_; }

private:
    explicit KernelSpec(Node node);

    Node node_;
    int rank_;
};

int kernel_rank(const KernelSpec& spec);

// Every variant in the zoo is Moebius-homogeneous up to unitaries.
bool is_homogeneous(const KernelSpec& spec);

// Exact closed-form value of K(z, w); throws DomainError outside the disc.
ComplexMatrix kernel_evaluate(const KernelSpec& spec, cplx z, cplx w);
ComplexMatrixLD kernel_evaluate_ld(const KernelSpec& spec, cplxld z, cplxld w);

MatrixPowerSeries2 kernel_taylor(const KernelSpec& spec, int order);

// Entry (i, j) is d^i/dz2^i d^j/dconj(w2)^j of (1 - z1 conj w1)^{-alpha} (1 - z2 conj w2)^{-beta}
// restricted to z1 = z2 = z, w1 = w2 = w.
MatrixPowerSeries2 jet_taylor_generic(double alpha, double beta, int k, int order);

// The explicit B_1 and B_2 matrices as printed for the jet examples.
ComplexMatrix jet_printed_closed_form(double alpha, double beta, int k, cplx z, cplx w);

// Taylor lattice of an evaluator by trapezoidal Cauchy sums on the torus |z| = |w| = radius.
MatrixPowerSeries2 taylor_by_sampling(const std::function<ComplexMatrix(cplx, cplx)>& eval,
                                      int rank, int order, double radius = 0.5,
                                      int samples = 64);

struct JetDiscrepancy {
    int k = 0;
    int order = 0;
    double max_abs_diff = 0.0;
    int worst_k = 0;
    int worst_l = 0;
    int worst_row = 0;
    int worst_col = 0;
    bool agrees = true;
};

// Compares jet_taylor_generic with the sampled Taylor lattice of the printed matrix.
// tol is relative to the largest generic coefficient.
JetDiscrepancy jet_discrepancy_report(double alpha, double beta, int k, int order,
                                      double tol = 1e-12);

// (S_m(c_1..c_m))_{l,p} = c_l delta_{p+1,l}, size (m+1) x (m+1).
ComplexMatrix shift_matrix(const std::vector<cplx>& weights);
// S_m(1, ..., m).
ComplexMatrix canonical_shift(int m);

double rising_factorial(double x, int r);
double binomial(int n, int k);

struct TriangularData {
    Eigen::MatrixXd L;
    Eigen::VectorXd d;
    Eigen::MatrixXd B;
    Eigen::MatrixXd Dm;
};

// L_{lj} = C(l,j)^2 (l-j)! / (2 lambda_j)_{l-j}, 2 lambda_j = 2 lambda - m + 2j; d = L (mu_l^2).
TriangularData triangular_data(double lambda, const std::vector<double>& mu, int m);

// (P_sigma)_{ij} = 1 iff j = sigma(i) - 1.
Eigen::MatrixXd permutation_matrix(const std::vector<int>& sigma);

KernelSpec parse_kernel_spec(const std::string& json_text);
std::string kernel_spec_to_json(const KernelSpec& spec);

}  // namespace cdbundle
