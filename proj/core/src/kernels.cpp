#include "cdbundle/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <string>

#include "cdbundle/error.hpp"

namespace cdbundle {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError(std::string(what) + " must be a positive finite real");
    }
}

int compute_rank(const KernelSpec::Node& node) {
    return std::visit(overloaded{
                          [](const BergmanPower&) { return 1; },
                          [](const Jet& j) { return j.k + 1; },
                          [](const DirectSum& d) {
                              int r = 0;
                              for (const auto& p : d.parts) r += p.rank();
                              return r;
                          },
                          [](const Homogeneous& h) { return h.m + 1; },
                          [](const Permuted& p) { return p.inner->rank(); },
                      },
                      node);
}

}  // namespace

KernelSpec::KernelSpec(Node node) : node_(std::move(node)), rank_(compute_rank(node_)) {}

KernelSpec KernelSpec::bergman(double lambda) {
    require_positive(lambda, "bergman lambda");
    return KernelSpec(BergmanPower{lambda});
}

KernelSpec KernelSpec::jet(double alpha, double beta, int k) {
    require_positive(alpha, "jet alpha");
    require_positive(beta, "jet beta");
    if (k != 1 && k != 2) {
        throw DomainError("jet order k must be 1 or 2");
    }
    return KernelSpec(Jet{alpha, beta, k});
}

KernelSpec KernelSpec::direct_sum(std::vector<KernelSpec> parts) {
    if (parts.empty()) {
        throw DomainError("direct_sum needs at least one part");
    }
    return KernelSpec(DirectSum{std::move(parts)});
}

KernelSpec KernelSpec::homogeneous(double lambda, std::vector<double> mu, int m) {
    if (m < 1) {
        throw DomainError("homogeneous m must be a positive integer");
    }
    if (!std::isfinite(lambda) || !(2.0 * lambda - m > 0.0)) {
        throw DomainError("homogeneous parameters need 2 lambda - m > 0");
    }
    if (static_cast<int>(mu.size()) != m + 1) {
        throw DomainError("homogeneous mu must have m + 1 entries");
    }
    if (std::abs(mu[0] - 1.0) > 1e-14) {
        throw DomainError("homogeneous mu_0 must equal 1");
    }
    for (double v : mu) require_positive(v, "homogeneous mu entry");
    return KernelSpec(Homogeneous{lambda, std::move(mu), m});
}

KernelSpec KernelSpec::permuted(std::vector<int> sigma, KernelSpec inner) {
    const int n = inner.rank();
    if (static_cast<int>(sigma.size()) != n) {
        throw DomainError("permuted sigma length must equal the inner rank");
    }
    std::set<int> seen(sigma.begin(), sigma.end());
    if (static_cast<int>(seen.size()) != n || *seen.begin() != 1 || *seen.rbegin() != n) {
        throw DomainError("permuted sigma must be a permutation of 1..rank");
    }
    return KernelSpec(Permuted{std::move(sigma), std::make_shared<const KernelSpec>(std::move(inner))});
}

int kernel_rank(const KernelSpec& spec) { return spec.rank(); }

bool is_homogeneous(const KernelSpec& spec) {
    return std::visit(overloaded{
                          [](const DirectSum& d) {
                              return std::all_of(d.parts.begin(), d.parts.end(),
                                                 [](const KernelSpec& p) { return is_homogeneous(p); });
                          },
                          [](const Permuted& p) { return is_homogeneous(*p.inner); },
                          [](const auto&) { return true; },
                      },
                      spec.node());
}

double rising_factorial(double x, int r) {
    double out = 1.0;
    for (int i = 0; i < r; ++i) out *= x + i;
    return out;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double out = 1.0;
    for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
    return out;
}

ComplexMatrix shift_matrix(const std::vector<cplx>& weights) {
    const int m = static_cast<int>(weights.size());
    ComplexMatrix s = ComplexMatrix::Zero(m + 1, m + 1);
    for (int l = 1; l <= m; ++l) s(l, l - 1) = weights[static_cast<std::size_t>(l - 1)];
    return s;
}

ComplexMatrix canonical_shift(int m) {
    std::vector<cplx> w;
    for (int l = 1; l <= m; ++l) w.emplace_back(static_cast<double>(l), 0.0);
    return shift_matrix(w);
}

TriangularData triangular_data(double lambda, const std::vector<double>& mu, int m) {
    if (static_cast<int>(mu.size()) != m + 1) {
        throw DimensionError("triangular_data: mu must have m + 1 entries");
    }
    TriangularData t;
    t.L = Eigen::MatrixXd::Zero(m + 1, m + 1);
    for (int l = 0; l <= m; ++l) {
        for (int j = 0; j <= l; ++j) {
            const double two_lambda_j = 2.0 * lambda - m + 2.0 * j;
            const double c = binomial(l, j);
            t.L(l, j) = c * c * rising_factorial(1.0, l - j) / rising_factorial(two_lambda_j, l - j);
        }
    }
    Eigen::VectorXd mu_sq(m + 1);
    for (int l = 0; l <= m; ++l) mu_sq(l) = mu[static_cast<std::size_t>(l)] * mu[static_cast<std::size_t>(l)];
    t.d = t.L * mu_sq;
    t.B = t.d.asDiagonal();
    t.Dm = Eigen::MatrixXd::Zero(m + 1, m + 1);
    for (int l = 0; l <= m; ++l) t.Dm(l, l) = m - l;
    return t;
}

Eigen::MatrixXd permutation_matrix(const std::vector<int>& sigma) {
    const int n = static_cast<int>(sigma.size());
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) p(i, sigma[static_cast<std::size_t>(i)] - 1) = 1.0;
    return p;
}

namespace {

template <class Real>
using Cx = std::complex<Real>;
template <class Real>
using Mat = Eigen::Matrix<Cx<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <class Real>
Real rising(Real x, int r) {
    Real out = 1;
    for (int i = 0; i < r; ++i) out *= x + Real(i);
    return out;
}

template <class Real>
Real falling_int(int n, int r) {
    Real out = 1;
    for (int i = 0; i < r; ++i) out *= Real(n - i);
    return out;
}

template <class Real>
Real binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    Real out = 1;
    for (int i = 1; i <= k; ++i) out = out * Real(n - k + i) / Real(i);
    return out;
}

template <class Real>
Cx<Real> cpow(Cx<Real> base, Real exponent) {
    return std::exp(exponent * std::log(base));
}

template <class Real>
Mat<Real> evaluate(const KernelSpec& spec, Cx<Real> z, Cx<Real> w);

template <class Real>
Mat<Real> eval_jet(const Jet& j, Cx<Real> z, Cx<Real> w) {
    const Cx<Real> wb = std::conj(w);
    const Cx<Real> one_minus = Cx<Real>(1) - z * wb;
    const Real alpha = static_cast<Real>(j.alpha);
    const Real beta = static_cast<Real>(j.beta);
    const int n = j.k + 1;
    Mat<Real> out(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            // d^r_z d^c_wbar (1 - z wbar)^{-beta}, expanded by Leibniz over z^c.
            Cx<Real> acc(0);
            for (int s = 0; s <= std::min(r, c); ++s) {
                const Real coef = binom<Real>(r, s) * falling_int<Real>(c, s) *
                                  rising<Real>(beta, c) * rising<Real>(beta + Real(c), r - s);
                const int gamma_shift = c + r - s;
                acc += coef * std::pow(z, c - s) * std::pow(wb, r - s) *
                       cpow<Real>(one_minus, -(beta + Real(gamma_shift)));
            }
            out(r, c) = acc * cpow<Real>(one_minus, -alpha);
        }
    }
    return out;
}

template <class Real>
Mat<Real> eval_homogeneous(const Homogeneous& h, Cx<Real> z, Cx<Real> w) {
    const int m = h.m;
    const int n = m + 1;
    const TriangularData t = triangular_data(h.lambda, h.mu, m);
    const Cx<Real> wb = std::conj(w);
    const Cx<Real> x = z * wb;
    const Cx<Real> one_minus = Cx<Real>(1) - x;

    Mat<Real> shift = Mat<Real>::Zero(n, n);
    for (int l = 1; l <= m; ++l) shift(l, l - 1) = Real(l);
    const Mat<Real> shift_adj = shift.adjoint();

    Mat<Real> left_exp = Mat<Real>::Identity(n, n);
    Mat<Real> right_exp = Mat<Real>::Identity(n, n);
    Mat<Real> lp = Mat<Real>::Identity(n, n);
    Mat<Real> rp = Mat<Real>::Identity(n, n);
    Real fact = 1;
    for (int r = 1; r <= m; ++r) {
        fact *= Real(r);
        lp = (lp * shift * wb).eval();
        rp = (rp * shift_adj * z).eval();
        left_exp += lp / fact;
        right_exp += rp / fact;
    }

    Mat<Real> d = Mat<Real>::Zero(n, n);
    Mat<Real> b = Mat<Real>::Zero(n, n);
    for (int l = 0; l <= m; ++l) {
        d(l, l) = std::pow(one_minus, m - l);
        b(l, l) = static_cast<Real>(t.d(l));
    }
    const Cx<Real> scalar = cpow<Real>(one_minus, -(Real(2) * static_cast<Real>(h.lambda) + Real(m)));
    return scalar * (d * left_exp * b * right_exp * d);
}

template <class Real>
Mat<Real> evaluate(const KernelSpec& spec, Cx<Real> z, Cx<Real> w) {
    return std::visit(
        overloaded{
            [&](const BergmanPower& b) -> Mat<Real> {
                Mat<Real> out(1, 1);
                out(0, 0) = cpow<Real>(Cx<Real>(1) - z * std::conj(w), -static_cast<Real>(b.lambda));
                return out;
            },
            [&](const Jet& j) -> Mat<Real> { return eval_jet<Real>(j, z, w); },
            [&](const DirectSum& ds) -> Mat<Real> {
                const int n = spec.rank();
                Mat<Real> out = Mat<Real>::Zero(n, n);
                int offset = 0;
                for (const auto& p : ds.parts) {
                    const int r = p.rank();
                    out.block(offset, offset, r, r) = evaluate<Real>(p, z, w);
                    offset += r;
                }
                return out;
            },
            [&](const Homogeneous& h) -> Mat<Real> { return eval_homogeneous<Real>(h, z, w); },
            [&](const Permuted& p) -> Mat<Real> {
                const Mat<Real> inner = evaluate<Real>(*p.inner, z, w);
                const Mat<Real> perm = permutation_matrix(p.sigma).cast<Cx<Real>>();
                return perm * inner * perm.transpose();
            },
        },
        spec.node());
}

}  // namespace

ComplexMatrix kernel_evaluate(const KernelSpec& spec, cplx z, cplx w) {
    if (std::abs(z) >= 1.0 || std::abs(w) >= 1.0) {
        throw DomainError("kernel_evaluate: point outside the open unit disc");
    }
    return evaluate<double>(spec, z, w);
}

ComplexMatrixLD kernel_evaluate_ld(const KernelSpec& spec, cplxld z, cplxld w) {
    if (std::abs(z) >= 1.0L || std::abs(w) >= 1.0L) {
        throw DomainError("kernel_evaluate: point outside the open unit disc");
    }
    return evaluate<long double>(spec, z, w);
}

namespace {

// Coefficients of the scalar series (1 - x)^{-p} in x = z conj(w).
MatrixPowerSeries2 scalar_power_series(double p, int order) {
    MatrixPowerSeries2 s(1, order);
    for (int k = 0; k <= order; ++k) {
        s.set(k, k, ComplexMatrix::Constant(1, 1, rising_factorial(p, k) / rising_factorial(1.0, k)));
    }
    return s;
}

MatrixPowerSeries2 homogeneous_taylor(const Homogeneous& h, int order) {
    const int m = h.m;
    const int n = m + 1;
    const TriangularData t = triangular_data(h.lambda, h.mu, m);
    const ComplexMatrix shift = canonical_shift(m);
    const ComplexMatrix shift_adj = shift.adjoint();

    MatrixPowerSeries2 power(n, order);
    const double p = 2.0 * h.lambda + m;
    for (int k = 0; k <= order; ++k) {
        power.set(k, k, ComplexMatrix::Identity(n, n) * (rising_factorial(p, k) / rising_factorial(1.0, k)));
    }

    MatrixPowerSeries2 dfac(n, order);
    for (int k = 0; k <= order; ++k) {
        ComplexMatrix c = ComplexMatrix::Zero(n, n);
        for (int l = 0; l <= m; ++l) c(l, l) = binomial(m - l, k) * ((k % 2 == 0) ? 1.0 : -1.0);
        dfac.set(k, k, c);
    }

    MatrixPowerSeries2 left_exp(n, order);
    MatrixPowerSeries2 right_exp(n, order);
    ComplexMatrix lp = ComplexMatrix::Identity(n, n);
    ComplexMatrix rp = ComplexMatrix::Identity(n, n);
    double fact = 1.0;
    for (int r = 0; r <= std::min(m, order); ++r) {
        if (r > 0) {
            fact *= r;
            lp = (lp * shift).eval();
            rp = (rp * shift_adj).eval();
        }
        left_exp.set(0, r, lp / fact);
        right_exp.set(r, 0, rp / fact);
    }

    MatrixPowerSeries2 bser(n, order);
    bser.set(0, 0, t.B.cast<cplx>());

    MatrixPowerSeries2 out = series_multiply(power, dfac);
    out = series_multiply(out, left_exp);
    out = series_multiply(out, bser);
    out = series_multiply(out, right_exp);
    return series_multiply(out, dfac);
}

}  // namespace

MatrixPowerSeries2 jet_taylor_generic(double alpha, double beta, int k, int order) {
    if (k != 1 && k != 2) {
        throw DomainError("jet_taylor_generic: k must be 1 or 2");
    }
    if (order < 0) {
        throw TruncationError("jet_taylor_generic: negative order");
    }
    const int n = k + 1;
    MatrixPowerSeries2 out(n, order);
    for (int kk = 0; kk <= order; ++kk) {
        for (int ll = 0; ll <= order; ++ll) {
            ComplexMatrix c = ComplexMatrix::Zero(n, n);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    // z^{nn-i} conj(w)^{nn-j} from the beta factor times (z conj w)^mm from alpha.
                    if (kk + i != ll + j) continue;
                    double acc = 0.0;
                    for (int mm = 0; mm <= std::min(kk, ll); ++mm) {
                        const int nn = kk - mm + i;
                        const double a_coef = rising_factorial(alpha, mm) / rising_factorial(1.0, mm);
                        const double b_coef = rising_factorial(beta, nn) / rising_factorial(1.0, nn);
                        const double di = rising_factorial(1.0, nn) / rising_factorial(1.0, nn - i);
                        const double dj = rising_factorial(1.0, nn) / rising_factorial(1.0, nn - j);
                        acc += a_coef * b_coef * di * dj;
                    }
                    c(i, j) = acc;
                }
            }
            out.set(kk, ll, c);
        }
    }
    return out;
}

MatrixPowerSeries2 kernel_taylor(const KernelSpec& spec, int order) {
    if (order < 0) {
        throw TruncationError("kernel_taylor: negative order");
    }
    return std::visit(
        overloaded{
            [&](const BergmanPower& b) { return scalar_power_series(b.lambda, order); },
            [&](const Jet& j) { return jet_taylor_generic(j.alpha, j.beta, j.k, order); },
            [&](const DirectSum& ds) {
                const int n = spec.rank();
                MatrixPowerSeries2 out(n, order);
                int offset = 0;
                for (const auto& p : ds.parts) {
                    const MatrixPowerSeries2 part = kernel_taylor(p, order);
                    const int r = p.rank();
                    for (int i = 0; i <= order; ++i) {
                        for (int j = 0; j <= order; ++j) {
                            ComplexMatrix c = out(i, j);
                            c.block(offset, offset, r, r) = part(i, j);
                            out.set(i, j, c);
                        }
                    }
                    offset += r;
                }
                return out;
            },
            [&](const Homogeneous& h) { return homogeneous_taylor(h, order); },
            [&](const Permuted& p) {
                const ComplexMatrix perm = permutation_matrix(p.sigma).cast<cplx>();
                return series_scale(kernel_taylor(*p.inner, order), perm, perm.transpose());
            },
        },
        spec.node());
}

ComplexMatrix jet_printed_closed_form(double alpha, double beta, int k, cplx z, cplx w) {
    if (std::abs(z) >= 1.0 || std::abs(w) >= 1.0) {
        throw DomainError("jet_printed_closed_form: point outside the open unit disc");
    }
    const cplx wb = std::conj(w);
    const cplx x = z * wb;
    const cplx y = 1.0 - x;
    const double b = beta;
    if (k == 1) {
        ComplexMatrix m(2, 2);
        m << y * y, b * z * y, b * wb * y, b * (1.0 + b * x);
        return m * std::pow(y, -alpha - beta - 2.0);
    }
    if (k == 2) {
        const double bb = b * (b + 1.0);
        ComplexMatrix m(3, 3);
        m(0, 0) = std::pow(y, 4);
        m(0, 1) = b * std::pow(y, 3) * z;
        m(0, 2) = bb * y * y * z * z;
        m(1, 0) = b * std::pow(y, 3) * wb;
        m(1, 1) = b * (1.0 + b * x) * y * y;
        m(1, 2) = bb * (2.0 + b * x) * y * z;
        m(2, 0) = bb * y * y * wb * wb;
        m(2, 1) = bb * (2.0 + b * x) * y * wb;
        m(2, 2) = bb * (2.0 + (b + 1.0) * (4.0 + b * x) * x);
        return m * std::pow(y, -alpha - beta - 4.0);
    }
    throw DomainError("jet_printed_closed_form: k must be 1 or 2");
}

MatrixPowerSeries2 taylor_by_sampling(const std::function<ComplexMatrix(cplx, cplx)>& eval,
                                      int rank, int order, double radius, int samples) {
    if (!(radius > 0.0 && radius < 1.0)) {
        throw DomainError("taylor_by_sampling: radius must lie in (0, 1)");
    }
    if (samples <= 2 * order + 1) {
        throw TruncationError("taylor_by_sampling: too few samples for the requested order");
    }
    std::vector<cplx> roots(static_cast<std::size_t>(samples));
    for (int s = 0; s < samples; ++s) {
        roots[static_cast<std::size_t>(s)] = std::polar(1.0, 2.0 * std::numbers::pi * s / samples);
    }
    std::vector<ComplexMatrix> values(static_cast<std::size_t>(samples * samples));
    for (int p = 0; p < samples; ++p) {
        for (int q = 0; q < samples; ++q) {
            values[static_cast<std::size_t>(p * samples + q)] =
                eval(radius * roots[static_cast<std::size_t>(p)], radius * roots[static_cast<std::size_t>(q)]);
        }
    }
    MatrixPowerSeries2 out(rank, order);
    const double norm = 1.0 / (static_cast<double>(samples) * samples);
    for (int k = 0; k <= order; ++k) {
        for (int l = 0; l <= order; ++l) {
            ComplexMatrix acc = ComplexMatrix::Zero(rank, rank);
            for (int p = 0; p < samples; ++p) {
                for (int q = 0; q < samples; ++q) {
                    // z^k conj(w)^l on the torus: e^{i k phi} e^{-i l psi}.
                    const cplx weight = std::conj(roots[static_cast<std::size_t>((k * p) % samples)]) *
                                        roots[static_cast<std::size_t>((l * q) % samples)];
                    acc += weight * values[static_cast<std::size_t>(p * samples + q)];
                }
            }
            out.set(k, l, acc * (norm / std::pow(radius, k + l)));
        }
    }
    return out;
}

JetDiscrepancy jet_discrepancy_report(double alpha, double beta, int k, int order, double tol) {
    const MatrixPowerSeries2 generic = jet_taylor_generic(alpha, beta, k, order);
    const MatrixPowerSeries2 printed = taylor_by_sampling(
        [&](cplx z, cplx w) { return jet_printed_closed_form(alpha, beta, k, z, w); }, k + 1, order);
    JetDiscrepancy rep;
    rep.k = k;
    rep.order = order;
    double scale = 1.0;
    for (int i = 0; i <= order; ++i) {
        for (int j = 0; j <= order; ++j) {
            scale = std::max(scale, generic(i, j).cwiseAbs().maxCoeff());
            const ComplexMatrix diff = (generic(i, j) - printed(i, j)).cwiseAbs().cast<cplx>();
            for (int r = 0; r <= k; ++r) {
                for (int c = 0; c <= k; ++c) {
                    const double v = std::abs(diff(r, c));
                    if (v > rep.max_abs_diff) {
                        rep.max_abs_diff = v;
                        rep.worst_k = i;
                        rep.worst_l = j;
                        rep.worst_row = r;
                        rep.worst_col = c;
                    }
                }
            }
        }
    }
    rep.agrees = rep.max_abs_diff <= tol * scale;
    return rep;
}

}  // namespace cdbundle
