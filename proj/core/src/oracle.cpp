#include "cdbundle/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <thread>

#include "cdbundle/error.hpp"
#include "cdbundle/invariants.hpp"

namespace cdbundle {

namespace {

using Real = long double;
using Cx = cplxld;
using Mat = ComplexMatrixLD;

// Central stencils for d^p/dx^p: (offset, weight) with error expansion in even powers of the step.
const std::array<std::vector<std::pair<int, Real>>, 5>& stencils() {
    static const std::array<std::vector<std::pair<int, Real>>, 5> s{{
        {{0, 1.0L}},
        {{-1, -0.5L}, {1, 0.5L}},
        {{-1, 1.0L}, {0, -2.0L}, {1, 1.0L}},
        {{-2, -0.5L}, {-1, 1.0L}, {1, -1.0L}, {2, 0.5L}},
        {{-2, 1.0L}, {-1, -4.0L}, {0, 6.0L}, {1, -4.0L}, {2, 1.0L}},
    }};
    return s;
}

Real binom_ld(int n, int k) {
    if (k < 0 || k > n) return 0;
    Real out = 1;
    for (int i = 1; i <= k; ++i) out = out * Real(n - k + i) / Real(i);
    return out;
}

// Values of h on the 5 x 5 grid z0 + s (j + i l), j, l in [-2, 2].
struct Grid {
    std::array<Mat, 25> v;
    const Mat& at(int j, int l) const { return v[static_cast<std::size_t>((j + 2) * 5 + (l + 2))]; }
};

Grid sample(const MetricField& h, Cx z0, Real s, const Mat& center) {
    Grid g;
    for (int j = -2; j <= 2; ++j) {
        for (int l = -2; l <= 2; ++l) {
            auto& slot = g.v[static_cast<std::size_t>((j + 2) * 5 + (l + 2))];
            slot = (j == 0 && l == 0) ? center : h(z0 + Cx(s * Real(j), s * Real(l)));
        }
    }
    return g;
}

Mat partial_from_grid(const Grid& g, int p, int q, Real s) {
    const auto& sp = stencils()[static_cast<std::size_t>(p)];
    const auto& sq = stencils()[static_cast<std::size_t>(q)];
    Mat acc = Mat::Zero(g.v[0].rows(), g.v[0].cols());
    for (const auto& [j, wj] : sp) {
        for (const auto& [l, wl] : sq) {
            acc += (wj * wl) * g.at(j, l);
        }
    }
    return acc / std::pow(s, Real(p + q));
}

// Partial derivatives d^p_x d^q_y h(z0) keyed by (p, q), for all p + q <= max_order.
std::map<std::pair<int, int>, Mat> partials(const MetricField& h, Cx z0, const FDConfig& cfg, int max_order,
                                            const Mat& center) {
    std::map<std::pair<int, int>, Mat> out;
    out[{0, 0}] = center;
    const int levels = cfg.scheme == FDScheme::Richardson ? cfg.levels : 1;
    for (int k = 1; k <= max_order; ++k) {
        const Real base = static_cast<Real>(order_step(cfg, k));
        std::vector<Grid> grids;
        grids.reserve(static_cast<std::size_t>(levels));
        for (int lv = 0; lv < levels; ++lv) grids.push_back(sample(h, z0, base / std::pow(2.0L, Real(lv)), center));
        for (int p = 0; p <= k; ++p) {
            const int q = k - p;
            // Romberg table over step halvings.
            std::vector<Mat> row;
            for (int lv = 0; lv < levels; ++lv) {
                row.push_back(partial_from_grid(grids[static_cast<std::size_t>(lv)], p, q,
                                                base / std::pow(2.0L, Real(lv))));
            }
            for (int col = 1; col < levels; ++col) {
                const Real f = std::pow(4.0L, Real(col));
                std::vector<Mat> next;
                for (std::size_t i = 1; i < row.size(); ++i) next.push_back(row[i] + (row[i] - row[i - 1]) / (f - 1));
                row = std::move(next);
            }
            out[{p, q}] = row.back();
        }
    }
    return out;
}

// Wirtinger jet: entries d^a dbar^b F at the point for a <= A, b <= B.
struct WJet {
    int A = 0;
    int B = 0;
    std::vector<Mat> d;

    WJet(int a, int b, Eigen::Index n) : A(a), B(b), d(static_cast<std::size_t>((a + 1) * (b + 1)), Mat::Zero(n, n)) {}
    Mat& at(int a, int b) { return d[static_cast<std::size_t>(a * (B + 1) + b)]; }
    const Mat& at(int a, int b) const { return d[static_cast<std::size_t>(a * (B + 1) + b)]; }
};

WJet wirtinger_from_partials(const std::map<std::pair<int, int>, Mat>& p, int A, int B, Eigen::Index n) {
    WJet j(A, B, n);
    const Cx i_unit(0, 1);
    for (int a = 0; a <= A; ++a) {
        for (int b = 0; b <= B; ++b) {
            Mat acc = Mat::Zero(n, n);
            // (dx - i dy)^a (dx + i dy)^b / 2^{a+b}
            for (int r = 0; r <= a; ++r) {
                for (int s = 0; s <= b; ++s) {
                    const int px = r + s;
                    const int py = (a - r) + (b - s);
                    const Cx coef = binom_ld(a, r) * binom_ld(b, s) * std::pow(-i_unit, a - r) * std::pow(i_unit, b - s);
                    acc += coef * p.at({px, py});
                }
            }
            j.at(a, b) = acc / std::pow(2.0L, Real(a + b));
        }
    }
    return j;
}

WJet mul(const WJet& f, const WJet& g) {
    const int A = std::min(f.A, g.A);
    const int B = std::min(f.B, g.B);
    const Eigen::Index n = f.d[0].rows();
    WJet out(A, B, n);
    for (int a = 0; a <= A; ++a) {
        for (int b = 0; b <= B; ++b) {
            Mat acc = Mat::Zero(n, n);
            for (int i = 0; i <= a; ++i) {
                for (int j = 0; j <= b; ++j) {
                    acc += (binom_ld(a, i) * binom_ld(b, j)) * (f.at(i, j) * g.at(a - i, b - j));
                }
            }
            out.at(a, b) = acc;
        }
    }
    return out;
}

WJet inverse(const WJet& f) {
    const Eigen::Index n = f.d[0].rows();
    WJet g(f.A, f.B, n);
    const Mat f0inv = f.at(0, 0).inverse();
    for (int a = 0; a <= f.A; ++a) {
        for (int b = 0; b <= f.B; ++b) {
            if (a == 0 && b == 0) {
                g.at(0, 0) = f0inv;
                continue;
            }
            Mat acc = Mat::Zero(n, n);
            for (int i = 0; i <= a; ++i) {
                for (int j = 0; j <= b; ++j) {
                    if (i == 0 && j == 0) continue;
                    acc += (binom_ld(a, i) * binom_ld(b, j)) * (f.at(i, j) * g.at(a - i, b - j));
                }
            }
            g.at(a, b) = -f0inv * acc;
        }
    }
    return g;
}

WJet dz(const WJet& f) {
    WJet out(f.A - 1, f.B, f.d[0].rows());
    for (int a = 0; a <= out.A; ++a)
        for (int b = 0; b <= out.B; ++b) out.at(a, b) = f.at(a + 1, b);
    return out;
}

WJet dzbar(const WJet& f) {
    WJet out(f.A, f.B - 1, f.d[0].rows());
    for (int a = 0; a <= out.A; ++a)
        for (int b = 0; b <= out.B; ++b) out.at(a, b) = f.at(a, b + 1);
    return out;
}

WJet combine(const WJet& f, const WJet& g, Real sg) {
    const int A = std::min(f.A, g.A);
    const int B = std::min(f.B, g.B);
    WJet out(A, B, f.d[0].rows());
    for (int a = 0; a <= A; ++a)
        for (int b = 0; b <= B; ++b) out.at(a, b) = f.at(a, b) + sg * g.at(a, b);
    return out;
}

ComplexMatrix to_double(const Mat& m) { return m.cast<cplx>(); }

}  // namespace

void validate(const FDConfig& cfg) {
    if (!(cfg.step > 1e-8 && cfg.step < 1e-2)) {
        throw DomainError("FDConfig: step must lie in (1e-8, 1e-2)");
    }
    if (cfg.levels < 1 || cfg.levels > 6) {
        throw DomainError("FDConfig: levels must lie in [1, 6]");
    }
    if (!(cfg.order_growth >= 1.0)) {
        throw DomainError("FDConfig: order_growth must be at least 1");
    }
}

double order_step(const FDConfig& cfg, int k) { return cfg.step * std::pow(cfg.order_growth, k - 1); }

MetricField metric_field(const KernelSpec& spec) {
    return [spec](cplxld z) -> ComplexMatrixLD { return kernel_evaluate_ld(spec, z, z).transpose(); };
}

ComplexMatrix metric_at(const KernelSpec& spec, cplx z) {
    if (std::abs(z) >= 1.0) {
        throw DomainError("metric_at: point outside the open unit disc");
    }
    ComplexMatrix h = kernel_evaluate(spec, z, z).transpose();
    const std::vector<double> eig = hermitian_eigenvalues(h);
    if (eig.front() < 1e-12) {
        throw DegeneracyError("metric_at: metric is not positive definite");
    }
    return h;
}

OracleResult oracle_at(const MetricField& h, cplx z, const FDConfig& cfg, OracleDepth depth) {
    validate(cfg);
    const int B = depth == OracleDepth::Curvature ? 1 : 2;
    const int A = depth == OracleDepth::Zzbar ? 2 : 1;
    const int max_order = A + B;
    const double reach = std::abs(z) + 2.0 * std::sqrt(2.0) * order_step(cfg, max_order);
    if (std::abs(z) >= 1.0 || reach >= 1.0) {
        throw DomainError("oracle: finite-difference stencil leaves the unit disc");
    }
    const Cx z0(z.real(), z.imag());
    const Mat center = h(z0);
    const Eigen::Index n = center.rows();
    const auto p = partials(h, z0, cfg, max_order, center);
    const WJet hj = wirtinger_from_partials(p, A, B, n);

    const WJet theta = mul(inverse(hj), dz(hj));
    const WJet curv = dzbar(theta);

    OracleResult out;
    out.metric = to_double(center);
    out.curvature = to_double(curv.at(0, 0));
    if (depth != OracleDepth::Curvature) {
        out.d_zbar = to_double(dzbar(curv).at(0, 0));
    }
    if (depth == OracleDepth::Zzbar) {
        const WJet comm = combine(mul(theta, curv), mul(curv, theta), -1.0L);
        const WJet kz = combine(dz(curv), comm, 1.0L);
        out.d_zzbar = to_double(dzbar(kz).at(0, 0));
    }
    return out;
}

OracleResult oracle_at(const KernelSpec& spec, cplx z, const FDConfig& cfg, OracleDepth depth) {
    return oracle_at(metric_field(spec), z, cfg, depth);
}

ComplexMatrix curvature_fd(const KernelSpec& spec, cplx z, const FDConfig& cfg) {
    return oracle_at(spec, z, cfg, OracleDepth::Curvature).curvature;
}

ComplexMatrix covd_zbar_fd(const KernelSpec& spec, cplx z, const FDConfig& cfg) {
    return oracle_at(spec, z, cfg, OracleDepth::Zbar).d_zbar;
}

ComplexMatrix covd_zzbar_fd(const KernelSpec& spec, cplx z, const FDConfig& cfg) {
    return oracle_at(spec, z, cfg, OracleDepth::Zzbar).d_zzbar;
}

ComplexMatrix to_orthonormal_frame(const ComplexMatrix& m, const ComplexMatrix& h0) {
    return psd_sqrt(h0, 1e-12) * m * psd_inv_sqrt(h0, 1e-12);
}

OracleResult orthonormal_oracle_at(const KernelSpec& spec, cplx z, const FDConfig& cfg) {
    OracleResult raw = oracle_at(spec, z, cfg, OracleDepth::Zzbar);
    const ComplexMatrix root = psd_sqrt(raw.metric, 1e-12);
    const ComplexMatrix inv_root = psd_inv_sqrt(raw.metric, 1e-12);
    raw.curvature = root * raw.curvature * inv_root;
    raw.d_zbar = root * raw.d_zbar * inv_root;
    raw.d_zzbar = root * raw.d_zzbar * inv_root;
    return raw;
}

std::vector<double> curvature_eigenvalues_fd(const KernelSpec& spec, cplx z, const FDConfig& cfg) {
    const OracleResult r = oracle_at(spec, z, cfg, OracleDepth::Curvature);
    return hermitian_eigenvalues(to_orthonormal_frame(r.curvature, r.metric));
}

std::vector<std::vector<double>> curvature_eigen_sweep(const KernelSpec& spec, const std::vector<cplx>& points,
                                                       const FDConfig& cfg, unsigned threads) {
    validate(cfg);
    std::vector<std::vector<double>> out(points.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, points.size())));
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < points.size(); i += threads) {
                    out[i] = curvature_eigenvalues_fd(spec, points[i], cfg);
                }
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace cdbundle
