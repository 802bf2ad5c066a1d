#include "cdbundle/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "cdbundle/error.hpp"

namespace cdbundle {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Equivalent:
            return "Equivalent";
        case Verdict::EigenvaluesMatchOnly:
            return "EigenvaluesMatchOnly";
        case Verdict::Distinct:
            return "Distinct";
    }
    return "Distinct";
}

namespace {

void require_hermitian(const ComplexMatrix& h, const char* what) {
    if (h.rows() != h.cols()) throw DimensionError(std::string(what) + ": matrix is not square");
    if (hermitian_defect(h) > 1e-10 * std::max(1.0, max_abs(h))) {
        throw DomainError(std::string(what) + ": matrix is not Hermitian");
    }
}

double off_diagonal_mass(const ComplexMatrix& m) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (i != j) worst = std::max(worst, std::abs(m(i, j)));
    return worst;
}

double unitarity_defect(const ComplexMatrix& u) {
    return max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols()));
}

std::string entry_name(const char* prefix, Eigen::Index i, Eigen::Index j) {
    std::ostringstream os;
    os << prefix << "(" << i + 1 << "," << j + 1 << ")";
    return os.str();
}

struct Attempt {
    bool ok = false;
    ComplexMatrix u;
    std::string reason;
    std::vector<std::pair<std::string, double>> values;

    static Attempt fail(std::string why, std::vector<std::pair<std::string, double>> v = {}) {
        Attempt a;
        a.reason = std::move(why);
        a.values = std::move(v);
        return a;
    }
};

using Key = std::vector<cplx>;

bool keys_close(const Key& a, const Key& b, double tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > tol) return false;
    return true;
}

// Groups indices with equal keys; classes are listed in order of their smallest member.
std::vector<std::vector<int>> classes_of(const std::vector<Key>& keys, double tol) {
    std::vector<std::vector<int>> out;
    for (int i = 0; i < static_cast<int>(keys.size()); ++i) {
        bool placed = false;
        for (auto& cls : out) {
            if (keys_close(keys[cls.front()], keys[i], tol)) {
                cls.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed) out.push_back({i});
    }
    return out;
}

ComplexMatrix block(const ComplexMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
    ComplexMatrix out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
    return out;
}

bool verify(const ComplexMatrix& u, const ComplexMatrix& k1, const ComplexMatrix& k2,
            const std::vector<ComplexMatrix>& d1, const std::vector<ComplexMatrix>& d2,
            const EquivTolerances& tol) {
    if (unitarity_defect(u) > tol.unitarity) return false;
    if (intertwining_residual(u, k1, k2) > tol.residual) return false;
    for (std::size_t r = 0; r < d1.size(); ++r)
        if (intertwining_residual(u, d1[r], d2[r]) > tol.residual) return false;
    return true;
}

// U supported on the pairing i -> pi[i] with phases fixed by a spanning forest of the
// nonzero off-diagonal pattern.
Attempt monomial(const std::vector<int>& pi, const std::vector<ComplexMatrix>& d1,
                 const std::vector<ComplexMatrix>& d2, const EquivTolerances& tol) {
    const int n = static_cast<int>(pi.size());
    for (std::size_t r = 0; r < d1.size(); ++r) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const cplx x = d1[r](i, j);
                const cplx y = d2[r](pi[i], pi[j]);
                const bool bad = i == j ? std::abs(x - y) > tol.residual
                                        : std::abs(std::abs(x) - std::abs(y)) > tol.residual;
                if (bad) {
                    std::vector<std::pair<std::string, double>> v{
                        {entry_name("left|", i, j), std::abs(x)},
                        {entry_name("right|", pi[i], pi[j]), std::abs(y)},
                    };
                    if (std::abs(y) > tol.zero) v.emplace_back("modulus_ratio", std::abs(x) / std::abs(y));
                    return Attempt::fail(i == j ? "diagonal entries of the derivative differ under the forced pairing"
                                                : "entry moduli of the derivative differ under the forced pairing",
                                         std::move(v));
                }
            }
        }
    }

    std::vector<double> theta(n, 0.0);
    std::vector<bool> seen(n, false);
    for (int root = 0; root < n; ++root) {
        if (seen[root]) continue;
        seen[root] = true;
        std::queue<int> q;
        q.push(root);
        while (!q.empty()) {
            const int i = q.front();
            q.pop();
            for (int j = 0; j < n; ++j) {
                if (seen[j] || j == i) continue;
                for (std::size_t r = 0; r < d1.size(); ++r) {
                    // e^{i(theta_i - theta_j)} x = y on entry (i, j); (j, i) gives the conjugate relation.
                    const cplx xij = d1[r](i, j), yij = d2[r](pi[i], pi[j]);
                    const cplx xji = d1[r](j, i), yji = d2[r](pi[j], pi[i]);
                    if (std::abs(xij) > tol.zero) {
                        theta[j] = theta[i] - std::arg(yij / xij);
                    } else if (std::abs(xji) > tol.zero) {
                        theta[j] = theta[i] + std::arg(yji / xji);
                    } else {
                        continue;
                    }
                    seen[j] = true;
                    q.push(j);
                    break;
                }
            }
        }
    }

    Attempt a;
    a.u = ComplexMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) a.u(pi[i], i) = std::polar(1.0, theta[i]);
    a.ok = true;
    return a;
}

// One repeated pair P <-> Q plus at most one singleton s1 <-> s2; intra-block parts are scalar.
Attempt repeated_block(const std::vector<int>& p, const std::vector<int>& q, int s1, int s2,
                       const std::vector<ComplexMatrix>& d1, const std::vector<ComplexMatrix>& d2, int n,
                       const EquivTolerances& tol) {
    Attempt a;
    a.u = ComplexMatrix::Zero(n, n);
    if (s1 < 0) {
        for (std::size_t i = 0; i < p.size(); ++i) a.u(q[i], p[i]) = 1.0;
        a.ok = true;
        return a;
    }
    const Eigen::Index cols = static_cast<Eigen::Index>(2 * d1.size());
    ComplexMatrix x(2, cols), y(2, cols);
    for (std::size_t r = 0; r < d1.size(); ++r) {
        x.col(2 * r) = block(d1[r], p, {s1});
        y.col(2 * r) = block(d2[r], q, {s2});
        x.col(2 * r + 1) = block(d1[r], {s1}, p).adjoint();
        y.col(2 * r + 1) = block(d2[r], {s2}, q).adjoint();
    }
    const ComplexMatrix gx = x.adjoint() * x;
    const ComplexMatrix gy = y.adjoint() * y;
    if (max_abs(gx - gy) > tol.residual * std::max(1.0, max_abs(gx))) {
        std::vector<std::pair<std::string, double>> v;
        for (std::size_t r = 0; r < d1.size(); ++r) {
            const double nx = x.col(2 * r).norm(), ny = y.col(2 * r).norm();
            v.emplace_back("left_column_norm_" + std::to_string(r + 1), nx);
            v.emplace_back("right_column_norm_" + std::to_string(r + 1), ny);
            if (ny > tol.zero) v.emplace_back("norm_ratio_" + std::to_string(r + 1), nx / ny);
        }
        v.emplace_back("gram_defect", max_abs(gx - gy));
        return Attempt::fail("no unitary on the repeated eigenspace carries the derivative couplings across",
                             std::move(v));
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(y * x.adjoint(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const ComplexMatrix v = svd.matrixU() * svd.matrixV().adjoint();
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) a.u(q[i], p[j]) = v(i, j);
    a.u(s2, s1) = 1.0;
    a.ok = true;
    return a;
}

Attempt solve(const ComplexMatrix& k1, const ComplexMatrix& k2, const std::vector<ComplexMatrix>& d1,
              const std::vector<ComplexMatrix>& d2, const EquivTolerances& tol) {
    const int n = static_cast<int>(k1.rows());
    for (std::size_t r = 0; r < d1.size(); ++r) {
        const double n1 = max_abs(d1[r]), n2 = max_abs(d2[r]);
        if ((n1 <= tol.zero) != (n2 <= tol.zero)) {
            return Attempt::fail("derivative vanishes on one side only", {{"left_max_abs", n1}, {"right_max_abs", n2}});
        }
    }

    std::vector<Key> key1(n), key2(n);
    for (int i = 0; i < n; ++i) {
        key1[i] = {k1(i, i)};
        key2[i] = {k2(i, i)};
    }
    const auto base1 = classes_of(key1, tol.eig);
    const auto base2 = classes_of(key2, tol.eig);
    for (const auto& cls : base1) {
        if (cls.size() < 2) continue;
        for (std::size_t r = 0; r < d1.size(); ++r)
            if (off_diagonal_mass(block(d1[r], cls, cls)) > tol.zero)
                throw UnsupportedShape("derivative is not diagonal on a repeated curvature eigenspace");
    }
    for (const auto& cls : base2) {
        if (cls.size() < 2) continue;
        for (std::size_t r = 0; r < d2.size(); ++r)
            if (off_diagonal_mass(block(d2[r], cls, cls)) > tol.zero)
                throw UnsupportedShape("derivative is not diagonal on a repeated curvature eigenspace");
    }
    for (std::size_t r = 0; r < d1.size(); ++r) {
        for (int i = 0; i < n; ++i) {
            key1[i].push_back(d1[r](i, i));
            key2[i].push_back(d2[r](i, i));
        }
    }

    const auto cls1 = classes_of(key1, tol.residual);
    const auto cls2 = classes_of(key2, tol.residual);
    std::vector<int> partner(cls1.size(), -1);
    std::vector<bool> used(cls2.size(), false);
    for (std::size_t a = 0; a < cls1.size(); ++a) {
        for (std::size_t b = 0; b < cls2.size(); ++b) {
            if (!used[b] && cls1[a].size() == cls2[b].size() &&
                keys_close(key1[cls1[a].front()], key2[cls2[b].front()], tol.residual)) {
                partner[a] = static_cast<int>(b);
                used[b] = true;
                break;
            }
        }
        if (partner[a] < 0) {
            std::vector<std::pair<std::string, double>> v;
            for (int i = 0; i < n; ++i)
                for (std::size_t r = 0; r < d1.size(); ++r) {
                    v.emplace_back(entry_name("left_re", i, i), d1[r](i, i).real());
                    v.emplace_back(entry_name("right_re", i, i), d2[r](i, i).real());
                }
            return Attempt::fail("diagonal entries of the derivative differ on matching eigenspaces", std::move(v));
        }
    }

    Attempt a;
    const auto big = std::find_if(cls1.begin(), cls1.end(), [](const auto& c) { return c.size() > 1; });
    if (big == cls1.end()) {
        std::vector<int> pi(n);
        for (std::size_t c = 0; c < cls1.size(); ++c) pi[cls1[c].front()] = cls2[partner[c]].front();
        a = monomial(pi, d1, d2, tol);
    } else if (big->size() == static_cast<std::size_t>(n)) {
        a.u = ComplexMatrix::Identity(n, n);
        a.ok = true;
    } else if (big->size() == 2) {
        const std::size_t bi = static_cast<std::size_t>(big - cls1.begin());
        int s1 = -1, s2 = -1;
        for (std::size_t c = 0; c < cls1.size(); ++c) {
            if (c == bi) continue;
            s1 = cls1[c].front();
            s2 = cls2[partner[c]].front();
        }
        a = repeated_block(*big, cls2[partner[bi]], s1, s2, d1, d2, n, tol);
    } else {
        throw UnsupportedShape("repeated eigenspace structure outside the supported shapes");
    }
    if (!a.ok) return a;
    if (!verify(a.u, k1, k2, d1, d2, tol)) {
        return Attempt::fail("phase constraints are inconsistent around a cycle of nonzero entries",
                             {{"unitarity_defect", unitarity_defect(a.u)}});
    }
    return a;
}

bool lex_less(const std::vector<const ComplexMatrix*>& a, const std::vector<const ComplexMatrix*>& b) {
    for (std::size_t m = 0; m < a.size(); ++m) {
        for (Eigen::Index i = 0; i < a[m]->size(); ++i) {
            const cplx x = a[m]->data()[i], y = b[m]->data()[i];
            if (x.real() != y.real()) return x.real() < y.real();
            if (x.imag() != y.imag()) return x.imag() < y.imag();
        }
    }
    return false;
}

void check_inputs(const ComplexMatrix& k1, const ComplexMatrix& k2, const std::vector<ComplexMatrix>& d1,
                  const std::vector<ComplexMatrix>& d2, const EquivTolerances& tol) {
    if (d1.size() != d2.size()) throw DimensionError("find_intertwiner: derivative lists differ in length");
    const Eigen::Index n = k1.rows();
    auto square_n = [n](const ComplexMatrix& m) { return m.rows() == n && m.cols() == n; };
    if (!square_n(k1) || !square_n(k2)) throw DimensionError("find_intertwiner: curvature shapes differ");
    for (std::size_t r = 0; r < d1.size(); ++r)
        if (!square_n(d1[r]) || !square_n(d2[r])) throw DimensionError("find_intertwiner: derivative shape mismatch");
    if (n > 3) throw UnsupportedShape("find_intertwiner: rank above 3");
    require_hermitian(k1, "find_intertwiner");
    require_hermitian(k2, "find_intertwiner");
    if (off_diagonal_mass(k1) > tol.zero || off_diagonal_mass(k2) > tol.zero)
        throw UnsupportedShape("find_intertwiner: curvature is not diagonal");
}

std::string level_name(int level) {
    switch (level) {
        case 0:
            return "(0,0)";
        case 1:
            return "(0,1)";
        case 2:
            return "(1,1)";
        default:
            return "(" + std::to_string(level) + ")";
    }
}

EquivalenceReport to_report(const IntertwinerResult& r) {
    EquivalenceReport rep;
    if (r.found) {
        rep.verdict = Verdict::Equivalent;
        rep.witness = r.witness;
        return rep;
    }
    rep.verdict = r.failed_level == 0 ? Verdict::Distinct : Verdict::EigenvaluesMatchOnly;
    rep.certificate.level = level_name(r.failed_level);
    rep.certificate.reason = r.reason;
    rep.certificate.values = r.values;
    return rep;
}

}  // namespace

double intertwining_residual(const ComplexMatrix& u, const ComplexMatrix& a, const ComplexMatrix& b) {
    return max_abs(u * a - b * u);
}

bool eig_multiset_equal(const ComplexMatrix& h1, const ComplexMatrix& h2, double tol) {
    require_hermitian(h1, "eig_multiset_equal");
    require_hermitian(h2, "eig_multiset_equal");
    if (h1.rows() != h2.rows()) return false;
    const auto e1 = hermitian_eigenvalues(h1);
    const auto e2 = hermitian_eigenvalues(h2);
    for (std::size_t i = 0; i < e1.size(); ++i)
        if (std::abs(e1[i] - e2[i]) > tol) return false;
    return true;
}

IntertwinerResult find_intertwiner(const ComplexMatrix& k1, const ComplexMatrix& k2,
                                   const std::vector<ComplexMatrix>& d1, const std::vector<ComplexMatrix>& d2,
                                   const EquivTolerances& tol) {
    check_inputs(k1, k2, d1, d2, tol);
    IntertwinerResult out;
    const Eigen::Index n = k1.rows();

    std::vector<double> e1(n), e2(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        e1[i] = k1(i, i).real();
        e2[i] = k2(i, i).real();
    }
    std::sort(e1.begin(), e1.end());
    std::sort(e2.begin(), e2.end());
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(e1[i] - e2[i]) > tol.eig) {
            out.failed_level = 0;
            out.reason = "curvature eigenvalue multisets differ";
            for (Eigen::Index j = 0; j < n; ++j) {
                out.values.emplace_back("left_eig_" + std::to_string(j + 1), e1[j]);
                out.values.emplace_back("right_eig_" + std::to_string(j + 1), e2[j]);
            }
            return out;
        }
    }

    bool identical = max_abs(k1 - k2) <= tol.residual;
    for (std::size_t r = 0; identical && r < d1.size(); ++r) identical = max_abs(d1[r] - d2[r]) <= tol.residual;
    if (identical) {
        out.found = true;
        out.witness = ComplexMatrix::Identity(n, n);
        return out;
    }

    Attempt a;
    for (std::size_t p = 1; p <= d1.size(); ++p) {
        const std::vector<ComplexMatrix> q1(d1.begin(), d1.begin() + p);
        const std::vector<ComplexMatrix> q2(d2.begin(), d2.begin() + p);
        a = solve(k1, k2, q1, q2, tol);
        if (!a.ok) {
            out.failed_level = static_cast<int>(p);
            out.reason = a.reason;
            out.values = a.values;
            return out;
        }
    }
    if (d1.empty()) a = solve(k1, k2, d1, d2, tol);
    out.found = true;
    out.witness = a.u;
    return out;
}

namespace {

IntertwinerResult symmetric_intertwiner(const ComplexMatrix& k1, const ComplexMatrix& k2,
                                        const std::vector<ComplexMatrix>& d1, const std::vector<ComplexMatrix>& d2,
                                        const EquivTolerances& tol) {
    std::vector<const ComplexMatrix*> l{&k1}, r{&k2};
    for (const auto& m : d1) l.push_back(&m);
    for (const auto& m : d2) r.push_back(&m);
    IntertwinerResult res = find_intertwiner(k1, k2, d1, d2, tol);
    if (res.found && lex_less(r, l)) {
        // Solve from the canonically smaller side so swapping inputs returns the exact adjoint.
        IntertwinerResult back = find_intertwiner(k2, k1, d2, d1, tol);
        if (back.found) res.witness = back.witness.adjoint();
    }
    return res;
}

}  // namespace

EquivalenceReport simultaneous_pair_equiv(const PointInvariants& inv1, const PointInvariants& inv2,
                                          const EquivTolerances& tol) {
    return to_report(symmetric_intertwiner(inv1.curvature, inv2.curvature, {inv1.d_zbar}, {inv2.d_zbar}, tol));
}

bool zzbar_distinguishes(const PointInvariants& inv1, const PointInvariants& inv2,
                         const std::optional<ComplexMatrix>& candidate, const EquivTolerances& tol) {
    if (inv1.d_zzbar.size() == 0 || inv2.d_zzbar.size() == 0)
        throw UnsupportedShape("zzbar_distinguishes: d_zzbar not computed");
    if (off_diagonal_mass(inv1.d_zzbar) > tol.zero || off_diagonal_mass(inv2.d_zzbar) > tol.zero)
        throw UnsupportedShape("zzbar_distinguishes: d_zzbar is not diagonal");
    if (candidate) {
        if (candidate->rows() != inv1.d_zzbar.rows() || candidate->cols() != inv1.d_zzbar.cols())
            throw DimensionError("zzbar_distinguishes: candidate shape mismatch");
        return intertwining_residual(*candidate, inv1.d_zzbar, inv2.d_zzbar) > tol.residual;
    }
    const IntertwinerResult r =
        find_intertwiner(inv1.curvature, inv2.curvature, {inv1.d_zbar, inv1.d_zzbar}, {inv2.d_zbar, inv2.d_zzbar}, tol);
    return !r.found;
}

bool zzbar_multisets_differ(const PointInvariants& inv1, const PointInvariants& inv2, double tol) {
    if (inv1.d_zzbar.size() == 0 || inv2.d_zzbar.size() == 0)
        throw UnsupportedShape("zzbar_multisets_differ: d_zzbar not computed");
    if (inv1.d_zzbar.rows() != inv2.d_zzbar.rows()) return true;
    std::vector<double> a, b;
    for (Eigen::Index i = 0; i < inv1.d_zzbar.rows(); ++i) {
        a.push_back(inv1.d_zzbar(i, i).real());
        b.push_back(inv2.d_zzbar(i, i).real());
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > tol) return true;
    return false;
}

EquivalenceReport full_report(const KernelSpec& spec1, const KernelSpec& spec2, int order,
                              const EquivTolerances& tol) {
    if (order < 2) throw TruncationError("full_report: order must be at least 2");
    EquivalenceReport rep;
    rep.homogeneous = is_homogeneous(spec1) && is_homogeneous(spec2);
    rep.scope = rep.homogeneous ? "holds for all z by homogeneity" : "at z = 0 only";
    if (spec1.rank() != spec2.rank()) {
        rep.verdict = Verdict::Distinct;
        rep.certificate.level = level_name(0);
        rep.certificate.reason = "ranks differ";
        rep.certificate.values = {{"left_rank", spec1.rank()}, {"right_rank", spec2.rank()}};
        return rep;
    }
    const PointInvariants i1 = invariants_at_zero(kernel_taylor(spec1, order));
    const PointInvariants i2 = invariants_at_zero(kernel_taylor(spec2, order));
    EquivalenceReport r = to_report(
        symmetric_intertwiner(i1.curvature, i2.curvature, {i1.d_zbar, i1.d_zzbar}, {i2.d_zbar, i2.d_zzbar}, tol));
    r.homogeneous = rep.homogeneous;
    r.scope = rep.scope;
    return r;
}

}  // namespace cdbundle
