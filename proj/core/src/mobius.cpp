#include <cmath>

#include "cdbundle/error.hpp"
#include "cdbundle/invariants.hpp"

namespace cdbundle {

MobiusMap make_mobius(cplx t, cplx a) {
    if (std::abs(std::abs(t) - 1.0) > 1e-12) {
        throw DomainError("mobius: |t| must equal 1");
    }
    if (std::abs(a) >= 1.0) {
        throw DomainError("mobius: |a| must be below 1");
    }
    return {t, a};
}

cplx mobius_apply(const MobiusMap& phi, cplx z) {
    return phi.t * (z - phi.a) / (1.0 - std::conj(phi.a) * z);
}

MobiusMap mobius_inverse(const MobiusMap& phi) { return {std::conj(phi.t), -phi.t * phi.a}; }

MobiusMap mobius_compose(const MobiusMap& f, const MobiusMap& g) {
    // Matrix form [[t, -t a], [-conj(a), 1]] acting by linear fractional maps.
    using M2 = Eigen::Matrix2cd;
    auto mat = [](const MobiusMap& p) {
        M2 m;
        m << p.t, -p.t * p.a, -std::conj(p.a), 1.0;
        return m;
    };
    const M2 prod = mat(f) * mat(g);
    const cplx s = prod(1, 1);
    const cplx t = prod(0, 0) / s;
    const cplx a = -std::conj(prod(1, 0) / s);
    return {t / std::abs(t), a};
}

cplx mobius_derivative(const MobiusMap& phi, cplx z) {
    const cplx den = 1.0 - std::conj(phi.a) * z;
    return phi.t * (1.0 - std::norm(phi.a)) / (den * den);
}

cplx cocycle_c(const MobiusMap& phi, cplx z) {
    if (std::abs(z) >= 1.0) {
        throw DomainError("cocycle_c: point outside the open unit disc");
    }
    return mobius_derivative(mobius_inverse(phi), z);
}

}  // namespace cdbundle
