#pragma once

#include <cstdint>

#include "fatdist/core.hpp"
#include "fatdist/fat2.hpp"
#include "fatdist/report.hpp"

namespace fatdist::qcont {

using core::Subspace;

/// Pointwise quaternionic contact data: a metric g and three almost
/// complex structures satisfying the quaternion relations, with induced
/// skew forms omega^i = g(J_i ., .).
class QContTriple {
public:
    QContTriple(Matrix g, Matrix j1, Matrix j2, Matrix j3, Tolerance tol = {});

    /// Block-diagonal standard model: quaternion left multiplication on
    /// H^n with the Euclidean metric.
    static QContTriple standard(Index n, Tolerance tol = {});

    Index dim() const { return g_.rows(); }
    const Matrix& g() const { return g_; }
    const Matrix& j(int i) const;      // i = 1, 2, 3
    const Matrix& omega(int i) const;  // i = 1, 2, 3
    const Tolerance& tol() const { return tol_; }

private:
    Matrix g_, j1_, j2_, j3_;
    Matrix omega1_, omega2_, omega3_;
    Tolerance tol_;
};

/// Residuals for every defining invariant of the triple.
Report validate_triple(const QContTriple& q);

/// The degree-2 fat tuple (omega2, omega3), whose connecting automorphism
/// is -J1 (verified).
fat2::FatTuple2 induced_fat_pair(const QContTriple& q);

Subspace omega_perp3(const QContTriple& q, const Subspace& v);
bool is_isotropic3(const QContTriple& q, const Subspace& v);
/// Rank of xi |-> (i_xi omega^i|_V)_{i=1,2,3} equals 3 dim V.
bool is_regular3(const QContTriple& q, const Subspace& v);

/// Pansu: isotropic implies regular. Requires is_isotropic3(v).
bool pansu_check(const QContTriple& q, const Subspace& v);

/// Checks D = W^Omega ⊕_g (J1 W + J2 W + J3 W) and whether the sum of
/// the J_i W is direct (equivalent to regularity of W).
Report decomposition_check(const QContTriple& q, const Subspace& w);

/// tau in V^Omega \ (V + sum J_i V); the extension V + <tau> is verified
/// regular before returning. Context: V omega1-symplectic and
/// omega2/omega3-isotropic (the isocontact regime).
Vector pick_tau(const QContTriple& q, const Subspace& v, std::uint64_t seed);

/// eta in (V_tau^perp2 ∩ V_tau^perp3) \ (V_tau + J1 V_tau) with
/// omega1(tau, eta) = 1 (enforced exactly by rescaling).
Vector pick_eta(const QContTriple& q, const Subspace& v_tau, const Vector& tau,
                std::uint64_t seed);

}  // namespace fatdist::qcont
