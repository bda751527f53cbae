#pragma once

#include <cstdint>
#include <optional>

#include "fatdist/core.hpp"
#include "fatdist/report.hpp"

namespace fatdist::fat2 {

using core::Subspace;

/// A vector space of even dimension carrying two nondegenerate skew
/// forms. All subspace calculus of the corank-2 theory happens here.
class FatTuple2 {
public:
    FatTuple2(Matrix omega1, Matrix omega2, Tolerance tol = {});

    Index dim() const { return omega1_.rows(); }
    const Matrix& omega1() const { return omega1_; }
    const Matrix& omega2() const { return omega2_; }
    const Tolerance& tol() const { return tol_; }

    double pairing1(const Vector& u, const Vector& v) const { return u.dot(omega1_ * v); }
    double pairing2(const Vector& u, const Vector& v) const { return u.dot(omega2_ * v); }

private:
    Matrix omega1_, omega2_;
    Tolerance tol_;
};

/// The unique A with omega1(u, Av) = omega2(u, v). Its matrix is the
/// solution of Omega1 * A = Omega2; the constructor verifies the defining
/// identity and invertibility.
struct ConnectingAutomorphism {
    Matrix a;
    double identity_residual = 0.0;
};

/// First-order data of a formal isocontact jet: the restriction of the
/// differential to the domain distribution, the domain curvature in a
/// chosen cotrivialization, and the induced quotient map.
struct FormalIsocontactJet {
    Matrix f;        // dim_D x dim_K, full column rank
    Matrix eta;      // dim_K x dim_K, skew
    Matrix g_tilde;  // 2 x q
};

struct Deg2IdentityReport {
    double res_vav_vinv;      // V+AV vs V+A^{-1}V
    double res_perp1;         // V^Omega vs (V+AV)^perp1
    double res_perp2;         // V^Omega vs (V+AV)^perp2
    double res_double_omega;  // (V^Omega)^Omega vs V+AV
    bool input_isotropic;
    bool double_omega_isotropic;  // meaningful when input_isotropic
    bool pass(double bound) const {
        double r = std::max(std::max(res_vav_vinv, res_perp1),
                            std::max(res_perp2, res_double_omega));
        return r <= bound && (!input_isotropic || double_omega_isotropic);
    }
};

ConnectingAutomorphism connecting_automorphism(const FatTuple2& t);

/// Fat <=> the connecting automorphism has no real eigenvalue.
bool is_fat(const FatTuple2& t);

/// Degree of the minimal polynomial of A. Requires is_fat(t).
Index degree(const FatTuple2& t);

/// V^Omega = V^perp1 ∩ V^perp2, cross-checked against (V+AV)^perp1.
Subspace omega_perp(const FatTuple2& t, const Subspace& v);

/// Omega-regularity, computed two independent ways (rank of the
/// evaluation map, and V ∩ AV = 0) which must agree.
bool is_regular(const FatTuple2& t, const Subspace& v);

/// Both restricted forms vanish on v.
bool is_isotropic(const FatTuple2& t, const Subspace& v);

/// Checks the degree-2 subspace identities and returns residuals.
Deg2IdentityReport deg2_identities(const FatTuple2& t, const Subspace& v);

/// Extends a regular subspace by one dimension, sampling the new
/// direction outside (V^Omega)^Omega. Requires degree 2.
Subspace extend_regular(const FatTuple2& t, const Subspace& v, std::uint64_t seed);

/// J with J^2 = -I, omega(., J.) symmetric positive-definite and omega
/// J-invariant, built from a polar-type factorization.
Matrix compatible_complex_structure(const Matrix& omega, const Tolerance& tol = {});

/// V' = V^perp2 ∩ J((V^Omega)^Omega) with J compatible with omega2;
/// satisfies V^perp2 = V^Omega ⊕ V' and V ⊕ V' omega2-isotropic.
Subspace isotropic_complement(const FatTuple2& t, const Subspace& v);

/// Completes a Lagrangian frame of (S, s_omega) to a symplectic frame.
/// Input columns X_i span a Lagrangian; returns [X_1..X_k Y_1..Y_k] with
/// omega(X_i, Y_j) = delta_ij and both halves isotropic.
Matrix symplectic_complete(const Matrix& s_omega, const Matrix& lagr, const Tolerance& tol = {});

/// Verifies the curvature condition F*omega1|_K = eta, F*omega2|_K = 0
/// and, when it holds, that im F is automatically Omega-regular.
Report check_isocontact_jet(const FatTuple2& t, const FormalIsocontactJet& jet);

}  // namespace fatdist::fat2
