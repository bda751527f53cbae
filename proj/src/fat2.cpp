#include "fatdist/fat2.hpp"

#include <Eigen/Eigenvalues>

#include "fatdist/rng.hpp"

namespace fatdist::fat2 {

using core::Subspace;

namespace {

void require_skew_nondeg(const Matrix& omega, const Tolerance& tol, const char* name) {
    require_finite(omega, name);
    if (omega.rows() != omega.cols())
        throw DimensionMismatchError(std::string(name) + ": not square");
    const double scale = omega.norm();
    if ((omega + omega.transpose()).norm() > tol.threshold(scale))
        throw InvalidFormError(std::string(name) + ": not skew-symmetric at tolerance");
    if (core::rank(omega, tol) != omega.rows())
        throw InvalidFormError(std::string(name) + ": degenerate");
}

Matrix gram(const Matrix& omega, const Matrix& basis) {
    return basis.transpose() * omega * basis;
}

}  // namespace

FatTuple2::FatTuple2(Matrix omega1, Matrix omega2, Tolerance tol)
    : omega1_(std::move(omega1)), omega2_(std::move(omega2)), tol_(tol) {
    require_skew_nondeg(omega1_, tol_, "FatTuple2: omega1");
    require_skew_nondeg(omega2_, tol_, "FatTuple2: omega2");
    if (omega1_.rows() != omega2_.rows())
        throw DimensionMismatchError("FatTuple2: form size mismatch");
    if (omega1_.rows() % 2 != 0)
        throw InvalidFormError("FatTuple2: dimension must be even");
}

ConnectingAutomorphism connecting_automorphism(const FatTuple2& t) {
    if (core::condition_number(t.omega1()) > 1e12)
        throw NumericFailureError("connecting_automorphism: omega1 is ill-conditioned");
    // omega1(u, Av) = omega2(u, v) for all u, v  <=>  Omega1 A = Omega2.
    Matrix a = t.omega1().fullPivLu().solve(t.omega2());
    double residual = (t.omega1() * a - t.omega2()).norm() /
                      std::max(1.0, t.omega2().norm());
    if (residual > 1e3 * t.tol().threshold(1.0))
        throw NumericFailureError("connecting_automorphism: defining identity residual too large");
    if (core::rank(a, t.tol()) != a.rows())
        throw NumericFailureError("connecting_automorphism: A is singular");
    return {std::move(a), residual};
}

bool is_fat(const FatTuple2& t) {
    return !core::has_real_eigenvalue(connecting_automorphism(t).a, t.tol());
}

Index degree(const FatTuple2& t) {
    if (!is_fat(t)) throw PreconditionError("degree: tuple is not fat");
    return core::minpoly_degree(connecting_automorphism(t).a, t.tol());
}

Subspace omega_perp(const FatTuple2& t, const Subspace& v) {
    if (v.ambient_dim() != t.dim())
        throw DimensionMismatchError("omega_perp: ambient mismatch");
    const Tolerance& tol = t.tol();
    Subspace direct = core::intersect(core::form_perp(v, t.omega1(), tol),
                                      core::form_perp(v, t.omega2(), tol), tol);
    // Cross-check: V^Omega = (V+AV)^perp1.
    Matrix a = connecting_automorphism(t).a;
    Subspace vav = core::sum(v, v.map(a, tol), tol);
    Subspace alt = core::form_perp(vav, t.omega1(), tol);
    if (direct.dim() != alt.dim() ||
        direct.projector_distance(alt) > 1e3 * tol.threshold(1.0))
        throw InternalInconsistencyError(
            "omega_perp: direct intersection and (V+AV)^perp1 disagree");
    return direct;
}

bool is_regular(const FatTuple2& t, const Subspace& v) {
    if (v.ambient_dim() != t.dim())
        throw DimensionMismatchError("is_regular: ambient mismatch");
    const Tolerance& tol = t.tol();
    const Index k = v.dim();
    // (a) rank of xi |-> (i_xi omega1|_V, i_xi omega2|_V).
    Matrix eval(t.dim(), 2 * k);
    eval << t.omega1() * v.basis(), t.omega2() * v.basis();
    bool by_rank = core::rank(eval, tol) == 2 * k;
    // (b) V ∩ AV = 0.
    Matrix a = connecting_automorphism(t).a;
    bool by_intersection = core::intersect(v, v.map(a, tol), tol).dim() == 0;
    if (by_rank != by_intersection)
        throw InternalInconsistencyError("is_regular: rank and intersection criteria disagree");
    return by_rank;
}

bool is_isotropic(const FatTuple2& t, const Subspace& v) {
    if (v.ambient_dim() != t.dim())
        throw DimensionMismatchError("is_isotropic: ambient mismatch");
    const double scale = std::max(t.omega1().norm(), t.omega2().norm());
    return gram(t.omega1(), v.basis()).norm() <= t.tol().threshold(scale) &&
           gram(t.omega2(), v.basis()).norm() <= t.tol().threshold(scale);
}

Deg2IdentityReport deg2_identities(const FatTuple2& t, const Subspace& v) {
    if (degree(t) != 2) throw PreconditionError("deg2_identities: tuple is not degree 2");
    const Tolerance& tol = t.tol();
    Matrix a = connecting_automorphism(t).a;
    Matrix a_inv = a.fullPivLu().inverse();

    Subspace vav = core::sum(v, v.map(a, tol), tol);
    Subspace vainv = core::sum(v, v.map(a_inv, tol), tol);
    Subspace vo = omega_perp(t, v);
    Subspace vo_perp1 = core::form_perp(vav, t.omega1(), tol);
    Subspace vo_perp2 = core::form_perp(vav, t.omega2(), tol);
    Subspace voo = omega_perp(t, vo);

    Deg2IdentityReport r;
    r.res_vav_vinv = vav.projector_distance(vainv);
    r.res_perp1 = vo.projector_distance(vo_perp1);
    r.res_perp2 = vo.projector_distance(vo_perp2);
    r.res_double_omega = voo.projector_distance(vav);
    r.input_isotropic = is_isotropic(t, v);
    r.double_omega_isotropic = is_isotropic(t, voo);
    return r;
}

Subspace extend_regular(const FatTuple2& t, const Subspace& v, std::uint64_t seed) {
    if (degree(t) != 2) throw PreconditionError("extend_regular: tuple is not degree 2");
    if (!is_regular(t, v)) throw PreconditionError("extend_regular: subspace is not regular");
    const Tolerance& tol = t.tol();
    Subspace voo = omega_perp(t, omega_perp(t, v));  // = V + AV
    if (voo.dim() == t.dim())
        throw NoRoomError("extend_regular: (V^Omega)^Omega is the full space");
    Subspace comp = voo.orthogonal_complement(tol);
    Rng rng(seed);
    for (int attempt = 0; attempt < 16; ++attempt) {
        Vector tau = comp.basis() * rng.unit_vector(comp.dim());
        Matrix ext(t.dim(), v.dim() + 1);
        ext << v.basis(), tau;
        Subspace cand = Subspace::span(ext, tol);
        if (cand.dim() == v.dim() + 1 && is_regular(t, cand)) return cand;
    }
    throw ConstructionFailureError("extend_regular: retries exhausted");
}

Matrix compatible_complex_structure(const Matrix& omega, const Tolerance& tol) {
    require_skew_nondeg(omega, tol, "compatible_complex_structure: omega");
    // S = (-omega^2)^{1/2} is SPD and commutes with omega; J = -omega S^{-1}
    // is orthogonal, squares to -I, and omega(., J.) = S is SPD.
    Matrix sym = -omega * omega;
    sym = 0.5 * (sym + sym.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    if (es.info() != Eigen::Success)
        throw NumericFailureError("compatible_complex_structure: eigensolver failed");
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw NumericFailureError("compatible_complex_structure: square root not positive");
    Vector inv_sqrt = es.eigenvalues().array().sqrt().inverse();
    Matrix s_inv = es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
    Matrix j = -omega * s_inv;
    if ((j * j + Matrix::Identity(j.rows(), j.cols())).norm() > 1e-8)
        throw NumericFailureError("compatible_complex_structure: J^2 + I residual too large");
    return j;
}

Subspace isotropic_complement(const FatTuple2& t, const Subspace& v) {
    if (degree(t) != 2) throw PreconditionError("isotropic_complement: tuple is not degree 2");
    const Tolerance& tol = t.tol();
    const double scale = t.omega2().norm();
    if (gram(t.omega2(), v.basis()).norm() > tol.threshold(scale))
        throw PreconditionError("isotropic_complement: V is not omega2-isotropic");
    if (!is_regular(t, v))
        throw PreconditionError("isotropic_complement: V is not regular");

    Matrix j = compatible_complex_structure(t.omega2(), tol);
    Subspace vo = omega_perp(t, v);
    Subspace voo = omega_perp(t, vo);
    Subspace perp2 = core::form_perp(v, t.omega2(), tol);
    Subspace vprime = core::intersect(perp2, voo.map(j, tol), tol);

    // V^perp2 = V^Omega (+) V'.
    if (core::intersect(vo, vprime, tol).dim() != 0 ||
        !core::sum(vo, vprime, tol).equals(perp2, tol))
        throw InternalInconsistencyError("isotropic_complement: V^perp2 != V^Omega + V'");
    Subspace s = core::sum(v, vprime, tol);
    if (gram(t.omega2(), s.basis()).norm() > 1e3 * tol.threshold(scale))
        throw InternalInconsistencyError("isotropic_complement: V + V' is not omega2-isotropic");
    return vprime;
}

Matrix symplectic_complete(const Matrix& s_omega, const Matrix& lagr, const Tolerance& tol) {
    require_skew_nondeg(s_omega, tol, "symplectic_complete: s_omega");
    const Index m = s_omega.rows();
    const Index k = lagr.cols();
    if (lagr.rows() != m)
        throw DimensionMismatchError("symplectic_complete: frame size mismatch");
    if (2 * k != m || core::rank(lagr, tol) != k ||
        gram(s_omega, lagr).norm() > tol.threshold(s_omega.norm() * lagr.squaredNorm()))
        throw PreconditionError("symplectic_complete: input does not span a Lagrangian");

    // First solve omega(X_i, Y'_j) = delta_ij, then absorb the skew defect
    // omega(Y'_i, Y'_j) back into the X's.
    Matrix pairing = lagr.transpose() * s_omega;  // k x m
    Matrix y = pairing.completeOrthogonalDecomposition().solve(Matrix::Identity(k, k));
    Matrix s = y.transpose() * s_omega * y;  // skew k x k
    y += 0.5 * lagr * s;

    Matrix frame(m, 2 * k);
    frame << lagr, y;
    Matrix g = gram(s_omega, frame);
    Matrix std_form = Matrix::Zero(2 * k, 2 * k);
    std_form.topRightCorner(k, k) = Matrix::Identity(k, k);
    std_form.bottomLeftCorner(k, k) = -Matrix::Identity(k, k);
    if ((g - std_form).norm() > 1e-9 * std::max(1.0, g.norm()))
        throw NumericFailureError("symplectic_complete: symplectic relations residual too large");
    return frame;
}

Report check_isocontact_jet(const FatTuple2& t, const FormalIsocontactJet& jet) {
    const Tolerance& tol = t.tol();
    require_finite(jet.f, "check_isocontact_jet: f");
    require_finite(jet.eta, "check_isocontact_jet: eta");
    if (jet.f.rows() != t.dim())
        throw DimensionMismatchError("check_isocontact_jet: ambient mismatch");
    const Index k = jet.f.cols();
    if (jet.eta.rows() != k || jet.eta.cols() != k)
        throw DimensionMismatchError("check_isocontact_jet: eta size mismatch");
    if (core::rank(jet.eta, tol) != k)
        throw PreconditionError("check_isocontact_jet: eta is degenerate");

    Report rep;
    double scale = std::max(1.0, jet.eta.norm());
    double res1 = (gram(t.omega1(), jet.f) - jet.eta).norm() / scale;
    double res2 = gram(t.omega2(), jet.f).norm() / std::max(1.0, t.omega2().norm());
    bool injective = core::rank(jet.f, tol) == k;
    rep.add("injective", injective);
    rep.add_residual("curvature_omega1_eq_eta", res1, 1e3 * tol.threshold(1.0));
    rep.add_residual("curvature_omega2_vanishes", res2, 1e3 * tol.threshold(1.0));
    if (rep.pass()) {
        // Automatic regularity: symplectic for omega1 and isotropic for
        // omega2 forces V ∩ AV = 0.
        Subspace v = Subspace::span(jet.f, tol);
        rep.add("image_regular", is_regular(t, v));
    }
    return rep;
}

}  // namespace fatdist::fat2
