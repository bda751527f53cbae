#pragma once

#include <cstdint>
#include <vector>

#include "fatdist/fat2.hpp"
#include "fatdist/frames.hpp"
#include "fatdist/qcont.hpp"
#include "fatdist/report.hpp"

namespace fatdist::models {

using core::Subspace;

/// Vector field with affine coefficients: value at x is constant + linear * x.
/// Closed under Lie bracket, which is therefore exact.
struct AffineVectorField {
    Index dim = 0;
    Vector constant;
    Matrix linear;

    Vector at(const Vector& x) const { return constant + linear * x; }
};

/// 1-form with affine coefficients: the covector at x is constant + linear * x
/// (as a column; pairing is dot product). Its exterior derivative is the
/// constant skew matrix linear^T - linear.
struct AffineCovector {
    Index dim = 0;
    Vector constant;
    Matrix linear;

    double at(const Vector& x, const Vector& u) const {
        return (constant + linear * x).dot(u);
    }
    /// d(lambda) as a matrix D with dlambda(u, v) = u^T D v.
    Matrix d() const { return linear.transpose() - linear; }
};

/// Corank-p distribution D = ∩ ker lambda^s with an optional annihilating
/// frame of affine fields.
struct AffineCoframeModel {
    Index dim_m = 0;
    Index p = 0;
    std::vector<AffineCovector> lambdas;
    std::vector<AffineVectorField> frame;  // empty <=> absent

    bool has_frame() const { return !frame.empty(); }
};

/// Liouville data on R^n_dim: p affine 1-forms mu^i whose exterior
/// derivatives are constant nondegenerate skew matrices.
struct LiouvilleModel {
    Index n_dim = 0;
    Index p = 0;
    std::vector<AffineCovector> mus;

    Matrix dmu(Index i) const { return mus.at(static_cast<std::size_t>(i)).d(); }
};

struct QuaternionicModel {
    AffineCoframeModel model;
    qcont::QContTriple triple;
};

/// Polyline samples of a map into R^n_dim with per-sample scalar primitives.
struct LiftResult {
    Matrix points;  // (n_dim + p) x samples
    double max_edge_residual = 0.0;
    Index worst_edge = -1;
};

/// Exact Lie bracket of affine fields.
AffineVectorField bracket(const AffineVectorField& x, const AffineVectorField& y);

/// (dlambda^s(u, v))_s at a point; u, v must lie in D there. By the fixed
/// sign convention this equals the curvature Omega(u, v) = -lambda([U, V])
/// for fields U, V extending u, v inside D.
Vector eval_curvature_coframe(const AffineCoframeModel& m, const Vector& point,
                              const Vector& u, const Vector& v,
                              const Tolerance& tol = {});

/// -lambda_point([F_i, F_j]) with the exact affine bracket.
Vector eval_curvature_bracket(const AffineCoframeModel& m, Index fi, Index fj,
                              const Vector& point);

/// Probe-point validation: coframe rows independent, frame fields
/// annihilated by every lambda^s, frame independent.
Report validate_model(const AffineCoframeModel& m, std::uint64_t seed,
                      int probes = 10, const Tolerance& tol = {});

/// Restriction of the curvature forms to D in the frame basis at a point.
Matrix curvature_gram(const AffineCoframeModel& m, Index s, const Vector& point);

/// Pointwise degree-2 tuple of a corank-2 model in its frame basis.
fat2::FatTuple2 pointwise_tuple(const AffineCoframeModel& m, const Vector& point,
                                const Tolerance& tol = {});

/// The holomorphic contact model on R^{4n+2}: coordinates
/// (x_{j1}, x_{j2}, y_{j1}, y_{j2})_{j<n}, z1, z2, coframe
/// lambda^1 = dz1 - sum(y_{j1} dx_{j1} - y_{j2} dx_{j2}),
/// lambda^2 = dz2 - sum(y_{j2} dx_{j1} + y_{j1} dx_{j2}),
/// frame (X_{j1}, X_{j2}, Y_{j1}, Y_{j2})_j.
AffineCoframeModel make_holomorphic_contact_model(Index n);

/// Corank-3 model on R^{4n+3} whose pointwise frame curvature reproduces
/// the standard quaternionic triple omega^i = g(J_i ., .).
QuaternionicModel make_quaternionic_heisenberg_model(Index n);

/// lambda^i = dz_i - pi* mu^i on R^{n_dim + p}, with the horizontal frame
/// E_a = d/dw_a + sum_i mu^i(d/dw_a) d/dz_i.
AffineCoframeModel make_liouville_model(const LiouvilleModel& l);

/// Lift of sampled exact-Lagrangian data: appends the primitives as the
/// z-coordinates after checking discrete exactness (midpoint rule) on every
/// edge. Throws ExactnessError naming the worst edge when the finite
/// difference of a primitive disagrees with f*mu^i beyond mesh_tol.
/// The reported residual is the per-edge horizontality defect divided by
/// the edge length.
LiftResult lift_exact_lagrangian(const LiouvilleModel& l, const Matrix& points,
                                 const Matrix& primitives, double mesh_tol);

/// Canonical lift H(v) = (v, mu^1(v), ..., mu^p(v)) at a point. Requires
/// the tangent frame to span a (dmu^i)-regular, (dmu^i)-isotropic subspace.
frames::Frame formal_lift(const LiouvilleModel& l, const Vector& point,
                          const Matrix& tangent_frame, const Tolerance& tol = {});

}  // namespace fatdist::models
