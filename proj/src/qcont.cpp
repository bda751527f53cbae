#include "fatdist/qcont.hpp"

#include <Eigen/Eigenvalues>

#include "fatdist/rng.hpp"

namespace fatdist::qcont {

namespace {

// Left multiplication by i, j, k on H = R^4 in the basis (1, i, j, k).
Matrix quaternion_block(int which) {
    Matrix m = Matrix::Zero(4, 4);
    switch (which) {
        case 1:
            m << 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0;
            break;
        case 2:
            m << 0, 0, -1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, -1, 0, 0;
            break;
        default:
            m << 0, 0, 0, -1, 0, 0, -1, 0, 0, 1, 0, 0, 1, 0, 0, 0;
            break;
    }
    return m;
}

Matrix gram(const Matrix& form, const Matrix& basis) {
    return basis.transpose() * form * basis;
}

}  // namespace

QContTriple::QContTriple(Matrix g, Matrix j1, Matrix j2, Matrix j3, Tolerance tol)
    : g_(std::move(g)), j1_(std::move(j1)), j2_(std::move(j2)), j3_(std::move(j3)), tol_(tol) {
    const Index n = g_.rows();
    if (n % 4 != 0)
        throw InvalidFormError("QContTriple: dimension must be divisible by 4");
    for (const Matrix* m : {&g_, &j1_, &j2_, &j3_}) {
        require_finite(*m, "QContTriple");
        if (m->rows() != n || m->cols() != n)
            throw DimensionMismatchError("QContTriple: size mismatch");
    }
    if ((g_ - g_.transpose()).norm() > tol_.threshold(g_.norm()))
        throw InvalidFormError("QContTriple: g is not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> es(g_);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw InvalidFormError("QContTriple: g is not positive-definite");

    const Matrix id = Matrix::Identity(n, n);
    auto check = [&](const Matrix& m, const char* what) {
        if (m.norm() > 1e3 * tol_.threshold(1.0))
            throw InvalidFormError(std::string("QContTriple: ") + what);
    };
    check(j1_ * j1_ + id, "J1^2 != -I");
    check(j2_ * j2_ + id, "J2^2 != -I");
    check(j3_ * j3_ + id, "J3^2 != -I");
    check(j1_ * j2_ * j3_ + id, "J1 J2 J3 != -I");

    // omega^i(u, v) = g(J_i u, v).
    omega1_ = j1_.transpose() * g_;
    omega2_ = j2_.transpose() * g_;
    omega3_ = j3_.transpose() * g_;
    for (const Matrix* w : {&omega1_, &omega2_, &omega3_}) {
        if ((*w + w->transpose()).norm() > 1e3 * tol_.threshold(w->norm()))
            throw InvalidFormError("QContTriple: induced form is not skew");
        if (core::rank(*w, tol_) != n)
            throw InvalidFormError("QContTriple: induced form is degenerate");
    }
}

QContTriple QContTriple::standard(Index n, Tolerance tol) {
    if (n < 1) throw PreconditionError("QContTriple::standard: n >= 1 required");
    const Index d = 4 * n;
    Matrix j1 = Matrix::Zero(d, d), j2 = Matrix::Zero(d, d), j3 = Matrix::Zero(d, d);
    for (Index b = 0; b < n; ++b) {
        j1.block(4 * b, 4 * b, 4, 4) = quaternion_block(1);
        j2.block(4 * b, 4 * b, 4, 4) = quaternion_block(2);
        j3.block(4 * b, 4 * b, 4, 4) = quaternion_block(3);
    }
    return QContTriple(Matrix::Identity(d, d), j1, j2, j3, tol);
}

const Matrix& QContTriple::j(int i) const {
    switch (i) {
        case 1: return j1_;
        case 2: return j2_;
        case 3: return j3_;
    }
    throw PreconditionError("QContTriple::j: index out of range");
}

const Matrix& QContTriple::omega(int i) const {
    switch (i) {
        case 1: return omega1_;
        case 2: return omega2_;
        case 3: return omega3_;
    }
    throw PreconditionError("QContTriple::omega: index out of range");
}

Report validate_triple(const QContTriple& q) {
    const Index n = q.dim();
    const Matrix id = Matrix::Identity(n, n);
    const double bound = 1e3 * q.tol().threshold(1.0);
    Report rep;
    rep.add_residual("g_symmetric", (q.g() - q.g().transpose()).norm(), bound);
    Eigen::SelfAdjointEigenSolver<Matrix> es(q.g());
    rep.add("g_positive_definite", es.eigenvalues().minCoeff() > 0.0,
            std::max(0.0, -es.eigenvalues().minCoeff()));
    rep.add_residual("j1_squares_to_minus_id", (q.j(1) * q.j(1) + id).norm(), bound);
    rep.add_residual("j2_squares_to_minus_id", (q.j(2) * q.j(2) + id).norm(), bound);
    rep.add_residual("j3_squares_to_minus_id", (q.j(3) * q.j(3) + id).norm(), bound);
    rep.add_residual("j1j2j3_is_minus_id", (q.j(1) * q.j(2) * q.j(3) + id).norm(), bound);
    for (int i = 1; i <= 3; ++i) {
        const Matrix& w = q.omega(i);
        rep.add_residual("omega" + std::to_string(i) + "_skew",
                         (w + w.transpose()).norm(), bound);
        rep.add("omega" + std::to_string(i) + "_nondegenerate",
                core::rank(w, q.tol()) == n);
        rep.add_residual("omega" + std::to_string(i) + "_matches_g_j",
                         (w - q.j(i).transpose() * q.g()).norm(), bound);
    }
    return rep;
}

fat2::FatTuple2 induced_fat_pair(const QContTriple& q) {
    fat2::FatTuple2 pair(q.omega(2), q.omega(3), q.tol());
    Matrix a = fat2::connecting_automorphism(pair).a;
    // omega2(u, -J1 v) = omega3(u, v).
    if ((a + q.j(1)).norm() > 1e3 * q.tol().threshold(q.j(1).norm()))
        throw InternalInconsistencyError("induced_fat_pair: connecting automorphism != -J1");
    return pair;
}

Subspace omega_perp3(const QContTriple& q, const Subspace& v) {
    const Tolerance& tol = q.tol();
    Subspace r = core::form_perp(v, q.omega(1), tol);
    r = core::intersect(r, core::form_perp(v, q.omega(2), tol), tol);
    return core::intersect(r, core::form_perp(v, q.omega(3), tol), tol);
}

bool is_isotropic3(const QContTriple& q, const Subspace& v) {
    for (int i = 1; i <= 3; ++i) {
        const Matrix& w = q.omega(i);
        if (gram(w, v.basis()).norm() > q.tol().threshold(w.norm())) return false;
    }
    return true;
}

bool is_regular3(const QContTriple& q, const Subspace& v) {
    const Index k = v.dim();
    Matrix eval(q.dim(), 3 * k);
    eval << q.omega(1) * v.basis(), q.omega(2) * v.basis(), q.omega(3) * v.basis();
    return core::rank(eval, q.tol()) == 3 * k;
}

bool pansu_check(const QContTriple& q, const Subspace& v) {
    if (!is_isotropic3(q, v))
        throw PreconditionError("pansu_check: subspace is not isotropic");
    return is_regular3(q, v);
}

Report decomposition_check(const QContTriple& q, const Subspace& w) {
    const Tolerance& tol = q.tol();
    Subspace wo = omega_perp3(q, w);
    Subspace sum_jw = Subspace::zero(q.dim());
    for (int i = 1; i <= 3; ++i)
        sum_jw = core::sum(sum_jw, w.map(q.j(i), tol), tol);
    bool regular = is_regular3(q, w);

    Report rep;
    double ortho = 0.0;
    if (wo.dim() > 0 && sum_jw.dim() > 0)
        ortho = (wo.basis().transpose() * q.g() * sum_jw.basis()).norm();
    rep.add_residual("g_orthogonal", ortho, 1e3 * tol.threshold(1.0));
    rep.add("spans_whole_space", wo.dim() + sum_jw.dim() >= q.dim() &&
                                     core::sum(wo, sum_jw, tol).dim() == q.dim());
    bool direct = sum_jw.dim() == 3 * w.dim();
    rep.add("sum_jw_direct", direct);
    rep.add("direct_iff_regular", direct == regular);
    if (regular)
        rep.add("dims_add_up", wo.dim() == q.dim() - 3 * w.dim());
    return rep;
}

Vector pick_tau(const QContTriple& q, const Subspace& v, std::uint64_t seed) {
    const Tolerance& tol = q.tol();
    Subspace vo = omega_perp3(q, v);
    Subspace bad = v;
    for (int i = 1; i <= 3; ++i)
        bad = core::sum(bad, v.map(q.j(i), tol), tol);
    Subspace inter = core::intersect(vo, bad, tol);
    if (v.dim() > 0 && inter.dim() != v.dim())
        throw InternalInconsistencyError(
            "pick_tau: dim(V^Omega ∩ (V + sum J_i V)) != dim V");
    if (vo.dim() <= inter.dim())
        throw NoRoomError("pick_tau: intersection saturates V^Omega");

    Subspace comp = core::intersect(vo, inter.orthogonal_complement(tol), tol);
    Rng rng(seed);
    for (int attempt = 0; attempt < 16; ++attempt) {
        Vector tau = comp.basis() * rng.unit_vector(comp.dim());
        if (bad.dim() > 0 && bad.distance(tau) <= tol.threshold(1.0)) continue;
        Matrix ext(q.dim(), v.dim() + 1);
        ext << v.basis(), tau;
        if (is_regular3(q, Subspace::span(ext, tol))) return tau;
    }
    throw ConstructionFailureError("pick_tau: retries exhausted");
}

Vector pick_eta(const QContTriple& q, const Subspace& v_tau, const Vector& tau,
                std::uint64_t seed) {
    const Tolerance& tol = q.tol();
    Subspace w = core::intersect(core::form_perp(v_tau, q.omega(2), tol),
                                 core::form_perp(v_tau, q.omega(3), tol), tol);
    Subspace bad = core::sum(v_tau, v_tau.map(q.j(1), tol), tol);

    // Affine slice omega1(tau, .) = 1 inside w.
    Eigen::RowVectorXd row = tau.transpose() * q.omega(1) * w.basis();
    if (row.norm() <= tol.threshold(1.0))
        throw NoRoomError("pick_eta: omega1(tau, .) vanishes on the slice");
    Vector particular = w.basis() * (row.transpose() / row.squaredNorm());
    Matrix kernel = core::kernel_basis(Matrix(row), tol);

    Rng rng(seed);
    for (int attempt = 0; attempt < 16; ++attempt) {
        Vector eta = particular;
        if (kernel.cols() > 0)
            eta += w.basis() * (kernel * rng.gaussian_vector(kernel.cols()));
        if (bad.distance(eta) <= tol.threshold(1.0)) continue;
        double pairing = tau.dot(q.omega(1) * eta);
        if (std::abs(pairing) <= tol.threshold(1.0)) continue;
        return eta / pairing;
    }
    throw NoRoomError("pick_eta: admissible slice is empty at tolerance");
}

}  // namespace fatdist::qcont
