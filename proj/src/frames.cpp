#include "fatdist/frames.hpp"

#include <Eigen/SVD>

#include "fatdist/rng.hpp"

namespace fatdist::frames {

namespace {

constexpr int kRetries = 16;

Matrix append_column(const Matrix& m, const Vector& v) {
    Matrix out(v.size(), m.cols() + 1);
    if (m.cols() > 0) out.leftCols(m.cols()) = m;
    out.col(m.cols()) = v;
    return out;
}

// Standard symplectic Gram for the pair ordering (u1, v1, ..., uk, vk).
Matrix paired_symplectic_gram(Index pairs) {
    Matrix s = Matrix::Zero(2 * pairs, 2 * pairs);
    for (Index i = 0; i < pairs; ++i) {
        s(2 * i, 2 * i + 1) = 1.0;
        s(2 * i + 1, 2 * i) = -1.0;
    }
    return s;
}

// --- verifier-only primitives: raw SVD, no shared subspace code ---

double raw_smallest_singular_value(const Matrix& m) {
    if (m.cols() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues().minCoeff();
}

Index raw_rank(const Matrix& m, double cut_rel, double cut_abs) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    const double cut = cut_rel * s(0) + cut_abs;
    Index r = 0;
    for (Index i = 0; i < s.size(); ++i)
        if (s(i) > cut) ++r;
    return r;
}

void verify_independence(Report& rep, const Matrix& vecs, const Tolerance& tol) {
    double sigma_min = raw_smallest_singular_value(vecs);
    double scale = vecs.norm();
    // Residual is the shortfall below the independence threshold (0 when
    // comfortably independent), so it composes with residual bounds.
    rep.add("independent", sigma_min > tol.threshold(scale),
            std::max(0.0, tol.threshold(scale) - sigma_min));
}

void verify_gram_zero(Report& rep, const std::string& name, const Matrix& form,
                      const Matrix& vecs, const Tolerance& tol) {
    double res = (vecs.transpose() * form * vecs).norm();
    rep.add_residual(name, res, 1e2 * tol.threshold(form.norm() * vecs.squaredNorm()));
}

void verify_gram_symplectic(Report& rep, const std::string& name, const Matrix& form,
                            const Matrix& vecs, const Tolerance& tol) {
    Matrix gram = vecs.transpose() * form * vecs;
    double res = (gram - paired_symplectic_gram(vecs.cols() / 2)).norm();
    rep.add_residual(name, res, 1e2 * tol.threshold(form.norm() * vecs.squaredNorm()));
}

void verify_regular(Report& rep, const std::string& name,
                    const std::vector<const Matrix*>& forms, const Matrix& vecs,
                    const Tolerance& tol) {
    const Index k = vecs.cols();
    Matrix eval(vecs.rows(), static_cast<Index>(forms.size()) * k);
    for (std::size_t i = 0; i < forms.size(); ++i)
        eval.middleCols(static_cast<Index>(i) * k, k) = *forms[i] * vecs;
    rep.add(name, raw_rank(eval, tol.rel_eps, tol.abs_eps) ==
                      static_cast<Index>(forms.size()) * k);
}

}  // namespace

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::horizontal_deg2: return "horizontal_deg2";
        case Regime::isocontact_deg2: return "isocontact_deg2";
        case Regime::horizontal_qcont: return "horizontal_qcont";
        case Regime::isocontact_qcont: return "isocontact_qcont";
    }
    throw PreconditionError("regime_name: unknown regime");
}

Regime parse_regime(const std::string& name) {
    if (name == "horizontal_deg2") return Regime::horizontal_deg2;
    if (name == "isocontact_deg2") return Regime::isocontact_deg2;
    if (name == "horizontal_qcont") return Regime::horizontal_qcont;
    if (name == "isocontact_qcont") return Regime::isocontact_qcont;
    throw SchemaError("unknown frame regime: " + name);
}

Frame build_horizontal_deg2(const fat2::FatTuple2& t, Index k, std::uint64_t seed) {
    if (k < 1) throw PreconditionError("build_horizontal_deg2: k >= 1 required");
    if (fat2::degree(t) != 2)
        throw PreconditionError("build_horizontal_deg2: tuple must have degree 2");
    const Tolerance& tol = t.tol();
    Matrix vecs(t.dim(), 0);
    Subspace v = Subspace::zero(t.dim());
    for (Index step = 0; step < k; ++step) {
        Subspace vo = fat2::omega_perp(t, v);
        Subspace doubled = fat2::omega_perp(t, vo);  // (V^Omega)^Omega
        Subspace inter = core::intersect(vo, doubled, tol);
        if (vo.dim() <= inter.dim())
            throw NoRoomError("build_horizontal_deg2: V^Omega \\ (V^Omega)^Omega is empty");
        Subspace comp = core::intersect(vo, inter.orthogonal_complement(tol), tol);

        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(step)));
        bool placed = false;
        for (int attempt = 0; attempt < kRetries && !placed; ++attempt) {
            Vector tau = comp.basis() * rng.unit_vector(comp.dim());
            if (doubled.distance(tau) <= tol.threshold(1.0)) continue;
            Matrix cand = append_column(vecs, tau);
            Subspace vc = Subspace::span(cand, tol);
            if (vc.dim() != cand.cols()) continue;
            if (!fat2::is_isotropic(t, vc) || !fat2::is_regular(t, vc)) continue;
            vecs = cand;
            v = vc;
            placed = true;
        }
        if (!placed)
            throw ConstructionFailureError("build_horizontal_deg2: retries exhausted");
    }
    return Frame{t.dim(), vecs, Regime::horizontal_deg2};
}

Frame build_isocontact_deg2(const fat2::FatTuple2& t, Index k, std::uint64_t seed) {
    if (k < 1) throw PreconditionError("build_isocontact_deg2: k >= 1 required");
    if (fat2::degree(t) != 2)
        throw PreconditionError("build_isocontact_deg2: tuple must have degree 2");
    const Tolerance& tol = t.tol();
    Matrix vecs(t.dim(), 0);
    Subspace v = Subspace::zero(t.dim());
    for (Index step = 0; step < k; ++step) {
        // The restriction of the tuple to D-hat = V^Omega is again a
        // degree-2 fat tuple; the next pair is solved there.
        Subspace dhat = fat2::omega_perp(t, v);
        if (dhat.dim() < 2)
            throw NoRoomError("build_isocontact_deg2: restricted tuple too small");
        const Matrix& b = dhat.basis();
        Matrix w1 = b.transpose() * t.omega1() * b;
        Matrix w2 = b.transpose() * t.omega2() * b;

        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(step)));
        bool placed = false;
        for (int attempt = 0; attempt < kRetries && !placed; ++attempt) {
            Vector u = rng.unit_vector(dhat.dim());
            // v with omega1(u, v) = 1 and omega2(u, v) = 0, min-norm.
            Matrix rows(2, dhat.dim());
            rows.row(0) = (w1.transpose() * u).transpose();
            rows.row(1) = (w2.transpose() * u).transpose();
            // omega_i(u, x) = u^T w_i x = (w_i^T u)^T x.
            Vector rhs(2);
            rhs << 1.0, 0.0;
            Vector w = rows.completeOrthogonalDecomposition().solve(rhs);
            if ((rows * w - rhs).norm() > tol.threshold(1.0)) continue;
            Matrix cand = append_column(append_column(vecs, b * u), b * w);
            Subspace vc = Subspace::span(cand, tol);
            if (vc.dim() != cand.cols()) continue;
            Matrix gram1 = cand.transpose() * t.omega1() * cand;
            Matrix gram2 = cand.transpose() * t.omega2() * cand;
            double scale = t.omega1().norm() * cand.squaredNorm();
            if ((gram1 - paired_symplectic_gram(cand.cols() / 2)).norm() >
                tol.threshold(scale))
                continue;
            if (gram2.norm() > tol.threshold(scale)) continue;
            if (!fat2::is_regular(t, vc)) continue;
            vecs = cand;
            v = vc;
            placed = true;
        }
        if (!placed)
            throw ConstructionFailureError("build_isocontact_deg2: retries exhausted");
    }
    return Frame{t.dim(), vecs, Regime::isocontact_deg2};
}

Frame build_horizontal_qcont(const qcont::QContTriple& q, Index k, std::uint64_t seed) {
    if (k < 1) throw PreconditionError("build_horizontal_qcont: k >= 1 required");
    const Tolerance& tol = q.tol();
    Matrix vecs(q.dim(), 0);
    Subspace v = Subspace::zero(q.dim());
    for (Index step = 0; step < k; ++step) {
        // tau in V^Omega \ V keeps the span isotropic (Pansu gives
        // regularity, which is re-checked anyway).
        Subspace vo = qcont::omega_perp3(q, v);
        if (vo.dim() <= v.dim())
            throw NoRoomError("build_horizontal_qcont: V^Omega \\ V is empty");
        Subspace comp = core::intersect(vo, v.orthogonal_complement(tol), tol);

        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(step)));
        bool placed = false;
        for (int attempt = 0; attempt < kRetries && !placed; ++attempt) {
            Vector tau = comp.basis() * rng.unit_vector(comp.dim());
            if (v.dim() > 0 && v.distance(tau) <= tol.threshold(1.0)) continue;
            Matrix cand = append_column(vecs, tau);
            Subspace vc = Subspace::span(cand, tol);
            if (vc.dim() != cand.cols()) continue;
            if (!qcont::is_isotropic3(q, vc)) continue;
            if (!qcont::pansu_check(q, vc)) continue;
            vecs = cand;
            v = vc;
            placed = true;
        }
        if (!placed)
            throw ConstructionFailureError("build_horizontal_qcont: retries exhausted");
    }
    return Frame{q.dim(), vecs, Regime::horizontal_qcont};
}

Frame build_isocontact_qcont(const qcont::QContTriple& q, Index k, std::uint64_t seed) {
    if (k < 1) throw PreconditionError("build_isocontact_qcont: k >= 1 required");
    const Tolerance& tol = q.tol();
    Matrix vecs(q.dim(), 0);
    Subspace v = Subspace::zero(q.dim());
    for (Index step = 0; step < k; ++step) {
        std::uint64_t step_seed = mix_seed(seed, static_cast<std::uint64_t>(step));
        bool placed = false;
        for (int attempt = 0; attempt < kRetries && !placed; ++attempt) {
            std::uint64_t s = mix_seed(step_seed, static_cast<std::uint64_t>(attempt));
            Vector tau;
            try {
                tau = qcont::pick_tau(q, v, s);
            } catch (const ConstructionFailureError&) {
                continue;
            }
            Subspace v_tau = Subspace::span(append_column(vecs, tau), tol);
            Vector eta;
            try {
                eta = qcont::pick_eta(q, v_tau, tau, mix_seed(s, 1));
            } catch (const NoRoomError&) {
                continue;
            }
            // Symplectic correction: kill the omega1 pairings of eta with
            // the earlier pairs. Shifts by elements of V, which preserves
            // every other constraint on eta.
            for (Index i = 0; 2 * i + 1 < vecs.cols(); ++i) {
                Vector u_i = vecs.col(2 * i), v_i = vecs.col(2 * i + 1);
                double a = v_i.dot(q.omega(1) * eta);
                double b = -u_i.dot(q.omega(1) * eta);
                eta += a * u_i + b * v_i;
            }
            eta /= tau.dot(q.omega(1) * eta);

            Matrix cand = append_column(append_column(vecs, tau), eta);
            Subspace vc = Subspace::span(cand, tol);
            if (vc.dim() != cand.cols()) continue;
            double scale = q.omega(1).norm() * cand.squaredNorm();
            Matrix gram1 = cand.transpose() * q.omega(1) * cand;
            if ((gram1 - paired_symplectic_gram(cand.cols() / 2)).norm() >
                tol.threshold(scale))
                continue;
            if ((cand.transpose() * q.omega(2) * cand).norm() > tol.threshold(scale))
                continue;
            if ((cand.transpose() * q.omega(3) * cand).norm() > tol.threshold(scale))
                continue;
            if (!qcont::is_regular3(q, vc)) continue;
            vecs = cand;
            v = vc;
            placed = true;
        }
        if (!placed)
            throw ConstructionFailureError("build_isocontact_qcont: retries exhausted");
    }
    return Frame{q.dim(), vecs, Regime::isocontact_qcont};
}

Report verify_frame(const Frame& frame, const fat2::FatTuple2& ctx) {
    if (frame.regime != Regime::horizontal_deg2 &&
        frame.regime != Regime::isocontact_deg2)
        throw PreconditionError("verify_frame: regime requires a qcont context");
    if (frame.ambient_dim != ctx.dim() || frame.vectors.rows() != ctx.dim())
        throw DimensionMismatchError("verify_frame: ambient dimension mismatch");
    const Tolerance& tol = ctx.tol();
    const Matrix& vecs = frame.vectors;
    Report rep;
    verify_independence(rep, vecs, tol);
    if (frame.regime == Regime::horizontal_deg2) {
        verify_gram_zero(rep, "omega1_isotropic", ctx.omega1(), vecs, tol);
        verify_gram_zero(rep, "omega2_isotropic", ctx.omega2(), vecs, tol);
    } else {
        rep.add("even_count", vecs.cols() % 2 == 0);
        verify_gram_symplectic(rep, "omega1_symplectic", ctx.omega1(), vecs, tol);
        verify_gram_zero(rep, "omega2_isotropic", ctx.omega2(), vecs, tol);
    }
    verify_regular(rep, "regular", {&ctx.omega1(), &ctx.omega2()}, vecs, tol);
    return rep;
}

Report verify_frame(const Frame& frame, const qcont::QContTriple& ctx) {
    if (frame.regime != Regime::horizontal_qcont &&
        frame.regime != Regime::isocontact_qcont)
        throw PreconditionError("verify_frame: regime requires a fat tuple context");
    if (frame.ambient_dim != ctx.dim() || frame.vectors.rows() != ctx.dim())
        throw DimensionMismatchError("verify_frame: ambient dimension mismatch");
    const Tolerance& tol = ctx.tol();
    const Matrix& vecs = frame.vectors;
    Report rep;
    verify_independence(rep, vecs, tol);
    if (frame.regime == Regime::horizontal_qcont) {
        verify_gram_zero(rep, "omega1_isotropic", ctx.omega(1), vecs, tol);
        verify_gram_zero(rep, "omega2_isotropic", ctx.omega(2), vecs, tol);
        verify_gram_zero(rep, "omega3_isotropic", ctx.omega(3), vecs, tol);
    } else {
        rep.add("even_count", vecs.cols() % 2 == 0);
        verify_gram_symplectic(rep, "omega1_symplectic", ctx.omega(1), vecs, tol);
        verify_gram_zero(rep, "omega2_isotropic", ctx.omega(2), vecs, tol);
        verify_gram_zero(rep, "omega3_isotropic", ctx.omega(3), vecs, tol);
    }
    verify_regular(rep, "regular", {&ctx.omega(1), &ctx.omega(2), &ctx.omega(3)},
                   vecs, tol);
    return rep;
}

}  // namespace fatdist::frames
