#include "fatdist/models.hpp"

#include <string>

#include "fatdist/rng.hpp"

namespace fatdist::models {

namespace {

void check_same_dim(Index a, Index b, const char* what) {
    if (a != b) throw DimensionMismatchError(std::string(what) + ": dimension mismatch");
}

// Evaluated coframe rows at a point, p x dim.
Matrix coframe_at(const AffineCoframeModel& m, const Vector& point) {
    Matrix rows(m.p, m.dim_m);
    for (Index s = 0; s < m.p; ++s) {
        const auto& lam = m.lambdas[static_cast<std::size_t>(s)];
        rows.row(s) = (lam.constant + lam.linear * point).transpose();
    }
    return rows;
}

}  // namespace

AffineVectorField bracket(const AffineVectorField& x, const AffineVectorField& y) {
    check_same_dim(x.dim, y.dim, "bracket");
    AffineVectorField out;
    out.dim = x.dim;
    out.linear = y.linear * x.linear - x.linear * y.linear;
    out.constant = y.linear * x.constant - x.linear * y.constant;
    return out;
}

Vector eval_curvature_coframe(const AffineCoframeModel& m, const Vector& point,
                              const Vector& u, const Vector& v, const Tolerance& tol) {
    check_same_dim(point.size(), m.dim_m, "eval_curvature_coframe");
    check_same_dim(u.size(), m.dim_m, "eval_curvature_coframe");
    check_same_dim(v.size(), m.dim_m, "eval_curvature_coframe");
    Matrix rows = coframe_at(m, point);
    double scale = rows.norm() * std::max(u.norm(), v.norm());
    if ((rows * u).norm() > tol.threshold(scale) ||
        (rows * v).norm() > tol.threshold(scale))
        throw PreconditionError("eval_curvature_coframe: arguments not horizontal");
    Vector out(m.p);
    for (Index s = 0; s < m.p; ++s)
        out(s) = u.dot(m.lambdas[static_cast<std::size_t>(s)].d() * v);
    return out;
}

Vector eval_curvature_bracket(const AffineCoframeModel& m, Index fi, Index fj,
                              const Vector& point) {
    if (!m.has_frame())
        throw PreconditionError("eval_curvature_bracket: model carries no frame");
    if (fi < 0 || fj < 0 || fi >= static_cast<Index>(m.frame.size()) ||
        fj >= static_cast<Index>(m.frame.size()))
        throw PreconditionError("eval_curvature_bracket: frame index out of range");
    AffineVectorField br = bracket(m.frame[static_cast<std::size_t>(fi)],
                                   m.frame[static_cast<std::size_t>(fj)]);
    Vector at = br.at(point);
    Matrix rows = coframe_at(m, point);
    return -(rows * at);
}

Report validate_model(const AffineCoframeModel& m, std::uint64_t seed, int probes,
                      const Tolerance& tol) {
    Report rep;
    rep.add("coframe_count", static_cast<Index>(m.lambdas.size()) == m.p);
    Rng rng(seed);
    double worst_indep = 0.0;
    double worst_annih = 0.0;
    bool rows_independent = true;
    for (int t = 0; t < probes; ++t) {
        Vector x = rng.gaussian_vector(m.dim_m);
        Matrix rows = coframe_at(m, x);
        Eigen::JacobiSVD<Matrix> svd(rows);
        double sigma_min = svd.singularValues().minCoeff();
        worst_indep = std::max(worst_indep, tol.threshold(rows.norm()) - sigma_min);
        if (sigma_min <= tol.threshold(rows.norm())) rows_independent = false;
        for (const auto& f : m.frame) {
            double res = (rows * f.at(x)).norm();
            worst_annih = std::max(worst_annih, res);
        }
    }
    rep.add("coframe_rows_independent", rows_independent, std::max(0.0, worst_indep));
    if (m.has_frame()) {
        rep.add_residual("frame_annihilated", worst_annih, 1e-10);
        Matrix cols(m.dim_m, static_cast<Index>(m.frame.size()));
        Vector x = rng.gaussian_vector(m.dim_m);
        for (std::size_t i = 0; i < m.frame.size(); ++i)
            cols.col(static_cast<Index>(i)) = m.frame[i].at(x);
        rep.add("frame_independent",
                core::rank(cols, tol) == static_cast<Index>(m.frame.size()));
        rep.add("frame_spans_kernel",
                static_cast<Index>(m.frame.size()) == m.dim_m - m.p);
    }
    return rep;
}

Matrix curvature_gram(const AffineCoframeModel& m, Index s, const Vector& point) {
    if (!m.has_frame())
        throw PreconditionError("curvature_gram: model carries no frame");
    const Index k = static_cast<Index>(m.frame.size());
    Matrix cols(m.dim_m, k);
    for (Index i = 0; i < k; ++i)
        cols.col(i) = m.frame[static_cast<std::size_t>(i)].at(point);
    const Matrix d = m.lambdas.at(static_cast<std::size_t>(s)).d();
    return cols.transpose() * d * cols;
}

fat2::FatTuple2 pointwise_tuple(const AffineCoframeModel& m, const Vector& point,
                                const Tolerance& tol) {
    if (m.p != 2)
        throw PreconditionError("pointwise_tuple: corank-2 model required");
    return fat2::FatTuple2(curvature_gram(m, 0, point), curvature_gram(m, 1, point), tol);
}

AffineCoframeModel make_holomorphic_contact_model(Index n) {
    if (n < 1)
        throw PreconditionError("make_holomorphic_contact_model: n >= 1 required");
    const Index dim = 4 * n + 2;
    const Index z1 = 4 * n, z2 = 4 * n + 1;
    auto x1 = [](Index j) { return 4 * j; };
    auto x2 = [](Index j) { return 4 * j + 1; };
    auto y1 = [](Index j) { return 4 * j + 2; };
    auto y2 = [](Index j) { return 4 * j + 3; };

    AffineCovector l1{dim, Vector::Zero(dim), Matrix::Zero(dim, dim)};
    AffineCovector l2{dim, Vector::Zero(dim), Matrix::Zero(dim, dim)};
    l1.constant(z1) = 1.0;
    l2.constant(z2) = 1.0;
    for (Index j = 0; j < n; ++j) {
        // lambda^1 = dz1 - sum(y_{j1} dx_{j1} - y_{j2} dx_{j2})
        l1.linear(x1(j), y1(j)) = -1.0;
        l1.linear(x2(j), y2(j)) = 1.0;
        // lambda^2 = dz2 - sum(y_{j2} dx_{j1} + y_{j1} dx_{j2})
        l2.linear(x1(j), y2(j)) = -1.0;
        l2.linear(x2(j), y1(j)) = -1.0;
    }

    AffineCoframeModel m;
    m.dim_m = dim;
    m.p = 2;
    m.lambdas = {l1, l2};
    for (Index j = 0; j < n; ++j) {
        AffineVectorField xj1{dim, Vector::Zero(dim), Matrix::Zero(dim, dim)};
        xj1.constant(x1(j)) = 1.0;
        xj1.linear(z1, y1(j)) = 1.0;
        xj1.linear(z2, y2(j)) = 1.0;
        AffineVectorField xj2{dim, Vector::Zero(dim), Matrix::Zero(dim, dim)};
        xj2.constant(x2(j)) = 1.0;
        xj2.linear(z1, y2(j)) = -1.0;
        xj2.linear(z2, y1(j)) = 1.0;
        AffineVectorField yj1{dim, Vector::Zero(dim), Matrix::Zero(dim, dim)};
        yj1.constant(y1(j)) = 1.0;
        AffineVectorField yj2{dim, Vector::Zero(dim), Matrix::Zero(dim, dim)};
        yj2.constant(y2(j)) = 1.0;
        m.frame.push_back(xj1);
        m.frame.push_back(xj2);
        m.frame.push_back(yj1);
        m.frame.push_back(yj2);
    }
    return m;
}

QuaternionicModel make_quaternionic_heisenberg_model(Index n) {
    if (n < 1)
        throw PreconditionError("make_quaternionic_heisenberg_model: n >= 1 required");
    qcont::QContTriple triple = qcont::QContTriple::standard(n);
    const Index w = 4 * n;
    const Index dim = w + 3;

    AffineCoframeModel m;
    m.dim_m = dim;
    m.p = 3;
    for (Index i = 0; i < 3; ++i) {
        // lambda^i = dz_i - mu^i with d(mu^i) = J_i, realized by the
        // coefficient matrix -J_i/2 (skewness makes B^T - B = J_i).
        AffineCovector lam{dim, Vector::Zero(dim), Matrix::Zero(dim, dim)};
        lam.constant(w + i) = 1.0;
        lam.linear.topLeftCorner(w, w) = 0.5 * triple.j(static_cast<int>(i) + 1);
        m.lambdas.push_back(lam);
    }
    for (Index a = 0; a < w; ++a) {
        AffineVectorField e{dim, Vector::Zero(dim), Matrix::Zero(dim, dim)};
        e.constant(a) = 1.0;
        for (Index i = 0; i < 3; ++i)
            e.linear.row(w + i).head(w) =
                -0.5 * triple.j(static_cast<int>(i) + 1).row(a);
        m.frame.push_back(e);
    }
    return QuaternionicModel{std::move(m), std::move(triple)};
}

AffineCoframeModel make_liouville_model(const LiouvilleModel& l) {
    if (static_cast<Index>(l.mus.size()) != l.p)
        throw PreconditionError("make_liouville_model: mu count != p");
    for (Index i = 0; i < l.p; ++i) {
        const auto& mu = l.mus[static_cast<std::size_t>(i)];
        if (mu.dim != l.n_dim)
            throw DimensionMismatchError("make_liouville_model: mu dimension mismatch");
        if (core::rank(mu.d()) != l.n_dim)
            throw PreconditionError("make_liouville_model: d(mu^" +
                                    std::to_string(i + 1) + ") is degenerate");
    }
    const Index n = l.n_dim;
    const Index dim = n + l.p;

    AffineCoframeModel m;
    m.dim_m = dim;
    m.p = l.p;
    for (Index i = 0; i < l.p; ++i) {
        const auto& mu = l.mus[static_cast<std::size_t>(i)];
        AffineCovector lam{dim, Vector::Zero(dim), Matrix::Zero(dim, dim)};
        lam.constant(n + i) = 1.0;
        lam.constant.head(n) = -mu.constant;
        lam.linear.topLeftCorner(n, n) = -mu.linear;
        m.lambdas.push_back(lam);
    }
    for (Index a = 0; a < n; ++a) {
        AffineVectorField e{dim, Vector::Zero(dim), Matrix::Zero(dim, dim)};
        e.constant(a) = 1.0;
        for (Index i = 0; i < l.p; ++i) {
            const auto& mu = l.mus[static_cast<std::size_t>(i)];
            e.constant(n + i) = mu.constant(a);
            e.linear.row(n + i).head(n) = mu.linear.row(a);
        }
        m.frame.push_back(e);
    }
    return m;
}

LiftResult lift_exact_lagrangian(const LiouvilleModel& l, const Matrix& points,
                                 const Matrix& primitives, double mesh_tol) {
    const Index n = l.n_dim, p = l.p, m = points.cols();
    if (points.rows() != n)
        throw DimensionMismatchError("lift_exact_lagrangian: point dimension mismatch");
    if (primitives.rows() != p || primitives.cols() != m)
        throw DimensionMismatchError("lift_exact_lagrangian: primitive shape mismatch");
    if (m < 2)
        throw PreconditionError("lift_exact_lagrangian: need at least two samples");

    LiftResult out;
    out.points.resize(n + p, m);
    out.points.topRows(n) = points;
    out.points.bottomRows(p) = primitives;

    // Midpoint-rule horizontality defect per edge, normalized by edge length.
    for (Index e = 0; e + 1 < m; ++e) {
        Vector df = points.col(e + 1) - points.col(e);
        Vector mid = 0.5 * (points.col(e) + points.col(e + 1));
        Vector dlift = out.points.col(e + 1) - out.points.col(e);
        double len = dlift.norm();
        if (len == 0.0)
            throw PreconditionError("lift_exact_lagrangian: repeated sample at edge " +
                                    std::to_string(e));
        double defect = 0.0;
        for (Index i = 0; i < p; ++i) {
            double pull = l.mus[static_cast<std::size_t>(i)].at(mid, df);
            defect = std::max(defect,
                              std::abs(primitives(i, e + 1) - primitives(i, e) - pull));
        }
        double res = defect / len;
        if (res > out.max_edge_residual) {
            out.max_edge_residual = res;
            out.worst_edge = e;
        }
    }
    if (out.max_edge_residual > mesh_tol)
        throw ExactnessError(
            "lift_exact_lagrangian: discrete exactness fails at edge " +
                std::to_string(out.worst_edge) + " (residual " +
                std::to_string(out.max_edge_residual) + ")",
            static_cast<std::size_t>(out.worst_edge), out.max_edge_residual);
    return out;
}

frames::Frame formal_lift(const LiouvilleModel& l, const Vector& point,
                          const Matrix& tangent_frame, const Tolerance& tol) {
    const Index n = l.n_dim, p = l.p, k = tangent_frame.cols();
    if (point.size() != n || tangent_frame.rows() != n)
        throw DimensionMismatchError("formal_lift: dimension mismatch");
    if (k < 1) throw PreconditionError("formal_lift: empty tangent frame");

    // (dmu^i)-isotropy and -regularity of the tangent span.
    Matrix eval(n, p * k);
    for (Index i = 0; i < p; ++i) {
        Matrix d = l.dmu(i);
        double scale = d.norm() * tangent_frame.squaredNorm();
        if ((tangent_frame.transpose() * d * tangent_frame).norm() > tol.threshold(scale))
            throw PreconditionError("formal_lift: tangent frame not isotropic for dmu^" +
                                    std::to_string(i + 1));
        eval.middleCols(i * k, k) = d * tangent_frame;
    }
    if (core::rank(eval, tol) != p * k)
        throw PreconditionError("formal_lift: tangent frame not regular");

    frames::Frame out;
    out.ambient_dim = n + p;
    out.vectors.resize(n + p, k);
    out.vectors.topRows(n) = tangent_frame;
    for (Index i = 0; i < p; ++i) {
        const auto& mu = l.mus[static_cast<std::size_t>(i)];
        out.vectors.row(n + i) =
            (mu.constant + mu.linear * point).transpose() * tangent_frame;
    }
    out.regime = (p == 3) ? frames::Regime::horizontal_qcont
                          : frames::Regime::horizontal_deg2;
    return out;
}

}  // namespace fatdist::models
