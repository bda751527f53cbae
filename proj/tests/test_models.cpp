#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fatdist/models.hpp"
#include "fatdist/rng.hpp"
#include "fatdist/suites.hpp"

using namespace fatdist;
using models::AffineVectorField;

namespace {

AffineVectorField random_field(Rng& rng, Index dim) {
    return AffineVectorField{dim, rng.gaussian_vector(dim), rng.gaussian_matrix(dim, dim)};
}

double field_distance(const AffineVectorField& a, const AffineVectorField& b) {
    return (a.constant - b.constant).norm() + (a.linear - b.linear).norm();
}

}  // namespace

TEST_CASE("bracket is bilinear antisymmetric and satisfies Jacobi") {
    Rng rng(1);
    const Index d = 5;
    AffineVectorField x = random_field(rng, d), y = random_field(rng, d),
                      z = random_field(rng, d);

    AffineVectorField xy = models::bracket(x, y);
    AffineVectorField yx = models::bracket(y, x);
    CHECK((xy.constant + yx.constant).norm() < 1e-12);
    CHECK((xy.linear + yx.linear).norm() < 1e-12);

    // Jacobi: [x,[y,z]] + [y,[z,x]] + [z,[x,y]] = 0.
    AffineVectorField j1 = models::bracket(x, models::bracket(y, z));
    AffineVectorField j2 = models::bracket(y, models::bracket(z, x));
    AffineVectorField j3 = models::bracket(z, models::bracket(x, y));
    CHECK((j1.constant + j2.constant + j3.constant).norm() < 1e-12);
    CHECK((j1.linear + j2.linear + j3.linear).norm() < 1e-12);

    CHECK_THROWS_AS(models::bracket(x, random_field(rng, 4)), DimensionMismatchError);
}

TEST_CASE("holomorphic model bracket table for n = 1") {
    auto m = models::make_holomorphic_contact_model(1);
    // Frame order X11, X12, Y11, Y12; z-coordinates are indices 4, 5.
    const auto& X11 = m.frame[0];
    const auto& X12 = m.frame[1];
    const auto& Y11 = m.frame[2];
    const auto& Y12 = m.frame[3];
    auto unit_z = [&](Index zi, double sign) {
        AffineVectorField f{m.dim_m, Vector::Zero(m.dim_m), Matrix::Zero(m.dim_m, m.dim_m)};
        f.constant(zi) = sign;
        return f;
    };
    CHECK(field_distance(models::bracket(Y11, X11), unit_z(4, 1.0)) < 1e-14);
    CHECK(field_distance(models::bracket(Y11, X12), unit_z(5, 1.0)) < 1e-14);
    CHECK(field_distance(models::bracket(Y12, X11), unit_z(5, 1.0)) < 1e-14);
    CHECK(field_distance(models::bracket(Y12, X12), unit_z(4, -1.0)) < 1e-14);
    AffineVectorField zero_f = models::bracket(X11, X12);
    CHECK(zero_f.constant.norm() < 1e-14);
    CHECK(zero_f.linear.norm() < 1e-14);
    zero_f = models::bracket(Y11, Y12);
    CHECK(zero_f.constant.norm() < 1e-14);
    CHECK(zero_f.linear.norm() < 1e-14);
}

TEST_CASE("coframe and bracket curvatures agree with the sign convention") {
    auto m = models::make_holomorphic_contact_model(1);
    Rng rng(7);
    Vector x = rng.gaussian_vector(m.dim_m);
    // dlambda^1(Y11, X11) = -1; Omega = -lambda([Y11, X11]) matches.
    Vector u = m.frame[2].at(x);  // Y11
    Vector v = m.frame[0].at(x);  // X11
    Vector cf = models::eval_curvature_coframe(m, x, u, v);
    CHECK(cf(0) == doctest::Approx(-1.0));
    CHECK(cf(1) == doctest::Approx(0.0).epsilon(1e-12));
    Vector br = models::eval_curvature_bracket(m, 2, 0, x);
    CHECK((cf - br).norm() < 1e-12);
}

TEST_CASE("curvatures agree at random points for every frame pair") {
    std::vector<models::AffineCoframeModel> ms;
    ms.push_back(models::make_holomorphic_contact_model(2));
    ms.push_back(models::make_quaternionic_heisenberg_model(1).model);
    ms.push_back(models::make_liouville_model(suites::flat_liouville_pair()));
    Rng rng(11);
    for (const auto& m : ms) {
        Vector x = rng.gaussian_vector(m.dim_m);
        for (std::size_t i = 0; i < m.frame.size(); ++i)
            for (std::size_t j = 0; j < m.frame.size(); ++j) {
                Vector cf = models::eval_curvature_coframe(
                    m, x, m.frame[i].at(x), m.frame[j].at(x));
                Vector br = models::eval_curvature_bracket(
                    m, static_cast<Index>(i), static_cast<Index>(j), x);
                CHECK((cf - br).norm() < 1e-12);
            }
    }
}

TEST_CASE("eval_curvature_coframe requires horizontal arguments") {
    auto m = models::make_holomorphic_contact_model(1);
    Vector x = Vector::Zero(m.dim_m);
    Vector u = m.frame[0].at(x);
    Vector bad = Vector::Unit(m.dim_m, 4);  // d/dz1 is not horizontal
    CHECK_THROWS_AS(models::eval_curvature_coframe(m, x, u, bad), PreconditionError);
}

TEST_CASE("validate_model accepts the built-in models") {
    CHECK(models::validate_model(models::make_holomorphic_contact_model(2), 3).pass());
    CHECK(models::validate_model(models::make_quaternionic_heisenberg_model(2).model, 4).pass());
    CHECK(models::validate_model(
              models::make_liouville_model(suites::flat_liouville_pair()), 5)
              .pass());
}

TEST_CASE("quaternionic heisenberg curvature reproduces the triple") {
    auto qm = models::make_quaternionic_heisenberg_model(2);
    Rng rng(13);
    Vector x = rng.gaussian_vector(qm.model.dim_m);
    for (Index s = 0; s < 3; ++s) {
        Matrix g = models::curvature_gram(qm.model, s, x);
        CHECK((g - qm.triple.omega(static_cast<int>(s) + 1)).norm() < 1e-12);
    }
}

TEST_CASE("pointwise tuple of the holomorphic model is degree-2 fat") {
    auto m = models::make_holomorphic_contact_model(2);
    Rng rng(17);
    fat2::FatTuple2 t = models::pointwise_tuple(m, rng.gaussian_vector(m.dim_m));
    CHECK(fat2::is_fat(t));
    CHECK(fat2::degree(t) == 2);
    auto qm = models::make_quaternionic_heisenberg_model(1);
    CHECK_THROWS_AS(models::pointwise_tuple(qm.model, Vector::Zero(qm.model.dim_m)),
                    PreconditionError);
}

TEST_CASE("liouville model from a single contact form") {
    // mu = x dy on R^2 is degenerate (dmu = dx ^ dy is nondegenerate on R^2).
    models::LiouvilleModel l;
    l.n_dim = 2;
    l.p = 1;
    models::AffineCovector mu{2, Vector::Zero(2), Matrix::Zero(2, 2)};
    mu.linear(1, 0) = 1.0;  // mu = x dy
    l.mus = {mu};
    auto m = models::make_liouville_model(l);
    CHECK(m.dim_m == 3);
    CHECK(models::validate_model(m, 19).pass());
    // The single curvature form restricted to the frame is dmu with the
    // model sign convention: Omega = -d(mu).
    Matrix g = models::curvature_gram(m, 0, Vector::Zero(3));
    CHECK((g + mu.d()).norm() < 1e-12);
}

TEST_CASE("liouville model rejects degenerate dmu") {
    models::LiouvilleModel l;
    l.n_dim = 2;
    l.p = 1;
    l.mus = {models::AffineCovector{2, Vector::Zero(2), Matrix::Zero(2, 2)}};
    CHECK_THROWS_AS(models::make_liouville_model(l), PreconditionError);
}

TEST_CASE("hyperkaehler-flavored liouville triple validates as qcont") {
    qcont::QContTriple std_triple = qcont::QContTriple::standard(1);
    std::vector<Matrix> dmus = {std_triple.j(1), std_triple.j(2), std_triple.j(3)};
    models::LiouvilleModel l = suites::liouville_from_dmu(dmus);
    auto m = models::make_liouville_model(l);
    CHECK(models::validate_model(m, 23).pass());
    // Pointwise curvature grams are -J_i; they assemble into a triple with
    // metric I after flipping sign to omega^i = J_i^T g.
    Vector x = Vector::Zero(m.dim_m);
    for (Index s = 0; s < 3; ++s)
        CHECK((models::curvature_gram(m, s, x) + dmus[std::size_t(s)]).norm() < 1e-12);
    qcont::QContTriple rebuilt(Matrix::Identity(4, 4), std_triple.j(1), std_triple.j(2),
                               std_triple.j(3));
    CHECK(qcont::validate_triple(rebuilt).pass());
}

TEST_CASE("lift accepts planar exact data and rejects corrupted primitives") {
    models::LiouvilleModel l = suites::flat_liouville_pair();
    const Index m = 20;
    Matrix pts(4, m);
    for (Index i = 0; i < m; ++i) {
        double s = double(i) / (m - 1);
        pts.col(i) << s, 0.5 * s, 1.0, -2.0;  // y constant: f*mu = 0
    }
    Matrix prim = Matrix::Zero(2, m);
    auto lifted = models::lift_exact_lagrangian(l, pts, prim, 1e-12);
    CHECK(lifted.points.rows() == 6);
    CHECK(lifted.max_edge_residual <= 1e-12);

    Matrix bad = prim;
    bad(0, 7) += 0.5;
    try {
        models::lift_exact_lagrangian(l, pts, bad, 1e-12);
        CHECK(false);
    } catch (const ExactnessError& e) {
        // The corrupted sample breaks both adjacent edges; the worst is one
        // of them.
        CHECK((e.worst_edge == 6 || e.worst_edge == 7));
        CHECK(e.residual > 1e-3);
    }
}

TEST_CASE("lift rejects repeated samples") {
    models::LiouvilleModel l = suites::flat_liouville_pair();
    Matrix pts = Matrix::Zero(4, 3);
    Matrix prim = Matrix::Zero(2, 3);
    CHECK_THROWS_AS(models::lift_exact_lagrangian(l, pts, prim, 1e-6),
                    PreconditionError);
}

TEST_CASE("formal lift lands in the model distribution") {
    models::LiouvilleModel l = suites::flat_liouville_pair();
    Rng rng(29);
    Vector point = rng.gaussian_vector(4);
    Matrix tangent = Vector::Unit(4, 0);  // d/dx1 is isotropic and regular
    frames::Frame f = models::formal_lift(l, point, tangent);
    CHECK(f.ambient_dim == 6);
    auto m = models::make_liouville_model(l);
    // Lifted vector is annihilated by every lambda at the lifted point.
    Vector lifted_pt = Vector::Zero(6);  // the z-values do not enter lambda
    lifted_pt.head(4) = point;
    for (const auto& lam : m.lambdas)
        CHECK(std::abs(lam.at(lifted_pt, f.vectors.col(0))) < 1e-12);

    // Non-isotropic tangent frame is rejected: x1, y1 pair under dmu^1.
    Matrix bad(4, 2);
    bad << Vector::Unit(4, 0), Vector::Unit(4, 2);
    CHECK_THROWS_AS(models::formal_lift(l, point, bad), PreconditionError);
}
