#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fatdist/jets.hpp"
#include "fatdist/models.hpp"
#include "fatdist/rng.hpp"
#include "fatdist/suites.hpp"

using namespace fatdist;
using jets::MultiIndex;

namespace {

Matrix origin_frame_columns(const models::AffineCoframeModel& m) {
    Matrix f0(m.dim_m, static_cast<Index>(m.frame.size()));
    for (std::size_t i = 0; i < m.frame.size(); ++i)
        f0.col(static_cast<Index>(i)) = m.frame[i].at(Vector::Zero(m.dim_m));
    return f0;
}

}  // namespace

TEST_CASE("multi-index arithmetic") {
    MultiIndex i{{0, 1, 1}};
    CHECK(i.plus(0) == MultiIndex{{0, 0, 1, 1}});
    CHECK(i.plus(2) == MultiIndex{{0, 1, 1, 2}});
    CHECK(i.minus(1) == MultiIndex{{0, 1}});
    CHECK_THROWS_AS(i.minus(3), PreconditionError);
    CHECK(MultiIndex{{0, 1}} < MultiIndex{{0, 2}});
    CHECK(MultiIndex{{0, 2}} < MultiIndex{{1, 1}});
    CHECK(i.str() == "(1,2,2)");
}

TEST_CASE("all_multi_indices enumerates nondecreasing tuples in order") {
    auto all = jets::all_multi_indices(2, 2);  // entries in {0,1,2}
    CHECK(all.size() == 6);  // C(3+1, 2) = 6 multisets of size 2 from 3 symbols
    for (std::size_t i = 0; i + 1 < all.size(); ++i) CHECK(all[i] < all[i + 1]);
    CHECK(all.front() == MultiIndex{{0, 0}});
    CHECK(all.back() == MultiIndex{{2, 2}});
    CHECK(jets::all_multi_indices(3, 1).size() == 4);
}

TEST_CASE("triangular solve over the holomorphic model") {
    auto m = models::make_holomorphic_contact_model(2);
    Matrix f0 = origin_frame_columns(m);
    fat2::FatTuple2 t = models::pointwise_tuple(m, Vector::Zero(m.dim_m));
    frames::Frame fr = frames::build_horizontal_deg2(t, 2, 5);
    Matrix p1 = f0 * fr.vectors;

    jets::SymTensorSystem sys = suites::holomorphic_jet_system(p1, 17);
    CHECK(jets::fullrank_check(sys));
    jets::SymTensor q = jets::triangular_solve(sys);
    CHECK(q.values.size() == jets::all_multi_indices(sys.alpha + 2, sys.k_plus_1 - 1).size());
    CHECK(jets::dense_residual(sys, q) < 1e-6);
}

TEST_CASE("homogeneous system solves to the zero tensor") {
    auto m = models::make_holomorphic_contact_model(2);
    Matrix f0 = origin_frame_columns(m);
    fat2::FatTuple2 t = models::pointwise_tuple(m, Vector::Zero(m.dim_m));
    frames::Frame fr = frames::build_horizontal_deg2(t, 2, 7);
    jets::SymTensorSystem sys = suites::holomorphic_jet_system(f0 * fr.vectors, 0);
    sys.rhs_lambda = [&](const MultiIndex&) { return Vector::Zero(sys.p); };
    sys.rhs_coupling = [&](const MultiIndex&, Index, Index) { return Vector::Zero(sys.p); };
    jets::SymTensor q = jets::triangular_solve(sys);
    double norm = 0.0;
    for (const auto& [idx, v] : q.values) norm += v.norm();
    CHECK(norm < 1e-12);
}

TEST_CASE("single-column p1 and order one") {
    auto m = models::make_holomorphic_contact_model(2);
    Matrix f0 = origin_frame_columns(m);
    jets::SymTensorSystem sys = suites::holomorphic_jet_system(f0.col(0), 3);
    CHECK(sys.k_plus_1 == 1);
    // With one domain direction there are no coupling equations; each step
    // is a plain min-norm solve of lambda Q = rhs.
    CHECK(jets::fullrank_check(sys));
    jets::SymTensor q = jets::triangular_solve(sys);
    CHECK(q.values.size() == 1);
    const Vector& v = q.values.begin()->second;
    CHECK((sys.lambda * v - sys.rhs_lambda(MultiIndex{{0, 0}})).norm() < 1e-12);
    // Min-norm: the solution is orthogonal to ker(lambda)... i.e. lies in
    // the row space of lambda.
    Matrix k = core::kernel_basis(sys.lambda);
    CHECK((k.transpose() * v).norm() < 1e-10);
}

TEST_CASE("non-regular first jet is rejected") {
    auto m = models::make_holomorphic_contact_model(2);
    fat2::FatTuple2 t = models::pointwise_tuple(m, Vector::Zero(m.dim_m));
    Matrix a = fat2::connecting_automorphism(t).a;
    Matrix f0 = origin_frame_columns(m);
    Rng rng(23);
    Vector v = rng.unit_vector(8);
    Matrix frame_coords(8, 2);
    frame_coords << v, a * v;  // V ∩ AV != 0: not Omega-regular
    jets::SymTensorSystem sys = suites::holomorphic_jet_system(f0 * frame_coords, 29);
    CHECK(!jets::fullrank_check(sys));
    CHECK_THROWS_AS(jets::triangular_solve(sys), NotRegularError);
}

TEST_CASE("dense oracle rank matches the triangular structure") {
    auto m = models::make_holomorphic_contact_model(2);
    Matrix f0 = origin_frame_columns(m);
    fat2::FatTuple2 t = models::pointwise_tuple(m, Vector::Zero(m.dim_m));
    frames::Frame fr = frames::build_horizontal_deg2(t, 2, 31);
    jets::SymTensorSystem sys = suites::holomorphic_jet_system(f0 * fr.vectors, 37);
    jets::DenseSystem d = jets::assemble_dense(sys);
    CHECK(core::rank(d.a) == d.a.rows());  // every equation independent
}

TEST_CASE("dense oracle refuses oversized systems") {
    jets::SymTensorSystem sys;
    sys.k_plus_1 = 10;
    sys.n = 10;
    sys.p = 1;
    sys.alpha = 2;  // C(13, 4) = 715 blocks of 10 unknowns > 5000
    sys.lambda = Matrix::Ones(1, 10);
    sys.dlambdas = {Matrix::Zero(10, 10)};
    sys.p1 = Matrix::Identity(10, 10);
    sys.rhs_lambda = [](const MultiIndex&) { return Vector::Zero(1); };
    sys.rhs_coupling = [](const MultiIndex&, Index, Index) { return Vector::Zero(1); };
    CHECK_THROWS_AS(jets::assemble_dense(sys), SizeError);
}

TEST_CASE("system validation catches malformed inputs") {
    auto m = models::make_holomorphic_contact_model(2);
    Matrix f0 = origin_frame_columns(m);
    fat2::FatTuple2 t = models::pointwise_tuple(m, Vector::Zero(m.dim_m));
    frames::Frame fr = frames::build_horizontal_deg2(t, 2, 43);
    jets::SymTensorSystem good = suites::holomorphic_jet_system(f0 * fr.vectors, 41);

    jets::SymTensorSystem bad = good;
    bad.dlambdas[0] = Matrix::Ones(bad.n, bad.n);  // not skew
    CHECK_THROWS_AS(jets::triangular_solve(bad), InvalidFormError);

    bad = good;
    bad.lambda = Matrix::Zero(bad.p, bad.n);  // rank deficient
    CHECK_THROWS_AS(jets::triangular_solve(bad), PreconditionError);

    bad = good;
    bad.rhs_lambda = nullptr;
    CHECK_THROWS_AS(jets::triangular_solve(bad), PreconditionError);

    bad = good;
    bad.rhs_lambda = [&](const MultiIndex&) { return Vector::Zero(good.p + 1); };
    CHECK_THROWS_AS(jets::triangular_solve(bad), PreconditionError);
}
