#include "fatdist/suites.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "fatdist/frames.hpp"
#include "fatdist/rng.hpp"

namespace fatdist::suites {

namespace {

using core::Subspace;

// Collects residuals across trials and reports min/median/max, with the
// pass decision carried by the max.
struct ResidualStats {
    std::vector<double> values;

    void push(double v) { values.push_back(v); }
    void emit(Report& rep, const std::string& name, double bound) {
        if (values.empty()) {
            rep.add(name + "_max", false);
            return;
        }
        std::sort(values.begin(), values.end());
        rep.add(name + "_min", true, values.front());
        rep.add(name + "_median", true, values[values.size() / 2]);
        rep.add_residual(name + "_max", values.back(), bound);
    }
};

Subspace random_subspace(Index dim, Index k, Rng& rng, const Tolerance& tol) {
    return Subspace::span(rng.gaussian_matrix(dim, k), tol);
}

Report suite_fat2_props(int trials, std::uint64_t seed, Tolerance tol) {
    Report rep;
    int disagreements = 0;
    int fatness_mismatches = 0;
    const Index dims[] = {4, 6, 8, 10, 12};
    for (int t = 0; t < trials; ++t) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
        Index dim = dims[t % 5];
        fat2::FatTuple2 tup =
            random_skew_pair(dim, mix_seed(seed, 1000 + static_cast<std::uint64_t>(t)), tol);
        Matrix a = fat2::connecting_automorphism(tup).a;

        Index k = 1 + static_cast<Index>(rng.engine()() % static_cast<std::uint64_t>(dim / 2));
        Subspace v = random_subspace(dim, k, rng, tol);

        // Three regularity criteria, each computed directly.
        Matrix eval(dim, 2 * v.dim());
        eval << tup.omega1() * v.basis(), tup.omega2() * v.basis();
        bool by_rank = core::rank(eval, tol) == 2 * v.dim();
        bool by_vav = core::intersect(v, v.map(a, tol), tol).dim() == 0;
        bool by_codim = fat2::omega_perp(tup, v).dim() == dim - 2 * v.dim();
        if (by_rank != by_vav || by_rank != by_codim) ++disagreements;

        // Fatness vs real spectrum: a real eigenvector spans a non-regular
        // line; if fat, random lines must be regular.
        bool fat = fat2::is_fat(tup);
        if (fat) {
            Subspace line = random_subspace(dim, 1, rng, tol);
            if (!fat2::is_regular(tup, line)) ++fatness_mismatches;
        } else {
            Eigen::EigenSolver<Matrix> es(a);
            for (Index i = 0; i < dim; ++i) {
                if (std::abs(es.eigenvalues()(i).imag()) >
                    tol.threshold(es.eigenvalues().cwiseAbs().maxCoeff()))
                    continue;
                Vector ev = es.eigenvectors().col(i).real();
                if (ev.norm() < tol.threshold(1.0)) continue;
                if (fat2::is_regular(tup, Subspace::span(ev, tol)))
                    ++fatness_mismatches;
                break;
            }
        }
    }
    rep.add("regularity_criteria_agree", disagreements == 0,
            static_cast<double>(disagreements));
    rep.add("fatness_matches_line_regularity", fatness_mismatches == 0,
            static_cast<double>(fatness_mismatches));
    return rep;
}

Report suite_deg2_identities(int trials, std::uint64_t seed, Tolerance tol) {
    Report rep;
    ResidualStats stats;
    int isotropy_failures = 0;
    int degree_failures = 0;
    for (int t = 0; t < trials; ++t) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
        Index m = 1 + static_cast<Index>(t % 3);
        Index dim = 4 * m;
        fat2::FatTuple2 tup =
            random_deg2_tuple(dim, mix_seed(seed, 2000 + static_cast<std::uint64_t>(t)), tol);
        if (fat2::degree(tup) != 2) ++degree_failures;

        Index k = 1 + static_cast<Index>(rng.engine()() % static_cast<std::uint64_t>(m));
        Subspace v = random_subspace(dim, k, rng, tol);
        auto idrep = fat2::deg2_identities(tup, v);
        stats.push(std::max(std::max(idrep.res_vav_vinv, idrep.res_double_omega),
                            std::max(idrep.res_perp1, idrep.res_perp2)));

        // Isotropic input: the double Omega-orthogonal must stay isotropic.
        frames::Frame fr = frames::build_horizontal_deg2(
            tup, k, mix_seed(seed, 3000 + static_cast<std::uint64_t>(t)));
        Subspace iso = Subspace::span(fr.vectors, tol);
        auto isorep = fat2::deg2_identities(tup, iso);
        stats.push(std::max(std::max(isorep.res_vav_vinv, isorep.res_double_omega),
                            std::max(isorep.res_perp1, isorep.res_perp2)));
        if (!isorep.input_isotropic || !isorep.double_omega_isotropic)
            ++isotropy_failures;
    }
    rep.add("degree_is_2", degree_failures == 0, static_cast<double>(degree_failures));
    stats.emit(rep, "identity_residual", 1e-8);
    rep.add("isotropic_double_omega_isotropic", isotropy_failures == 0,
            static_cast<double>(isotropy_failures));
    return rep;
}

Report suite_qcont_props(int trials, std::uint64_t seed, Tolerance tol) {
    Report rep;
    ResidualStats ortho, connecting;
    int pansu_failures = 0;
    int decomposition_failures = 0;
    const Index dims[] = {8, 12, 16};
    for (int t = 0; t < trials; ++t) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
        Index dim = dims[t % 3];
        qcont::QContTriple q =
            random_qcont_triple(dim, mix_seed(seed, 4000 + static_cast<std::uint64_t>(t)), tol);

        Index k = 1 + static_cast<Index>(rng.engine()() % static_cast<std::uint64_t>(dim / 4));
        Subspace iso = random_isotropic3(q, k, mix_seed(seed, 5000 + static_cast<std::uint64_t>(t)));
        if (!qcont::pansu_check(q, iso)) ++pansu_failures;

        Subspace w = random_subspace(dim, k, rng, tol);
        Report dec = qcont::decomposition_check(q, w);
        if (!dec.pass()) ++decomposition_failures;
        for (const auto& c : dec.checks)
            if (c.name == "g_orthogonal") ortho.push(c.residual);

        Matrix a = fat2::connecting_automorphism(
                       fat2::FatTuple2(q.omega(2), q.omega(3), tol))
                       .a;
        connecting.push((a + q.j(1)).norm());
    }
    rep.add("pansu_isotropic_implies_regular", pansu_failures == 0,
            static_cast<double>(pansu_failures));
    rep.add("decomposition", decomposition_failures == 0,
            static_cast<double>(decomposition_failures));
    ortho.emit(rep, "g_orthogonality", 1e-10);
    connecting.emit(rep, "connecting_automorphism_vs_minus_j1", 1e-9);
    return rep;
}

Report suite_curvature_cross(int trials, std::uint64_t seed, Tolerance tol) {
    Report rep;
    ResidualStats stats;
    int closure_failures = 0;
    int points_per_model = std::max(1, trials / 6);
    for (Index n = 1; n <= 3; ++n) {
        std::vector<models::AffineCoframeModel> mods;
        mods.push_back(models::make_holomorphic_contact_model(n));
        mods.push_back(models::make_quaternionic_heisenberg_model(n).model);
        for (std::size_t mi = 0; mi < mods.size(); ++mi) {
            const auto& m = mods[mi];
            Rng rng(mix_seed(seed, 100 * static_cast<std::uint64_t>(n) + mi));
            for (int t = 0; t < points_per_model; ++t) {
                Vector pt = rng.gaussian_vector(m.dim_m);
                const Index nf = static_cast<Index>(m.frame.size());
                for (Index i = 0; i < nf; ++i) {
                    for (Index j = i + 1; j < nf; ++j) {
                        Vector u = m.frame[static_cast<std::size_t>(i)].at(pt);
                        Vector v = m.frame[static_cast<std::size_t>(j)].at(pt);
                        Vector by_coframe = models::eval_curvature_coframe(m, pt, u, v, tol);
                        Vector by_bracket = models::eval_curvature_bracket(m, i, j, pt);
                        stats.push((by_coframe - by_bracket).norm());
                        // Heisenberg closure: brackets are constant fields
                        // supported on the z-coordinates only.
                        models::AffineVectorField br =
                            bracket(m.frame[static_cast<std::size_t>(i)],
                                    m.frame[static_cast<std::size_t>(j)]);
                        if (br.linear.norm() > 1e-12 ||
                            br.constant.head(m.dim_m - m.p).norm() > 1e-12)
                            ++closure_failures;
                    }
                }
            }
        }
    }
    stats.emit(rep, "coframe_vs_bracket", 1e-12);
    rep.add("brackets_in_vertical_span", closure_failures == 0,
            static_cast<double>(closure_failures));
    return rep;
}

Report suite_jets_oracle(int trials, std::uint64_t seed, Tolerance tol) {
    Report rep;
    ResidualStats triangular, dense;
    int rank_mismatches = 0;
    int nonregular_missed = 0;
    int runs = std::min(trials, 16);
    models::AffineCoframeModel holo = models::make_holomorphic_contact_model(2);
    Vector origin = Vector::Zero(holo.dim_m);
    fat2::FatTuple2 tup = models::pointwise_tuple(holo, origin, tol);
    Matrix f0(holo.dim_m, static_cast<Index>(holo.frame.size()));
    for (std::size_t i = 0; i < holo.frame.size(); ++i)
        f0.col(static_cast<Index>(i)) = holo.frame[i].at(origin);

    for (int t = 0; t < runs; ++t) {
        std::uint64_t s = mix_seed(seed, 6000 + static_cast<std::uint64_t>(t));
        frames::Frame fr = frames::build_horizontal_deg2(tup, 2, s);
        Matrix p1 = f0 * fr.vectors;
        jets::SymTensorSystem sys = holomorphic_jet_system(p1, mix_seed(s, 1), tol);
        if (!jets::fullrank_check(sys)) {
            ++rank_mismatches;
            continue;
        }
        jets::SymTensor q = jets::triangular_solve(sys);
        double dres = jets::dense_residual(sys, q);
        dense.push(dres);
        jets::DenseSystem d = jets::assemble_dense(sys);
        if (core::rank(d.a, tol) != d.a.rows()) ++rank_mismatches;

        // Non-regular first jet (v, Av): the coupled system must be
        // detected as rank-deficient.
        Matrix a = fat2::connecting_automorphism(tup).a;
        Rng rng(mix_seed(s, 2));
        Vector v8 = rng.unit_vector(tup.dim());
        Matrix bad8(tup.dim(), 2);
        bad8 << v8, a * v8;
        jets::SymTensorSystem bad = holomorphic_jet_system(f0 * bad8, mix_seed(s, 3), tol);
        if (jets::fullrank_check(bad)) ++nonregular_missed;
        bool threw = false;
        try {
            jets::triangular_solve(bad);
        } catch (const NotRegularError&) {
            threw = true;
        }
        if (!threw) ++nonregular_missed;
    }
    dense.emit(rep, "dense_oracle_residual", 1e-6);
    rep.add("global_system_full_rank", rank_mismatches == 0,
            static_cast<double>(rank_mismatches));
    rep.add("nonregular_p1_rejected", nonregular_missed == 0,
            static_cast<double>(nonregular_missed));
    return rep;
}

Report suite_liouville(int trials, std::uint64_t seed, Tolerance tol) {
    Report rep;
    models::LiouvilleModel flat = flat_liouville_pair();

    // Planar curve with constant y and zero primitives: exactly horizontal.
    {
        const Index m = 24;
        Matrix pts(4, m);
        for (Index i = 0; i < m; ++i) {
            double s = static_cast<double>(i) / (m - 1);
            pts.col(i) << s, std::sin(3.0 * s), 0.3, -0.2;
        }
        models::LiftResult lr =
            models::lift_exact_lagrangian(flat, pts, Matrix::Zero(2, m), 1e-9);
        rep.add_residual("planar_curve_horizontal", lr.max_edge_residual, 1e-12);
    }

    // Circle with numerically integrated primitive: second-order decay.
    {
        std::vector<double> residuals;
        for (int level = 0; level < 3; ++level) {
            Index m = 32 * (Index(1) << level) + 1;
            Matrix pts(4, m);
            Matrix prim = Matrix::Zero(2, m);
            for (Index i = 0; i < m; ++i) {
                double th = 2.0 * M_PI * static_cast<double>(i) / (m - 1);
                pts.col(i) << std::cos(th), 0.0, std::sin(th), 0.0;
                prim(0, i) = 0.5 * th + 0.25 * std::sin(2.0 * th);
            }
            models::LiftResult lr = models::lift_exact_lagrangian(flat, pts, prim, 1.0);
            residuals.push_back(lr.max_edge_residual);
        }
        double r1 = residuals[0] / residuals[1];
        double r2 = residuals[1] / residuals[2];
        rep.add("circle_quadratic_decay_1", r1 > 3.0 && r1 < 5.0, r1);
        rep.add("circle_quadratic_decay_2", r2 > 3.0 && r2 < 5.0, r2);
    }

    // Formal lifts: 1-frames on the flat R^4 pair and 2-frames on an R^8
    // pair, verified against the pointwise tuple in frame coordinates.
    int lift_failures = 0;
    int runs = std::max(1, std::min(trials, 50));
    for (int t = 0; t < runs; ++t) {
        Rng rng(mix_seed(seed, 7000 + static_cast<std::uint64_t>(t)));
        Vector pt4 = rng.gaussian_vector(4);
        Matrix tan1 = rng.gaussian_matrix(4, 1);
        frames::Frame lift1 = models::formal_lift(flat, pt4, tan1, tol);
        if ((lift1.vectors.topRows(4) - tan1).norm() > 1e-12) ++lift_failures;
        frames::Frame coord1{4, tan1, frames::Regime::horizontal_deg2};
        fat2::FatTuple2 t4(-flat.dmu(0), -flat.dmu(1), tol);
        if (!frames::verify_frame(coord1, t4).pass()) ++lift_failures;

        fat2::FatTuple2 t8 =
            random_deg2_tuple(8, mix_seed(seed, 8000 + static_cast<std::uint64_t>(t)), tol);
        models::LiouvilleModel l8 = liouville_from_dmu({t8.omega1(), t8.omega2()});
        frames::Frame tan2 = frames::build_horizontal_deg2(
            t8, 2, mix_seed(seed, 9000 + static_cast<std::uint64_t>(t)));
        Vector pt8 = rng.gaussian_vector(8);
        frames::Frame lift2 = models::formal_lift(l8, pt8, tan2.vectors, tol);

        // The lifted vectors must be annihilated by the model coframe.
        models::AffineCoframeModel mod8 = models::make_liouville_model(l8);
        Vector lifted_pt(10);
        lifted_pt.head(8) = pt8;
        lifted_pt.tail(2).setZero();
        for (Index c = 0; c < lift2.vectors.cols(); ++c) {
            double r = 0.0;
            for (const auto& lam : mod8.lambdas)
                r = std::max(r, std::abs(lam.at(lifted_pt, lift2.vectors.col(c))));
            if (r > 1e-9) ++lift_failures;
        }
        fat2::FatTuple2 pt_tuple = models::pointwise_tuple(mod8, lifted_pt, tol);
        frames::Frame coord2{8, tan2.vectors, frames::Regime::horizontal_deg2};
        if (!frames::verify_frame(coord2, pt_tuple).pass()) ++lift_failures;
    }
    rep.add("formal_lifts_verify", lift_failures == 0,
            static_cast<double>(lift_failures));
    return rep;
}

}  // namespace

fat2::FatTuple2 random_skew_pair(Index dim, std::uint64_t seed, Tolerance tol) {
    if (dim % 2 != 0) throw PreconditionError("random_skew_pair: even dim required");
    Rng rng(seed);
    for (int attempt = 0; attempt < 32; ++attempt) {
        Matrix o1 = rng.skew_matrix(dim);
        Matrix o2 = rng.skew_matrix(dim);
        if (core::rank(o1, tol) == dim && core::rank(o2, tol) == dim &&
            core::condition_number(o1) < 1e6 && core::condition_number(o2) < 1e6)
            return fat2::FatTuple2(std::move(o1), std::move(o2), tol);
    }
    throw NumericFailureError("random_skew_pair: could not draw a nondegenerate pair");
}

fat2::FatTuple2 random_deg2_tuple(Index dim, std::uint64_t seed, Tolerance tol) {
    if (dim % 4 != 0)
        throw PreconditionError("random_deg2_tuple: dim divisible by 4 required");
    models::AffineCoframeModel holo = models::make_holomorphic_contact_model(dim / 4);
    Vector origin = Vector::Zero(holo.dim_m);
    Matrix o1 = models::curvature_gram(holo, 0, origin);
    Matrix o2 = models::curvature_gram(holo, 1, origin);
    Rng rng(seed);
    Matrix p = rng.well_conditioned(dim, 50.0);
    return fat2::FatTuple2(p.transpose() * o1 * p, p.transpose() * o2 * p, tol);
}

qcont::QContTriple random_qcont_triple(Index dim, std::uint64_t seed, Tolerance tol) {
    qcont::QContTriple std_triple = qcont::QContTriple::standard(dim / 4, tol);
    Rng rng(seed);
    Eigen::HouseholderQR<Matrix> qr(rng.gaussian_matrix(dim, dim));
    Matrix o = qr.householderQ();
    return qcont::QContTriple(Matrix::Identity(dim, dim),
                              o.transpose() * std_triple.j(1) * o,
                              o.transpose() * std_triple.j(2) * o,
                              o.transpose() * std_triple.j(3) * o, tol);
}

core::Subspace random_isotropic3(const qcont::QContTriple& q, Index k,
                                 std::uint64_t seed) {
    const Tolerance& tol = q.tol();
    Subspace v = Subspace::zero(q.dim());
    Rng rng(seed);
    for (Index step = 0; step < k; ++step) {
        Subspace vo = qcont::omega_perp3(q, v);
        Subspace comp = core::intersect(vo, v.orthogonal_complement(tol), tol);
        if (comp.dim() == 0)
            throw NoRoomError("random_isotropic3: no room to grow");
        for (int attempt = 0;; ++attempt) {
            Vector tau = comp.basis() * rng.unit_vector(comp.dim());
            Matrix cand(q.dim(), v.dim() + 1);
            if (v.dim() > 0) cand.leftCols(v.dim()) = v.basis();
            cand.col(v.dim()) = tau;
            Subspace vc = Subspace::span(cand, tol);
            if (vc.dim() == cand.cols() && qcont::is_isotropic3(q, vc)) {
                v = vc;
                break;
            }
            if (attempt >= 16)
                throw ConstructionFailureError("random_isotropic3: retries exhausted");
        }
    }
    return v;
}

models::LiouvilleModel flat_liouville_pair() {
    // Coordinates (x1, x2, y1, y2). Coefficient row r of `linear` holds the
    // gradient of the dx_r coefficient.
    models::LiouvilleModel l;
    l.n_dim = 4;
    l.p = 2;
    models::AffineCovector mu1{4, Vector::Zero(4), Matrix::Zero(4, 4)};
    mu1.linear(2, 0) = 1.0;  // y1-coefficient = x1
    mu1.linear(3, 1) = 1.0;  // y2-coefficient = x2
    models::AffineCovector mu2{4, Vector::Zero(4), Matrix::Zero(4, 4)};
    mu2.linear(2, 1) = 1.0;  // y1-coefficient = x2
    mu2.linear(3, 0) = 1.0;  // y2-coefficient = x1
    l.mus = {mu1, mu2};
    return l;
}

models::LiouvilleModel liouville_from_dmu(const std::vector<Matrix>& dmus) {
    if (dmus.empty()) throw PreconditionError("liouville_from_dmu: empty input");
    models::LiouvilleModel l;
    l.n_dim = dmus[0].rows();
    l.p = static_cast<Index>(dmus.size());
    for (const Matrix& d : dmus) {
        if ((d + d.transpose()).norm() > 1e-12 * std::max(1.0, d.norm()))
            throw InvalidFormError("liouville_from_dmu: dmu not skew");
        // B = -d/2 gives B^T - B = d.
        l.mus.push_back(models::AffineCovector{l.n_dim, Vector::Zero(l.n_dim),
                                               -0.5 * d});
    }
    return l;
}

jets::SymTensorSystem holomorphic_jet_system(const Matrix& p1, std::uint64_t seed,
                                             Tolerance tol) {
    models::AffineCoframeModel holo = models::make_holomorphic_contact_model(2);
    jets::SymTensorSystem sys;
    sys.tol = tol;
    sys.k_plus_1 = p1.cols();
    sys.n = holo.dim_m;
    sys.p = holo.p;
    sys.alpha = 0;
    Vector origin = Vector::Zero(holo.dim_m);
    sys.lambda.resize(holo.p, holo.dim_m);
    for (Index s = 0; s < holo.p; ++s)
        sys.lambda.row(s) =
            (holo.lambdas[static_cast<std::size_t>(s)].constant +
             holo.lambdas[static_cast<std::size_t>(s)].linear * origin)
                .transpose();
    for (const auto& lam : holo.lambdas) sys.dlambdas.push_back(lam.d());
    sys.p1 = p1;

    const Index corank = sys.p;
    auto hash_entries = [](const jets::MultiIndex& i) {
        std::uint64_t h = 1469598103934665603ULL;
        for (Index e : i.entries) h = (h ^ static_cast<std::uint64_t>(e + 1)) * 1099511628211ULL;
        return h;
    };
    sys.rhs_lambda = [seed, corank, hash_entries](const jets::MultiIndex& i) {
        Rng rng(mix_seed(seed, hash_entries(i)));
        return Vector(rng.gaussian_vector(corank));
    };
    sys.rhs_coupling = [seed, corank, hash_entries](const jets::MultiIndex& j,
                                                    Index a, Index b) {
        std::uint64_t h = hash_entries(j) ^ (static_cast<std::uint64_t>(a + 1) << 32) ^
                          static_cast<std::uint64_t>(b + 7);
        Rng rng(mix_seed(seed ^ 0x5bd1e995, h));
        return Vector(rng.gaussian_vector(corank));
    };
    return sys;
}

std::vector<std::string> suite_names() {
    return {"fat2-props",      "deg2-identities", "qcont-props",
            "curvature-cross", "jets-oracle",     "liouville"};
}

Report run_suite(const std::string& name, int trials, std::uint64_t seed,
                 Tolerance tol) {
    if (trials < 1) throw PreconditionError("run_suite: trials >= 1 required");
    if (name == "fat2-props") return suite_fat2_props(trials, seed, tol);
    if (name == "deg2-identities") return suite_deg2_identities(trials, seed, tol);
    if (name == "qcont-props") return suite_qcont_props(trials, seed, tol);
    if (name == "curvature-cross") return suite_curvature_cross(trials, seed, tol);
    if (name == "jets-oracle") return suite_jets_oracle(trials, seed, tol);
    if (name == "liouville") return suite_liouville(trials, seed, tol);
    throw SchemaError("unknown suite: " + name);
}

}  // namespace fatdist::suites
