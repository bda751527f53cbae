// Acceptance gate: one pass/fail line per criterion, exit 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "fatdist/frames.hpp"
#include "fatdist/jets.hpp"
#include "fatdist/json_io.hpp"
#include "fatdist/models.hpp"
#include "fatdist/rng.hpp"
#include "fatdist/suites.hpp"

using namespace fatdist;
using core::Subspace;

namespace {

constexpr std::uint64_t kSeed = 20260823;

bool criterion1_degree_detection() {
    auto start = std::chrono::steady_clock::now();
    for (Index n = 1; n <= 3; ++n) {
        models::AffineCoframeModel m = models::make_holomorphic_contact_model(n);
        Rng rng(mix_seed(kSeed, static_cast<std::uint64_t>(n)));
        for (int t = 0; t < 100; ++t) {
            fat2::FatTuple2 tup =
                models::pointwise_tuple(m, rng.gaussian_vector(m.dim_m));
            if (!fat2::is_fat(tup)) return false;
            if (fat2::degree(tup) != 2) return false;
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                start)
                      .count();
    return secs < 5.0;
}

bool criterion2_regularity_equivalence() {
    Tolerance tol;  // rel_eps 1e-9
    int done = 0;
    for (int t = 0; done < 1000; ++t) {
        Index dim = 4 + 2 * (t % 5);  // 4, 6, 8, 10, 12
        fat2::FatTuple2 tup = suites::random_skew_pair(
            dim, mix_seed(kSeed, 100 + static_cast<std::uint64_t>(t)), tol);
        Matrix a = fat2::connecting_automorphism(tup).a;
        Rng rng(mix_seed(kSeed, 200 + static_cast<std::uint64_t>(t)));
        Index k = 1 + static_cast<Index>(t) % (dim / 2);
        Subspace v = Subspace::span(rng.gaussian_matrix(dim, k), tol);

        Matrix eval(dim, 2 * v.dim());
        eval << tup.omega1() * v.basis(), tup.omega2() * v.basis();
        bool by_rank = core::rank(eval, tol) == 2 * v.dim();
        bool by_vav = core::intersect(v, v.map(a, tol), tol).dim() == 0;
        bool by_codim = fat2::omega_perp(tup, v).dim() == dim - 2 * v.dim();
        if (by_rank != by_vav || by_rank != by_codim) return false;
        ++done;
    }
    return true;
}

bool criterion3_deg2_identities() {
    Tolerance tol;
    for (int t = 0; t < 500; ++t) {
        Index dim = 4 * (1 + t % 3);
        fat2::FatTuple2 tup = suites::random_deg2_tuple(
            dim, mix_seed(kSeed, 300 + static_cast<std::uint64_t>(t)), tol);
        Rng rng(mix_seed(kSeed, 400 + static_cast<std::uint64_t>(t)));
        Index k = 1 + static_cast<Index>(t) % (dim / 4);
        Subspace v = (t % 2 == 0)
                         ? Subspace::span(
                               frames::build_horizontal_deg2(
                                   tup, k,
                                   mix_seed(kSeed, 500 + static_cast<std::uint64_t>(t)))
                                   .vectors,
                               tol)
                         : Subspace::span(rng.gaussian_matrix(dim, k), tol);
        auto rep = fat2::deg2_identities(tup, v);
        if (!rep.pass(1e-8)) return false;
    }
    return true;
}

bool criterion4_frame_builders() {
    Tolerance tol;
    const int trials = 100;
    for (Index k = 1; k <= 3; ++k) {
        struct Job {
            const char* name;
            std::function<Report(std::uint64_t)> run;  // throws on no-frame
        };
        fat2::FatTuple2 tup =
            suites::random_deg2_tuple(4 * k, mix_seed(kSeed, 600 + static_cast<std::uint64_t>(k)), tol);
        qcont::QContTriple trip = qcont::QContTriple::standard(k, tol);
        qcont::QContTriple trip2k = qcont::QContTriple::standard(2 * k, tol);
        std::vector<Job> jobs = {
            {"horizontal_deg2",
             [&](std::uint64_t s) {
                 return frames::verify_frame(frames::build_horizontal_deg2(tup, k, s), tup);
             }},
            {"isocontact_deg2",
             [&](std::uint64_t s) {
                 return frames::verify_frame(frames::build_isocontact_deg2(tup, k, s), tup);
             }},
            {"horizontal_qcont",
             [&](std::uint64_t s) {
                 return frames::verify_frame(frames::build_horizontal_qcont(trip, k, s), trip);
             }},
            {"isocontact_qcont",
             [&](std::uint64_t s) {
                 return frames::verify_frame(frames::build_isocontact_qcont(trip2k, k, s),
                                             trip2k);
             }},
        };
        for (const auto& job : jobs) {
            int successes = 0;
            for (int t = 0; t < trials; ++t) {
                try {
                    Report rep = job.run(
                        mix_seed(kSeed, 700 + static_cast<std::uint64_t>(1000 * k + t)));
                    if (!rep.pass() || rep.max_residual() > 1e-10) {
                        std::fprintf(stderr, "  builder %s k=%lld: verifier failed\n",
                                     job.name, static_cast<long long>(k));
                        return false;
                    }
                    ++successes;
                } catch (const Error&) {
                    // counted as a failed trial
                }
            }
            if (successes < 99) {
                std::fprintf(stderr, "  builder %s k=%lld: %d/100 successes\n",
                             job.name, static_cast<long long>(k), successes);
                return false;
            }
        }
    }
    return true;
}

bool criterion5_curvature_cross() {
    Tolerance tol;
    std::vector<models::AffineCoframeModel> mods;
    for (Index n = 1; n <= 3; ++n) {
        mods.push_back(models::make_holomorphic_contact_model(n));
        mods.push_back(models::make_quaternionic_heisenberg_model(n).model);
    }
    mods.push_back(models::make_liouville_model(suites::flat_liouville_pair()));
    for (std::size_t mi = 0; mi < mods.size(); ++mi) {
        const auto& m = mods[mi];
        Rng rng(mix_seed(kSeed, 800 + mi));
        for (int t = 0; t < 5; ++t) {
            Vector pt = rng.gaussian_vector(m.dim_m);
            const Index nf = static_cast<Index>(m.frame.size());
            for (Index i = 0; i < nf; ++i)
                for (Index j = i + 1; j < nf; ++j) {
                    Vector u = m.frame[static_cast<std::size_t>(i)].at(pt);
                    Vector v = m.frame[static_cast<std::size_t>(j)].at(pt);
                    Vector a = models::eval_curvature_coframe(m, pt, u, v, tol);
                    Vector b = models::eval_curvature_bracket(m, i, j, pt);
                    if ((a - b).norm() > 1e-12) return false;
                }
        }
    }
    return true;
}

bool criterion6_bracket_table() {
    models::AffineCoframeModel m = models::make_holomorphic_contact_model(1);
    // Frame order: X11, X12, Y11, Y12; coordinates (x11, x12, y11, y12, z1, z2).
    const auto& x11 = m.frame[0];
    const auto& x12 = m.frame[1];
    const auto& y11 = m.frame[2];
    const auto& y12 = m.frame[3];
    auto is_const = [](const models::AffineVectorField& f, const Vector& c) {
        return f.linear.norm() == 0.0 && (f.constant - c).norm() == 0.0;
    };
    Vector dz1 = Vector::Zero(6), dz2 = Vector::Zero(6), zero = Vector::Zero(6);
    dz1(4) = 1.0;
    dz2(5) = 1.0;
    if (!is_const(models::bracket(y11, x11), dz1)) return false;
    if (!is_const(models::bracket(y11, x12), dz2)) return false;
    if (!is_const(models::bracket(y12, x11), dz2)) return false;
    if (!is_const(models::bracket(y12, x12), -dz1)) return false;
    if (!is_const(models::bracket(x11, x12), zero)) return false;
    if (!is_const(models::bracket(y11, y12), zero)) return false;
    // Every bracket lands in span{dz1, dz2}.
    for (std::size_t i = 0; i < m.frame.size(); ++i)
        for (std::size_t j = 0; j < m.frame.size(); ++j) {
            models::AffineVectorField br = models::bracket(m.frame[i], m.frame[j]);
            if (br.linear.norm() != 0.0 || br.constant.head(4).norm() != 0.0)
                return false;
        }
    return true;
}

bool criterion7_pansu() {
    Tolerance tol;
    const Index dims[] = {8, 12, 16};
    for (int t = 0; t < 500; ++t) {
        Index dim = dims[t % 3];
        qcont::QContTriple q = suites::random_qcont_triple(
            dim, mix_seed(kSeed, 900 + static_cast<std::uint64_t>(t)), tol);
        Index k = 1 + static_cast<Index>(t) % (dim / 4);
        Subspace v = suites::random_isotropic3(
            q, k, mix_seed(kSeed, 1000 + static_cast<std::uint64_t>(t)));
        if (!qcont::pansu_check(q, v)) return false;
    }
    return true;
}

bool criterion8_decomposition() {
    Tolerance tol;
    const Index dims[] = {8, 12, 16};
    for (int t = 0; t < 200; ++t) {
        Index dim = dims[t % 3];
        qcont::QContTriple q = suites::random_qcont_triple(
            dim, mix_seed(kSeed, 1100 + static_cast<std::uint64_t>(t)), tol);
        Rng rng(mix_seed(kSeed, 1200 + static_cast<std::uint64_t>(t)));
        Index k = 1 + static_cast<Index>(t) % (dim / 4);
        Subspace w = Subspace::span(rng.gaussian_matrix(dim, k), tol);
        if (!qcont::is_regular3(q, w)) continue;  // generic, nearly always regular
        Report rep = qcont::decomposition_check(q, w);
        if (!rep.pass()) return false;
        for (const auto& c : rep.checks)
            if (c.name == "g_orthogonal" && c.residual > 1e-10) return false;
        Matrix a =
            fat2::connecting_automorphism(fat2::FatTuple2(q.omega(2), q.omega(3), tol)).a;
        if ((a + q.j(1)).norm() > 1e-9) return false;
    }
    return true;
}

bool criterion9_jets() {
    Tolerance tol;
    // Shipped fixture system.
    json_io::json inst =
        json_io::load_instance_file(std::string(FATDIST_FIXTURE_DIR) + "/jets_dim8.json");
    jets::SymTensorSystem shipped = json_io::read_jets_system(inst, tol);
    jets::SymTensor qs = jets::triangular_solve(shipped);
    if (jets::dense_residual(shipped, qs) > 1e-9) return false;

    models::AffineCoframeModel holo = models::make_holomorphic_contact_model(2);
    Vector origin = Vector::Zero(holo.dim_m);
    fat2::FatTuple2 tup = models::pointwise_tuple(holo, origin, tol);
    Matrix f0(holo.dim_m, 8);
    for (std::size_t i = 0; i < holo.frame.size(); ++i)
        f0.col(static_cast<Index>(i)) = holo.frame[i].at(origin);
    for (int t = 0; t < 5; ++t) {
        std::uint64_t s = mix_seed(kSeed, 1300 + static_cast<std::uint64_t>(t));
        frames::Frame fr = frames::build_horizontal_deg2(tup, 2, s);
        jets::SymTensorSystem sys =
            suites::holomorphic_jet_system(f0 * fr.vectors, mix_seed(s, 1), tol);
        jets::SymTensor q = jets::triangular_solve(sys);
        if (jets::dense_residual(sys, q) > 1e-6) return false;

        Matrix a = fat2::connecting_automorphism(tup).a;
        Rng rng(mix_seed(s, 2));
        Vector v8 = rng.unit_vector(8);
        Matrix bad8(8, 2);
        bad8 << v8, a * v8;
        jets::SymTensorSystem bad =
            suites::holomorphic_jet_system(f0 * bad8, mix_seed(s, 3), tol);
        // The non-regular image shows up as a rank deficit in the stacked
        // covector matrix, and the solver must refuse.
        if (jets::fullrank_check(bad)) return false;
        jets::DenseSystem good = jets::assemble_dense(sys);
        if (core::rank(good.a, tol) != good.a.rows()) return false;
        try {
            jets::triangular_solve(bad);
            return false;
        } catch (const NotRegularError&) {
        }
    }
    return true;
}

bool criterion10_liouville() {
    Report rep = suites::run_suite("liouville", 50, kSeed);
    return rep.pass();
}

}  // namespace

int main() {
    struct Criterion {
        const char* label;
        bool (*fn)();
    };
    const Criterion criteria[] = {
        {"1 degree detection (holomorphic models, 100 points, degree 2)",
         criterion1_degree_detection},
        {"2 regularity-equivalence oracle (1000 pairs, dims 4-12)",
         criterion2_regularity_equivalence},
        {"3 degree-2 identity suite (500 instances, residual <= 1e-8)",
         criterion3_deg2_identities},
        {"4 frame builders at thresholds (k <= 3, >= 99/100 trials)",
         criterion4_frame_builders},
        {"5 curvature cross-oracle (<= 1e-12 on all shipped models)",
         criterion5_curvature_cross},
        {"6 complex Heisenberg bracket table (exact)", criterion6_bracket_table},
        {"7 Pansu property sweep (500 isotropic subspaces, dims 8/12/16)",
         criterion7_pansu},
        {"8 quaternionic decomposition (200 subspaces, residual <= 1e-10)",
         criterion8_decomposition},
        {"9 jet solver vs dense oracle; non-regular rejected", criterion9_jets},
        {"10 Liouville lift (exact planar, quadratic circle decay, formal lifts)",
         criterion10_liouville},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        bool ok = false;
        try {
            ok = c.fn();
        } catch (const std::exception& e) {
            std::fprintf(stderr, "  criterion %s threw: %s\n", c.label, e.what());
        }
        std::printf("%s criterion %s\n", ok ? "PASS" : "FAIL", c.label);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
