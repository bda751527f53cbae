#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "fatdist/json_io.hpp"
#include "fatdist/rng.hpp"
#include "fatdist/suites.hpp"

namespace {

using namespace fatdist;
using json_io::json;

constexpr int kExitCheckFailure = 1;
constexpr int kExitSchema = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitNoFrame = 4;
constexpr int kExitExactness = 5;
constexpr int kExitNotRegular = 6;

struct Options {
    double tol_rel = 1e-9;
    std::uint64_t seed = 0;
    int trials = 100;
    int refine = 0;
    bool oracle = false;
    double mesh_tol = 1e-6;
    std::string suite;
    std::string regime;
    Index k = 1;
    std::vector<std::string> files;

    Tolerance tolerance() const { return Tolerance(tol_rel, 1e-12); }
};

void print_summary(const Report& rep, const std::string& what) {
    for (const auto& c : rep.checks)
        std::cerr << (c.pass ? "  ok   " : "  FAIL ") << what << "." << c.name
                  << "  residual=" << c.residual << "\n";
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_check(const Options& opt) {
    if (opt.files.empty()) throw SchemaError("check: no input files");
    Tolerance tol = opt.tolerance();
    json files = json::array();
    bool all_pass = true;
    for (const std::string& path : opt.files) {
        json instance = json_io::load_instance_file(path);
        std::string kind = json_io::kind_of(instance);
        Tolerance ftol = json_io::tolerance_of(instance, tol);
        json entry{{"path", path}, {"kind", kind}};
        Report rep;
        if (kind == "fat_tuple") {
            fat2::FatTuple2 t = json_io::read_fat_tuple(instance, ftol);
            bool fat = fat2::is_fat(t);
            entry["fat"] = fat;
            if (fat) entry["degree"] = fat2::degree(t);
            rep.add("well_formed", true);
        } else if (kind == "qcont_triple") {
            qcont::QContTriple q = json_io::read_qcont_triple(instance, ftol);
            rep = qcont::validate_triple(q);
            entry["degree"] = fat2::degree(qcont::induced_fat_pair(q));
        } else if (kind == "affine_model") {
            models::AffineCoframeModel m = json_io::read_affine_model(instance);
            rep = models::validate_model(m, opt.seed, 10, ftol);
            if (m.p == 2 && m.has_frame()) {
                Rng rng(mix_seed(opt.seed, 17));
                bool fat = true;
                Index deg = 0;
                for (int probe = 0; probe < 10; ++probe) {
                    fat2::FatTuple2 t = models::pointwise_tuple(
                        m, rng.gaussian_vector(m.dim_m), ftol);
                    if (!fat2::is_fat(t)) {
                        fat = false;
                        break;
                    }
                    deg = fat2::degree(t);
                }
                entry["fat"] = fat;
                if (fat) entry["degree"] = deg;
            }
        } else {
            throw SchemaError("check: unsupported kind '" + kind + "'");
        }
        entry["report"] = json_io::report_to_json(rep);
        all_pass = all_pass && rep.pass();
        print_summary(rep, path);
        files.push_back(std::move(entry));
    }
    emit(json{{"command", "check"}, {"files", files}, {"pass", all_pass}});
    return all_pass ? 0 : kExitCheckFailure;
}

int cmd_frame(const Options& opt) {
    if (opt.files.size() != 1) throw SchemaError("frame: exactly one input file");
    json instance = json_io::load_instance_file(opt.files[0]);
    Tolerance tol = json_io::tolerance_of(instance, opt.tolerance());
    frames::Regime regime = frames::parse_regime(opt.regime);
    std::string kind = json_io::kind_of(instance);

    frames::Frame frame;
    Report rep;
    if (kind == "fat_tuple") {
        fat2::FatTuple2 t = json_io::read_fat_tuple(instance, tol);
        if (regime == frames::Regime::horizontal_deg2)
            frame = frames::build_horizontal_deg2(t, opt.k, opt.seed);
        else if (regime == frames::Regime::isocontact_deg2)
            frame = frames::build_isocontact_deg2(t, opt.k, opt.seed);
        else
            throw SchemaError("frame: regime requires a qcont_triple file");
        rep = frames::verify_frame(frame, t);
    } else if (kind == "qcont_triple") {
        qcont::QContTriple q = json_io::read_qcont_triple(instance, tol);
        if (regime == frames::Regime::horizontal_qcont)
            frame = frames::build_horizontal_qcont(q, opt.k, opt.seed);
        else if (regime == frames::Regime::isocontact_qcont)
            frame = frames::build_isocontact_qcont(q, opt.k, opt.seed);
        else
            throw SchemaError("frame: regime requires a fat_tuple file");
        rep = frames::verify_frame(frame, q);
    } else {
        throw SchemaError("frame: unsupported kind '" + kind + "'");
    }
    print_summary(rep, "frame");
    emit(json{{"command", "frame"},
              {"seed", opt.seed},
              {"report", json_io::report_to_json(rep)},
              {"frame", json_io::frame_to_json(frame)}});
    return rep.pass() ? 0 : kExitCheckFailure;
}

int cmd_verify(const Options& opt) {
    Report rep = suites::run_suite(opt.suite, opt.trials, opt.seed, opt.tolerance());
    print_summary(rep, opt.suite);
    emit(json{{"command", "verify"},
              {"suite", opt.suite},
              {"trials", opt.trials},
              {"seed", opt.seed},
              {"report", json_io::report_to_json(rep)},
              {"pass", rep.pass()}});
    return rep.pass() ? 0 : kExitCheckFailure;
}

int cmd_lift(const Options& opt) {
    if (opt.files.size() != 2)
        throw SchemaError("lift: expected MODEL_FILE GRID_FILE");
    json minst = json_io::load_instance_file(opt.files[0]);
    json ginst = json_io::load_instance_file(opt.files[1]);
    if (json_io::kind_of(minst) != "liouville_model")
        throw SchemaError("lift: first file must be a liouville_model");
    if (json_io::kind_of(ginst) != "grid")
        throw SchemaError("lift: second file must be a grid");
    models::LiouvilleModel l = json_io::read_liouville_model(minst);
    json_io::Grid grid = json_io::read_grid(ginst);

    Report rep;
    json levels = json::array();
    if (opt.refine > 0) {
        // Coarse-to-fine residuals by striding the supplied grid.
        double prev = 0.0;
        for (int level = 0; level < opt.refine; ++level) {
            Index stride = Index(1) << (opt.refine - 1 - level);
            if ((grid.points.cols() - 1) % stride != 0)
                throw SchemaError("lift: grid size incompatible with --refine");
            Index m = (grid.points.cols() - 1) / stride + 1;
            Matrix pts(grid.points.rows(), m);
            Matrix prim(grid.primitives.rows(), m);
            for (Index i = 0; i < m; ++i) {
                pts.col(i) = grid.points.col(i * stride);
                prim.col(i) = grid.primitives.col(i * stride);
            }
            models::LiftResult lr =
                models::lift_exact_lagrangian(l, pts, prim, opt.mesh_tol);
            json lv{{"samples", m}, {"residual", lr.max_edge_residual}};
            if (level > 0 && lr.max_edge_residual > 0.0)
                lv["ratio"] = prev / lr.max_edge_residual;
            prev = lr.max_edge_residual;
            levels.push_back(std::move(lv));
        }
    }
    models::LiftResult lr =
        models::lift_exact_lagrangian(l, grid.points, grid.primitives, opt.mesh_tol);
    rep.add_residual("horizontality", lr.max_edge_residual, opt.mesh_tol);
    print_summary(rep, "lift");
    json out{{"command", "lift"},
             {"report", json_io::report_to_json(rep)},
             {"lifted", json_io::grid_to_json(lr.points)},
             {"max_edge_residual", lr.max_edge_residual},
             {"worst_edge", lr.worst_edge}};
    if (opt.refine > 0) out["levels"] = levels;
    emit(out);
    return rep.pass() ? 0 : kExitCheckFailure;
}

int cmd_jets(const Options& opt) {
    if (opt.files.size() != 1) throw SchemaError("jets: exactly one input file");
    json instance = json_io::load_instance_file(opt.files[0]);
    if (json_io::kind_of(instance) != "jets_system")
        throw SchemaError("jets: file must be a jets_system");
    Tolerance tol = json_io::tolerance_of(instance, opt.tolerance());
    jets::SymTensorSystem sys = json_io::read_jets_system(instance, tol);

    jets::SymTensor q = jets::triangular_solve(sys);
    Report rep;
    double res = jets::dense_residual(sys, q);
    rep.add_residual("assembled_residual", res, 1e-9);
    if (opt.oracle) {
        jets::DenseSystem d = jets::assemble_dense(sys);
        Vector x = d.a.completeOrthogonalDecomposition().solve(d.b);
        double oracle_res = (d.a * x - d.b).norm() / std::max(1.0, d.b.norm());
        rep.add_residual("oracle_residual_gap", std::abs(res - oracle_res), 1e-6);
        rep.add("oracle_full_rank", core::rank(d.a, tol) == d.a.rows());
    }
    print_summary(rep, "jets");
    emit(json{{"command", "jets"},
              {"report", json_io::report_to_json(rep)},
              {"solution", json_io::sym_tensor_to_json(q)}});
    return rep.pass() ? 0 : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical toolkit for fat distributions: pointwise models, "
                 "frame spaces, lifts, and jet systems"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--tol", opt.tol_rel, "Relative tolerance for rank decisions");
    app.add_option("--seed", opt.seed, "Base RNG seed");
    app.add_option("--trials", opt.trials, "Trials for verify sweeps");
    app.add_option("--refine", opt.refine, "Mesh refinement levels for lift");
    app.add_flag("--oracle", opt.oracle, "Cross-check jets against the dense oracle");
    app.add_option("--mesh-tol", opt.mesh_tol, "Discrete exactness tolerance for lift");
    app.fallthrough();

    auto* check = app.add_subcommand("check", "Validate tuples, triples, and models");
    check->add_option("files", opt.files, "Instance files");

    auto* frame = app.add_subcommand("frame", "Build and verify an R(k) frame");
    frame->add_option("files", opt.files, "Instance file");
    frame->add_option("--regime", opt.regime, "Frame regime")->required();
    frame->add_option("--k", opt.k, "Frame size parameter")->required();

    auto* verify = app.add_subcommand("verify", "Run a randomized property suite");
    verify->add_option("files", opt.files, "Ignored; suites are generative");
    verify->add_option("--suite", opt.suite, "Suite name")->required();

    auto* lift = app.add_subcommand("lift", "Lift sampled exact-Lagrangian data");
    lift->add_option("files", opt.files, "Model file then grid file");

    auto* jets_cmd = app.add_subcommand("jets", "Solve a triangular jet system");
    jets_cmd->add_option("files", opt.files, "System file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return cmd_check(opt);
        if (frame->parsed()) return cmd_frame(opt);
        if (verify->parsed()) return cmd_verify(opt);
        if (lift->parsed()) return cmd_lift(opt);
        if (jets_cmd->parsed()) return cmd_jets(opt);
    } catch (const fatdist::SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const fatdist::ExactnessError& e) {
        std::cerr << "exactness error: " << e.what() << "\n";
        return kExitExactness;
    } catch (const fatdist::NotRegularError& e) {
        std::cerr << "not regular: " << e.what() << "\n";
        return kExitNotRegular;
    } catch (const fatdist::NoRoomError& e) {
        std::cerr << "no frame found: " << e.what() << "\n";
        return kExitNoFrame;
    } catch (const fatdist::ConstructionFailureError& e) {
        std::cerr << "no frame found: " << e.what() << "\n";
        return kExitNoFrame;
    } catch (const fatdist::NumericFailureError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const fatdist::InternalInconsistencyError& e) {
        std::cerr << "internal inconsistency: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const fatdist::PreconditionError& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return kExitSchema;
    } catch (const fatdist::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSchema;
    }
    return 0;
}
