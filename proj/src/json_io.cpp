#include "fatdist/json_io.hpp"

#include <fstream>
#include <map>
#include <memory>

namespace fatdist::json_io {

namespace {

const json& require_field(const json& obj, const std::string& key,
                          const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw SchemaError(where + ": missing field '" + key + "'");
    return *it;
}

models::AffineCovector covector_from_json(const json& j, Index dim,
                                          const std::string& where) {
    models::AffineCovector c;
    c.dim = dim;
    c.constant = vector_from_json(require_field(j, "constant", where), where);
    c.linear = matrix_from_json(require_field(j, "linear", where), where);
    if (c.constant.size() != dim || c.linear.rows() != dim || c.linear.cols() != dim)
        throw SchemaError(where + ": covector shape mismatch");
    return c;
}

models::AffineVectorField field_from_json(const json& j, Index dim,
                                          const std::string& where) {
    models::AffineVectorField f;
    f.dim = dim;
    f.constant = vector_from_json(require_field(j, "constant", where), where);
    f.linear = matrix_from_json(require_field(j, "linear", where), where);
    if (f.constant.size() != dim || f.linear.rows() != dim || f.linear.cols() != dim)
        throw SchemaError(where + ": vector field shape mismatch");
    return f;
}

json covector_to_json(const models::AffineCovector& c) {
    return json{{"constant", vector_to_json(c.constant)},
                {"linear", matrix_to_json(c.linear)}};
}

}  // namespace

json load_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError(path + ": cannot open file");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(path + ": " + e.what());
    }
    if (!j.is_object()) throw SchemaError(path + ": top level must be an object");
    const json& ver = require_field(j, "schema_version", path);
    if (!ver.is_number_integer() || ver.get<int>() != kSchemaVersion)
        throw SchemaError(path + ": unsupported schema_version");
    require_field(j, "kind", path);
    require_field(j, "payload", path);
    if (!j["kind"].is_string())
        throw SchemaError(path + ": kind must be a string");
    return j;
}

std::string kind_of(const json& instance) {
    return instance.at("kind").get<std::string>();
}

Tolerance tolerance_of(const json& instance, Tolerance fallback) {
    auto it = instance.find("tol");
    if (it == instance.end()) return fallback;
    if (!it->is_object()) throw SchemaError("tol: must be an object");
    double rel = it->value("rel_eps", fallback.rel_eps);
    double abs = it->value("abs_eps", fallback.abs_eps);
    try {
        return Tolerance(rel, abs);
    } catch (const PreconditionError& e) {
        throw SchemaError(std::string("tol: ") + e.what());
    }
}

Matrix matrix_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty())
        throw SchemaError(where + ": matrix must be a non-empty array of rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array())
        throw SchemaError(where + ": matrix rows must be arrays");
    const std::size_t cols = j[0].size();
    Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw SchemaError(where + ": matrix is not rectangular");
        for (std::size_t c = 0; c < cols; ++c) {
            if (!j[r][c].is_number())
                throw SchemaError(where + ": matrix entries must be numbers");
            m(static_cast<Index>(r), static_cast<Index>(c)) = j[r][c].get<double>();
        }
    }
    require_finite(m, where.c_str());
    return m;
}

Vector vector_from_json(const json& j, const std::string& where) {
    if (!j.is_array())
        throw SchemaError(where + ": vector must be an array");
    Vector v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number())
            throw SchemaError(where + ": vector entries must be numbers");
        v(static_cast<Index>(i)) = j[i].get<double>();
    }
    return v;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_to_json(const Vector& v) {
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

fat2::FatTuple2 read_fat_tuple(const json& instance, Tolerance tol) {
    const json& p = instance.at("payload");
    Matrix o1 = matrix_from_json(require_field(p, "omega1", "fat_tuple"), "omega1");
    Matrix o2 = matrix_from_json(require_field(p, "omega2", "fat_tuple"), "omega2");
    try {
        return fat2::FatTuple2(std::move(o1), std::move(o2), tol);
    } catch (const InvalidFormError& e) {
        throw SchemaError(std::string("fat_tuple: ") + e.what());
    } catch (const DimensionMismatchError& e) {
        throw SchemaError(std::string("fat_tuple: ") + e.what());
    }
}

qcont::QContTriple read_qcont_triple(const json& instance, Tolerance tol) {
    const json& p = instance.at("payload");
    try {
        if (p.contains("standard_n"))
            return qcont::QContTriple::standard(p["standard_n"].get<Index>(), tol);
        Matrix g = matrix_from_json(require_field(p, "g", "qcont_triple"), "g");
        Matrix j1 = matrix_from_json(require_field(p, "j1", "qcont_triple"), "j1");
        Matrix j2 = matrix_from_json(require_field(p, "j2", "qcont_triple"), "j2");
        Matrix j3 = matrix_from_json(require_field(p, "j3", "qcont_triple"), "j3");
        return qcont::QContTriple(std::move(g), std::move(j1), std::move(j2),
                                  std::move(j3), tol);
    } catch (const InvalidFormError& e) {
        throw SchemaError(std::string("qcont_triple: ") + e.what());
    } catch (const DimensionMismatchError& e) {
        throw SchemaError(std::string("qcont_triple: ") + e.what());
    }
}

models::AffineCoframeModel read_affine_model(const json& instance) {
    const json& p = instance.at("payload");
    if (p.contains("builtin")) {
        const std::string name = p["builtin"].get<std::string>();
        const Index n = require_field(p, "n", "affine_model").get<Index>();
        if (name == "holomorphic_contact")
            return models::make_holomorphic_contact_model(n);
        if (name == "quaternionic_heisenberg")
            return models::make_quaternionic_heisenberg_model(n).model;
        throw SchemaError("affine_model: unknown builtin '" + name + "'");
    }
    models::AffineCoframeModel m;
    m.dim_m = require_field(p, "dim_m", "affine_model").get<Index>();
    m.p = require_field(p, "p", "affine_model").get<Index>();
    for (const json& lam : require_field(p, "lambdas", "affine_model"))
        m.lambdas.push_back(covector_from_json(lam, m.dim_m, "affine_model.lambdas"));
    if (static_cast<Index>(m.lambdas.size()) != m.p)
        throw SchemaError("affine_model: lambda count != p");
    if (p.contains("frame"))
        for (const json& f : p["frame"])
            m.frame.push_back(field_from_json(f, m.dim_m, "affine_model.frame"));
    return m;
}

models::LiouvilleModel read_liouville_model(const json& instance) {
    const json& p = instance.at("payload");
    models::LiouvilleModel l;
    l.n_dim = require_field(p, "n_dim", "liouville_model").get<Index>();
    l.p = require_field(p, "p", "liouville_model").get<Index>();
    for (const json& mu : require_field(p, "mus", "liouville_model"))
        l.mus.push_back(covector_from_json(mu, l.n_dim, "liouville_model.mus"));
    if (static_cast<Index>(l.mus.size()) != l.p)
        throw SchemaError("liouville_model: mu count != p");
    return l;
}

frames::Frame read_frame(const json& instance) {
    const json& p = instance.at("payload");
    frames::Frame f;
    f.ambient_dim = require_field(p, "ambient_dim", "frame").get<Index>();
    f.regime = frames::parse_regime(
        require_field(p, "regime", "frame").get<std::string>());
    f.vectors = matrix_from_json(require_field(p, "vectors", "frame"), "frame.vectors");
    if (f.vectors.rows() != f.ambient_dim)
        throw SchemaError("frame: vectors do not live in ambient_dim");
    return f;
}

Grid read_grid(const json& instance) {
    const json& p = instance.at("payload");
    Grid g;
    g.points = matrix_from_json(require_field(p, "points", "grid"), "grid.points");
    g.primitives =
        matrix_from_json(require_field(p, "primitives", "grid"), "grid.primitives");
    if (g.points.cols() != g.primitives.cols())
        throw SchemaError("grid: points and primitives sample counts differ");
    return g;
}

jets::SymTensorSystem read_jets_system(const json& instance, Tolerance tol) {
    const json& p = instance.at("payload");
    jets::SymTensorSystem sys;
    sys.tol = tol;
    sys.k_plus_1 = require_field(p, "k_plus_1", "jets_system").get<Index>();
    sys.n = require_field(p, "n", "jets_system").get<Index>();
    sys.p = require_field(p, "p", "jets_system").get<Index>();
    sys.alpha = p.value("alpha", 0);
    sys.lambda = matrix_from_json(require_field(p, "lambda", "jets_system"), "lambda");
    for (const json& d : require_field(p, "dlambdas", "jets_system"))
        sys.dlambdas.push_back(matrix_from_json(d, "jets_system.dlambdas"));
    sys.p1 = matrix_from_json(require_field(p, "p1", "jets_system"), "p1");

    // rhs tables keyed by 1-based index strings ("1,1" / "1|1,2"); missing
    // keys default to zero, which keeps the provider total.
    auto lam_table = std::make_shared<std::map<std::string, Vector>>();
    auto cpl_table = std::make_shared<std::map<std::string, Vector>>();
    if (p.contains("rhs_lambda"))
        for (const auto& [key, val] : p["rhs_lambda"].items())
            (*lam_table)[key] = vector_from_json(val, "jets_system.rhs_lambda");
    if (p.contains("rhs_coupling"))
        for (const auto& [key, val] : p["rhs_coupling"].items())
            (*cpl_table)[key] = vector_from_json(val, "jets_system.rhs_coupling");

    auto index_key = [](const jets::MultiIndex& i) {
        std::string s;
        for (std::size_t t = 0; t < i.entries.size(); ++t)
            s += (t ? "," : "") + std::to_string(i.entries[t] + 1);
        return s;
    };
    const Index corank = sys.p;
    sys.rhs_lambda = [lam_table, index_key, corank](const jets::MultiIndex& i) {
        auto it = lam_table->find(index_key(i));
        return it == lam_table->end() ? Vector(Vector::Zero(corank)) : it->second;
    };
    sys.rhs_coupling = [cpl_table, index_key, corank](const jets::MultiIndex& j,
                                                      Index a, Index b) {
        std::string key = index_key(j) + "|" + std::to_string(a + 1) + "," +
                          std::to_string(b + 1);
        auto it = cpl_table->find(key);
        return it == cpl_table->end() ? Vector(Vector::Zero(corank)) : it->second;
    };
    return sys;
}

json frame_to_json(const frames::Frame& f) {
    return json{{"schema_version", kSchemaVersion},
                {"kind", "frame"},
                {"payload",
                 {{"ambient_dim", f.ambient_dim},
                  {"regime", frames::regime_name(f.regime)},
                  {"vectors", matrix_to_json(f.vectors)}}}};
}

json grid_to_json(const Matrix& points) {
    return json{{"schema_version", kSchemaVersion},
                {"kind", "grid"},
                {"payload",
                 {{"points", matrix_to_json(points)},
                  {"primitives", matrix_to_json(Matrix::Zero(0, points.cols()))}}}};
}

json report_to_json(const Report& rep) {
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back(
            {{"name", c.name}, {"pass", c.pass}, {"residual", c.residual}});
    return json{{"checks", std::move(checks)}, {"pass", rep.pass()}};
}

json sym_tensor_to_json(const jets::SymTensor& q) {
    json values = json::object();
    for (const auto& [idx, vec] : q.values) {
        std::string key;
        for (std::size_t t = 0; t < idx.entries.size(); ++t)
            key += (t ? "," : "") + std::to_string(idx.entries[t] + 1);
        values[key] = vector_to_json(vec);
    }
    return json{{"kind", "sym_tensor"}, {"values", std::move(values)}};
}

}  // namespace fatdist::json_io
