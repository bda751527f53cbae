#pragma once

#include <json.hpp>
#include <string>

#include "fatdist/fat2.hpp"
#include "fatdist/frames.hpp"
#include "fatdist/jets.hpp"
#include "fatdist/models.hpp"
#include "fatdist/qcont.hpp"
#include "fatdist/report.hpp"

namespace fatdist::json_io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Parses a file, checks schema_version and the presence of kind/payload.
/// All violations raise SchemaError with a location hint.
json load_instance_file(const std::string& path);

std::string kind_of(const json& instance);
Tolerance tolerance_of(const json& instance, Tolerance fallback = {});

Matrix matrix_from_json(const json& j, const std::string& where);
Vector vector_from_json(const json& j, const std::string& where);
json matrix_to_json(const Matrix& m);
json vector_to_json(const Vector& v);

fat2::FatTuple2 read_fat_tuple(const json& instance, Tolerance tol);
qcont::QContTriple read_qcont_triple(const json& instance, Tolerance tol);
models::AffineCoframeModel read_affine_model(const json& instance);
models::LiouvilleModel read_liouville_model(const json& instance);
frames::Frame read_frame(const json& instance);

struct Grid {
    Matrix points;      // n_dim x samples
    Matrix primitives;  // p x samples
};
Grid read_grid(const json& instance);

jets::SymTensorSystem read_jets_system(const json& instance, Tolerance tol);

json frame_to_json(const frames::Frame& f);
json grid_to_json(const Matrix& points);
json report_to_json(const Report& rep);
json sym_tensor_to_json(const jets::SymTensor& q);

}  // namespace fatdist::json_io
