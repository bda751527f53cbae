#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fatdist/fat2.hpp"
#include "fatdist/jets.hpp"
#include "fatdist/models.hpp"
#include "fatdist/qcont.hpp"
#include "fatdist/report.hpp"

namespace fatdist::suites {

/// Random nondegenerate skew pair on R^dim (dim even).
fat2::FatTuple2 random_skew_pair(Index dim, std::uint64_t seed, Tolerance tol = {});

/// Random degree-2 fat tuple on R^dim (dim divisible by 4), produced by a
/// well-conditioned congruence of the holomorphic model's pointwise tuple.
fat2::FatTuple2 random_deg2_tuple(Index dim, std::uint64_t seed, Tolerance tol = {});

/// Standard quaternionic triple conjugated by a random orthogonal matrix.
qcont::QContTriple random_qcont_triple(Index dim, std::uint64_t seed,
                                       Tolerance tol = {});

/// Random k-dimensional triple-isotropic subspace, grown by sampling in
/// V^Omega \ V with no regularity filtering (so Pansu is genuinely tested).
core::Subspace random_isotropic3(const qcont::QContTriple& q, Index k,
                                 std::uint64_t seed);

/// The flat corank-2 Liouville pair mu1 = x1 dy1 + x2 dy2,
/// mu2 = x2 dy1 + x1 dy2 on R^4.
models::LiouvilleModel flat_liouville_pair();

/// Liouville model on R^dim whose dmu^i equal the given skew matrices.
models::LiouvilleModel liouville_from_dmu(const std::vector<Matrix>& dmus);

/// Jet system over the holomorphic n=2 model at the origin with the given
/// first-jet image columns and bounded random right-hand sides.
jets::SymTensorSystem holomorphic_jet_system(const Matrix& p1, std::uint64_t seed,
                                             Tolerance tol = {});

std::vector<std::string> suite_names();

/// Named property suite over `trials` random instances. Suite names:
/// fat2-props, deg2-identities, qcont-props, curvature-cross, jets-oracle,
/// liouville. Unknown names raise SchemaError.
Report run_suite(const std::string& name, int trials, std::uint64_t seed,
                 Tolerance tol = {});

}  // namespace fatdist::suites
