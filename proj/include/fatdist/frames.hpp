#pragma once

#include <cstdint>
#include <string>

#include "fatdist/fat2.hpp"
#include "fatdist/qcont.hpp"
#include "fatdist/report.hpp"

namespace fatdist::frames {

using core::Subspace;

enum class Regime {
    horizontal_deg2,
    isocontact_deg2,
    horizontal_qcont,
    isocontact_qcont,
};

std::string regime_name(Regime r);
Regime parse_regime(const std::string& name);

/// An ordered list of ambient vectors together with the predicate family
/// it claims to satisfy. Isocontact regimes store pairs (u1, v1, ..., uk, vk).
struct Frame {
    Index ambient_dim = 0;
    Matrix vectors;  // ambient_dim x count
    Regime regime = Regime::horizontal_deg2;

    Index count() const { return vectors.cols(); }
};

/// Greedy construction of a k-frame spanning an Omega-regular,
/// Omega-isotropic subspace of a degree-2 tuple. Each step samples the new
/// direction in V^Omega outside (V^Omega)^Omega.
Frame build_horizontal_deg2(const fat2::FatTuple2& t, Index k, std::uint64_t seed);

/// 2k vectors forming an omega1-symplectic basis of an omega2-isotropic
/// span; each pair is solved inside the restricted tuple on the current
/// V^Omega.
Frame build_isocontact_deg2(const fat2::FatTuple2& t, Index k, std::uint64_t seed);

/// k vectors spanning a triple-isotropic subspace of a quaternionic
/// contact model; regularity then comes for free but is still checked.
Frame build_horizontal_qcont(const qcont::QContTriple& q, Index k, std::uint64_t seed);

/// 2k vectors, omega1-symplectic, omega2/omega3-isotropic, regular span.
/// Alternates pick_tau and pick_eta, with a symplectic correction making
/// each eta omega1-orthogonal to the earlier pairs.
Frame build_isocontact_qcont(const qcont::QContTriple& q, Index k, std::uint64_t seed);

/// Re-derives every regime predicate from scratch (raw SVD ranks and Gram
/// matrices, no shared subspace code) and reports one named residual per
/// predicate.
Report verify_frame(const Frame& frame, const fat2::FatTuple2& ctx);
Report verify_frame(const Frame& frame, const qcont::QContTriple& ctx);

}  // namespace fatdist::frames
