#pragma once

#include <functional>
#include <map>
#include <vector>

#include "fatdist/core.hpp"

namespace fatdist::jets {

/// Nondecreasing tuple of coordinate indices in 0..k, compared
/// lexicographically. Indexes a component of a symmetric tensor.
struct MultiIndex {
    std::vector<Index> entries;

    bool operator<(const MultiIndex& o) const { return entries < o.entries; }
    bool operator==(const MultiIndex& o) const { return entries == o.entries; }
    Index size() const { return static_cast<Index>(entries.size()); }

    /// The sorted insertion I + a.
    MultiIndex plus(Index a) const;
    /// Copy with the first occurrence of a removed. Throws if absent.
    MultiIndex minus(Index a) const;

    std::string str() const;
};

/// All nondecreasing tuples of the given length with entries in 0..max_entry,
/// in increasing lexicographic order.
std::vector<MultiIndex> all_multi_indices(Index length, Index max_entry);

/// The coupled affine system on a symmetric tensor
/// Q : Sym^{alpha+2} R^{k+1} -> R^n:
///   lambda . Q(d_I) = rhs_lambda(I)                       for every I,
///   (i_{P1 e_a} dlambda) . Q(d_{J+b})
///     - (i_{P1 e_b} dlambda) . Q(d_{J+a}) = rhs_coupling(J, a, b)
///                                    for every |J| = alpha+1 and a < b.
/// The right-hand sides are caller-supplied per equation tag.
struct SymTensorSystem {
    Index k_plus_1 = 0;  // domain dimension
    Index n = 0;         // ambient dimension
    Index p = 0;         // corank
    Index alpha = 0;     // tensor order is alpha + 2
    Matrix lambda;       // p x n, full rank
    std::vector<Matrix> dlambdas;  // p skew n x n matrices
    Matrix p1;                     // n x k_plus_1
    std::function<Vector(const MultiIndex&)> rhs_lambda;
    std::function<Vector(const MultiIndex&, Index, Index)> rhs_coupling;
    Tolerance tol = {};
};

struct SymTensor {
    std::map<MultiIndex, Vector> values;
};

/// True iff the stacked covectors {lambda^s} ∪ {i_{P1 e_i} dlambda^s} have
/// full rank p(k+2) — exactly Omega-regularity of im(p1).
bool fullrank_check(const SymTensorSystem& sys);

/// Solves the system in increasing lexicographic order; each step is a
/// full-rank affine solve with minimum-norm completion. The step for index
/// I reads only values at indices strictly before I (asserted). Residual
/// above 1e-9 after back-substitution raises NumericFailureError.
SymTensor triangular_solve(const SymTensorSystem& sys);

/// One global least-squares system over all tensor components at once;
/// test oracle only. Unknown ordering: all_multi_indices blocks of n.
struct DenseSystem {
    Matrix a;
    Vector b;
    std::vector<MultiIndex> unknown_order;
};
DenseSystem assemble_dense(const SymTensorSystem& sys);

/// Residual of a tensor against the fully assembled system.
double dense_residual(const SymTensorSystem& sys, const SymTensor& q);

}  // namespace fatdist::jets
