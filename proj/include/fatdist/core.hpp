#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "fatdist/errors.hpp"

namespace fatdist {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Thresholds for all rank/membership decisions. A singular value sigma
/// counts as nonzero when sigma > rel_eps * sigma_max + abs_eps.
struct Tolerance {
    double rel_eps = 1e-9;
    double abs_eps = 1e-12;

    Tolerance() = default;
    Tolerance(double rel, double abs) : rel_eps(rel), abs_eps(abs) {
        if (!(rel_eps > 0.0) || !(abs_eps > 0.0))
            throw PreconditionError("Tolerance: rel_eps and abs_eps must be positive");
    }

    double threshold(double scale) const { return rel_eps * scale + abs_eps; }
};

/// Throws InvalidFormError if any entry is NaN or infinite.
void require_finite(const Matrix& m, const char* what);

namespace core {

/// Numerical rank via SVD. Empty matrix has rank 0.
Index rank(const Matrix& m, const Tolerance& tol = {});

/// Orthonormal kernel basis (cols x (cols - rank)).
Matrix kernel_basis(const Matrix& m, const Tolerance& tol = {});

/// A subspace of R^ambient_dim, stored with an orthonormal basis.
/// Zero-dimensional subspaces are first-class (empty basis).
class Subspace {
public:
    /// The zero subspace of R^n.
    static Subspace zero(Index ambient_dim);
    /// All of R^n.
    static Subspace full(Index ambient_dim);
    /// Span of the given columns; dependent columns are compressed away.
    static Subspace span(const Matrix& columns, const Tolerance& tol = {});
    /// Like span(), but throws PreconditionError if the columns are
    /// dependent at the tolerance.
    static Subspace from_basis(const Matrix& columns, const Tolerance& tol = {});

    Index ambient_dim() const { return ambient_; }
    Index dim() const { return basis_.cols(); }
    /// Orthonormal basis, ambient_dim x dim.
    const Matrix& basis() const { return basis_; }

    /// Distance from v to the subspace, relative to |v|.
    double distance(const Vector& v) const;
    bool contains(const Vector& v, const Tolerance& tol = {}) const;
    bool contains(const Subspace& other, const Tolerance& tol = {}) const;

    /// Spectral norm of the difference of orthogonal projectors; zero iff
    /// the subspaces are equal.
    double projector_distance(const Subspace& other) const;
    bool equals(const Subspace& other, const Tolerance& tol = {}) const;

    /// Image under a linear map (compressed).
    Subspace map(const Matrix& a, const Tolerance& tol = {}) const;
    /// Orthogonal complement with respect to the Euclidean inner product.
    Subspace orthogonal_complement(const Tolerance& tol = {}) const;

private:
    Subspace(Index ambient, Matrix basis) : ambient_(ambient), basis_(std::move(basis)) {}
    Index ambient_;
    Matrix basis_;  // orthonormal columns
};

Subspace sum(const Subspace& v, const Subspace& w, const Tolerance& tol = {});
Subspace intersect(const Subspace& v, const Subspace& w, const Tolerance& tol = {});

/// {w | omega(v, w) = 0 for all v in V} for a skew form omega.
/// Throws InvalidFormError if omega is not skew at the tolerance.
Subspace form_perp(const Subspace& v, const Matrix& omega, const Tolerance& tol = {});

/// Degree of the minimal polynomial, decided as the smallest d such that
/// {I, A, ..., A^d} is linearly dependent in n^2-space. Powers are
/// normalized by Frobenius norm before the dependence test.
Index minpoly_degree(const Matrix& a, const Tolerance& tol = {});

/// True iff some eigenvalue of a has |Im| <= tol * spectral scale.
bool has_real_eigenvalue(const Matrix& a, const Tolerance& tol = {});

/// 2-norm condition number (largest/smallest singular value).
double condition_number(const Matrix& a);

}  // namespace core
}  // namespace fatdist
