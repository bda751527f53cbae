#include "fatdist/core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace fatdist {

void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite())
        throw InvalidFormError(std::string(what) + ": non-finite entries");
}

namespace core {
namespace {

Eigen::JacobiSVD<Matrix> svd_full(const Matrix& m) {
    return Eigen::JacobiSVD<Matrix>(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

Index rank_from_svd(const Eigen::JacobiSVD<Matrix>& svd, const Tolerance& tol) {
    if (svd.singularValues().size() == 0) return 0;
    const double cut = tol.threshold(svd.singularValues()(0));
    Index r = 0;
    for (Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > cut) ++r;
    return r;
}

}  // namespace

Index rank(const Matrix& m, const Tolerance& tol) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    require_finite(m, "rank");
    Eigen::JacobiSVD<Matrix> svd(m);
    return rank_from_svd(svd, tol);
}

Matrix kernel_basis(const Matrix& m, const Tolerance& tol) {
    if (m.cols() == 0) return Matrix(0, 0);
    if (m.rows() == 0) return Matrix::Identity(m.cols(), m.cols());
    require_finite(m, "kernel");
    auto svd = svd_full(m);
    const Index r = rank_from_svd(svd, tol);
    return svd.matrixV().rightCols(m.cols() - r);
}

Subspace Subspace::zero(Index ambient_dim) {
    return Subspace(ambient_dim, Matrix(ambient_dim, 0));
}

Subspace Subspace::full(Index ambient_dim) {
    return Subspace(ambient_dim, Matrix::Identity(ambient_dim, ambient_dim));
}

Subspace Subspace::span(const Matrix& columns, const Tolerance& tol) {
    require_finite(columns, "Subspace::span");
    if (columns.cols() == 0) return zero(columns.rows());
    auto svd = svd_full(columns);
    const Index r = rank_from_svd(svd, tol);
    return Subspace(columns.rows(), svd.matrixU().leftCols(r));
}

Subspace Subspace::from_basis(const Matrix& columns, const Tolerance& tol) {
    Subspace s = span(columns, tol);
    if (s.dim() != columns.cols())
        throw PreconditionError("Subspace::from_basis: columns are dependent at tolerance");
    return s;
}

double Subspace::distance(const Vector& v) const {
    if (v.size() != ambient_)
        throw DimensionMismatchError("Subspace::distance: ambient mismatch");
    const double nv = v.norm();
    if (nv == 0.0) return 0.0;
    return (v - basis_ * (basis_.transpose() * v)).norm() / nv;
}

bool Subspace::contains(const Vector& v, const Tolerance& tol) const {
    return distance(v) <= tol.threshold(1.0);
}

bool Subspace::contains(const Subspace& other, const Tolerance& tol) const {
    if (other.ambient_dim() != ambient_)
        throw DimensionMismatchError("Subspace::contains: ambient mismatch");
    for (Index j = 0; j < other.dim(); ++j)
        if (!contains(Vector(other.basis().col(j)), tol)) return false;
    return true;
}

double Subspace::projector_distance(const Subspace& other) const {
    if (other.ambient_dim() != ambient_)
        throw DimensionMismatchError("Subspace::projector_distance: ambient mismatch");
    Matrix diff = basis_ * basis_.transpose() - other.basis_ * other.basis_.transpose();
    if (diff.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Matrix>(diff).singularValues()(0);
}

bool Subspace::equals(const Subspace& other, const Tolerance& tol) const {
    return dim() == other.dim() && projector_distance(other) <= tol.threshold(1.0);
}

Subspace Subspace::map(const Matrix& a, const Tolerance& tol) const {
    if (a.cols() != ambient_)
        throw DimensionMismatchError("Subspace::map: shape mismatch");
    return span(a * basis_, tol);
}

Subspace Subspace::orthogonal_complement(const Tolerance& tol) const {
    return span(kernel_basis(basis_.transpose(), tol), tol);
}

Subspace sum(const Subspace& v, const Subspace& w, const Tolerance& tol) {
    if (v.ambient_dim() != w.ambient_dim())
        throw DimensionMismatchError("sum: ambient mismatch");
    Matrix cat(v.ambient_dim(), v.dim() + w.dim());
    cat << v.basis(), w.basis();
    return Subspace::span(cat, tol);
}

Subspace intersect(const Subspace& v, const Subspace& w, const Tolerance& tol) {
    if (v.ambient_dim() != w.ambient_dim())
        throw DimensionMismatchError("intersect: ambient mismatch");
    if (v.dim() == 0 || w.dim() == 0) return Subspace::zero(v.ambient_dim());
    // Null vectors of [Bv | -Bw] give pairs (x, y) with Bv x = Bw y.
    Matrix stacked(v.ambient_dim(), v.dim() + w.dim());
    stacked << v.basis(), -w.basis();
    Matrix null = kernel_basis(stacked, tol);
    return Subspace::span(v.basis() * null.topRows(v.dim()), tol);
}

Subspace form_perp(const Subspace& v, const Matrix& omega, const Tolerance& tol) {
    const Index n = v.ambient_dim();
    if (omega.rows() != n || omega.cols() != n)
        throw DimensionMismatchError("form_perp: omega size mismatch");
    require_finite(omega, "form_perp");
    const double scale = omega.norm();
    if ((omega + omega.transpose()).norm() > tol.threshold(scale))
        throw InvalidFormError("form_perp: omega is not skew-symmetric at tolerance");
    if (v.dim() == 0) return Subspace::full(n);
    return Subspace::span(kernel_basis(v.basis().transpose() * omega, tol), tol);
}

Index minpoly_degree(const Matrix& a, const Tolerance& tol) {
    if (a.rows() != a.cols())
        throw PreconditionError("minpoly_degree: matrix must be square");
    require_finite(a, "minpoly_degree");
    const Index n = a.rows();
    if (n == 0) return 0;
    Matrix powers(n * n, n + 1);
    Matrix pw = Matrix::Identity(n, n);
    for (Index d = 0; d <= n; ++d) {
        double norm = pw.norm();
        if (norm == 0.0) return d;  // A^d = 0: trivially dependent on earlier powers
        Matrix nrm = pw / norm;
        powers.col(d) = Eigen::Map<const Vector>(nrm.data(), n * n);
        if (rank(powers.leftCols(d + 1), tol) < d + 1) return d;
        pw = pw * a;
    }
    // {I, ..., A^n} is always dependent (Cayley-Hamilton); unreachable
    // unless tolerances are broken.
    throw NumericFailureError("minpoly_degree: no dependence found up to dimension");
}

bool has_real_eigenvalue(const Matrix& a, const Tolerance& tol) {
    if (a.rows() != a.cols())
        throw PreconditionError("has_real_eigenvalue: matrix must be square");
    require_finite(a, "has_real_eigenvalue");
    if (a.rows() == 0) return false;
    Eigen::EigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw NumericFailureError("has_real_eigenvalue: eigensolver did not converge");
    const auto& ev = es.eigenvalues();
    double scale = 0.0;
    for (Index i = 0; i < ev.size(); ++i) scale = std::max(scale, std::abs(ev(i)));
    for (Index i = 0; i < ev.size(); ++i)
        if (std::abs(ev(i).imag()) <= tol.threshold(scale)) return true;
    return false;
}

double condition_number(const Matrix& a) {
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(s.size() - 1) == 0.0)
        return std::numeric_limits<double>::infinity();
    return s(0) / s(s.size() - 1);
}

}  // namespace core
}  // namespace fatdist
