#include "fatdist/jets.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fatdist::jets {

namespace {

void validate_system(const SymTensorSystem& sys) {
    if (sys.k_plus_1 < 1 || sys.n < 1 || sys.p < 1 || sys.alpha < 0)
        throw PreconditionError("SymTensorSystem: bad sizes");
    if (sys.lambda.rows() != sys.p || sys.lambda.cols() != sys.n)
        throw DimensionMismatchError("SymTensorSystem: lambda shape");
    if (core::rank(sys.lambda, sys.tol) != sys.p)
        throw PreconditionError("SymTensorSystem: lambda not full rank");
    if (static_cast<Index>(sys.dlambdas.size()) != sys.p)
        throw DimensionMismatchError("SymTensorSystem: dlambda count");
    for (const Matrix& d : sys.dlambdas) {
        if (d.rows() != sys.n || d.cols() != sys.n)
            throw DimensionMismatchError("SymTensorSystem: dlambda shape");
        if ((d + d.transpose()).norm() > sys.tol.threshold(d.norm()))
            throw InvalidFormError("SymTensorSystem: dlambda not skew");
    }
    if (sys.p1.rows() != sys.n || sys.p1.cols() != sys.k_plus_1)
        throw DimensionMismatchError("SymTensorSystem: p1 shape");
    if (!sys.rhs_lambda || !sys.rhs_coupling)
        throw PreconditionError("SymTensorSystem: rhs providers missing");
}

// Row covector (i_{P1 e_a} dlambda^s) = (P1 e_a)^T dlambda^s.
Eigen::RowVectorXd contraction_row(const SymTensorSystem& sys, Index s, Index a) {
    return sys.p1.col(a).transpose() * sys.dlambdas[static_cast<std::size_t>(s)];
}

Vector checked_rhs(const Vector& v, Index p, const char* what) {
    if (v.size() != p) throw PreconditionError(std::string(what) + ": rhs size != p");
    for (Index i = 0; i < p; ++i)
        if (!std::isfinite(v(i)))
            throw PreconditionError(std::string(what) + ": rhs not finite");
    return v;
}

}  // namespace

MultiIndex MultiIndex::plus(Index a) const {
    MultiIndex out = *this;
    out.entries.insert(
        std::upper_bound(out.entries.begin(), out.entries.end(), a), a);
    return out;
}

MultiIndex MultiIndex::minus(Index a) const {
    MultiIndex out = *this;
    auto it = std::find(out.entries.begin(), out.entries.end(), a);
    if (it == out.entries.end())
        throw PreconditionError("MultiIndex::minus: entry not present");
    out.entries.erase(it);
    return out;
}

std::string MultiIndex::str() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < entries.size(); ++i)
        os << (i ? "," : "") << entries[i] + 1;
    os << ")";
    return os.str();
}

std::vector<MultiIndex> all_multi_indices(Index length, Index max_entry) {
    std::vector<MultiIndex> out;
    MultiIndex cur;
    cur.entries.assign(static_cast<std::size_t>(length), 0);
    auto rec = [&](auto&& self, Index pos, Index lo) -> void {
        if (pos == length) {
            out.push_back(cur);
            return;
        }
        for (Index v = lo; v <= max_entry; ++v) {
            cur.entries[static_cast<std::size_t>(pos)] = v;
            self(self, pos + 1, v);
        }
    };
    rec(rec, 0, 0);
    return out;  // recursion emits in lexicographic order by construction
}

bool fullrank_check(const SymTensorSystem& sys) {
    validate_system(sys);
    Matrix stacked(sys.p * (sys.k_plus_1 + 1), sys.n);
    stacked.topRows(sys.p) = sys.lambda;
    for (Index a = 0; a < sys.k_plus_1; ++a)
        for (Index s = 0; s < sys.p; ++s)
            stacked.row(sys.p + a * sys.p + s) = contraction_row(sys, s, a);
    return core::rank(stacked, sys.tol) == sys.p * (sys.k_plus_1 + 1);
}

SymTensor triangular_solve(const SymTensorSystem& sys) {
    validate_system(sys);
    if (!fullrank_check(sys))
        throw NotRegularError("triangular_solve: im(p1) is not Omega-regular");

    SymTensor q;
    auto read = [&](const MultiIndex& idx, const MultiIndex& current) -> const Vector& {
        if (!(idx < current))
            throw InternalInconsistencyError(
                "triangular_solve: step " + current.str() +
                " would read non-prior index " + idx.str());
        auto it = q.values.find(idx);
        if (it == q.values.end())
            throw InternalInconsistencyError(
                "triangular_solve: missing prior value " + idx.str());
        return it->second;
    };

    for (const MultiIndex& idx : all_multi_indices(sys.alpha + 2, sys.k_plus_1 - 1)) {
        // Rows constraining Q(d_idx): the lambda equations, plus every
        // coupling equation in which idx is the lexicographically larger
        // of the two tensor indices (idx = J + b, partner J + a with a < b).
        std::vector<Eigen::RowVectorXd> rows;
        std::vector<double> rhs;
        for (Index s = 0; s < sys.p; ++s) rows.emplace_back(sys.lambda.row(s));
        Vector rl = checked_rhs(sys.rhs_lambda(idx), sys.p, "rhs_lambda");
        for (Index s = 0; s < sys.p; ++s) rhs.push_back(rl(s));

        Index prev_b = -1;
        for (Index pos = 0; pos < idx.size(); ++pos) {
            Index b = idx.entries[static_cast<std::size_t>(pos)];
            if (b == prev_b) continue;  // one equation family per distinct entry
            prev_b = b;
            MultiIndex j = idx.minus(b);
            for (Index a = 0; a < b; ++a) {
                MultiIndex partner = j.plus(a);
                const Vector& known = read(partner, idx);
                Vector rc = checked_rhs(sys.rhs_coupling(j, a, b), sys.p,
                                        "rhs_coupling");
                for (Index s = 0; s < sys.p; ++s) {
                    rows.emplace_back(contraction_row(sys, s, a));
                    rhs.push_back(rc(s) + contraction_row(sys, s, b).dot(known));
                }
            }
        }

        Matrix a(static_cast<Index>(rows.size()), sys.n);
        Vector b(static_cast<Index>(rhs.size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            a.row(static_cast<Index>(r)) = rows[r];
            b(static_cast<Index>(r)) = rhs[r];
        }
        Vector x = a.completeOrthogonalDecomposition().solve(b);
        double res = (a * x - b).norm() / std::max(1.0, b.norm());
        if (res > 1e-9)
            throw NumericFailureError("triangular_solve: step " + idx.str() +
                                      " residual " + std::to_string(res));
        q.values[idx] = x;
    }
    return q;
}

DenseSystem assemble_dense(const SymTensorSystem& sys) {
    validate_system(sys);
    DenseSystem out;
    out.unknown_order = all_multi_indices(sys.alpha + 2, sys.k_plus_1 - 1);
    const Index blocks = static_cast<Index>(out.unknown_order.size());
    const Index unknowns = blocks * sys.n;
    if (unknowns > 5000)
        throw SizeError("assemble_dense: " + std::to_string(unknowns) +
                        " unknown scalars exceed the dense limit");

    std::map<MultiIndex, Index> offset;
    for (Index i = 0; i < blocks; ++i)
        offset[out.unknown_order[static_cast<std::size_t>(i)]] = i * sys.n;

    std::vector<MultiIndex> shorter = all_multi_indices(sys.alpha + 1, sys.k_plus_1 - 1);
    Index n_coupling = 0;
    for (Index b = 1; b < sys.k_plus_1; ++b) n_coupling += b;  // pairs a < b
    const Index n_rows =
        blocks * sys.p + static_cast<Index>(shorter.size()) * n_coupling * sys.p;
    out.a = Matrix::Zero(n_rows, unknowns);
    out.b = Vector::Zero(n_rows);

    Index row = 0;
    for (const MultiIndex& idx : out.unknown_order) {
        out.a.block(row, offset[idx], sys.p, sys.n) = sys.lambda;
        out.b.segment(row, sys.p) = checked_rhs(sys.rhs_lambda(idx), sys.p, "rhs_lambda");
        row += sys.p;
    }
    for (const MultiIndex& j : shorter) {
        for (Index b = 0; b < sys.k_plus_1; ++b) {
            for (Index a = 0; a < b; ++a) {
                Index col_b = offset[j.plus(b)];
                Index col_a = offset[j.plus(a)];
                for (Index s = 0; s < sys.p; ++s) {
                    out.a.block(row, col_b, 1, sys.n) += contraction_row(sys, s, a);
                    out.a.block(row, col_a, 1, sys.n) -= contraction_row(sys, s, b);
                    ++row;
                }
                out.b.segment(row - sys.p, sys.p) =
                    checked_rhs(sys.rhs_coupling(j, a, b), sys.p, "rhs_coupling");
            }
        }
    }
    return out;
}

double dense_residual(const SymTensorSystem& sys, const SymTensor& q) {
    DenseSystem d = assemble_dense(sys);
    Vector x(d.a.cols());
    Index off = 0;
    for (const MultiIndex& idx : d.unknown_order) {
        auto it = q.values.find(idx);
        if (it == q.values.end())
            throw PreconditionError("dense_residual: tensor missing index " + idx.str());
        x.segment(off, sys.n) = it->second;
        off += sys.n;
    }
    return (d.a * x - d.b).norm() / std::max(1.0, d.b.norm());
}

}  // namespace fatdist::jets
