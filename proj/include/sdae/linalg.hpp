#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace sdae {

// Samples are rows: a batch is (n_samples x n_features).
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;

// Non-deduced matrix parameter, so Eigen expressions bind when Scalar comes from another argument.
template <typename Scalar>
using MatrixArg = std::type_identity_t<MatrixX<Scalar>>;

/// Binary class labels, each 0 or 1.
using Labels = std::vector<int>;

class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Training produced non-finite values.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <typename Derived>
std::string shape_string(const Eigen::DenseBase<Derived>& m) {
    std::ostringstream out;
    out << m.rows() << "x" << m.cols();
    return out.str();
}

template <typename A, typename B>
void require_same_shape(const Eigen::DenseBase<A>& a, const Eigen::DenseBase<B>& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ShapeError(std::string(what) + ": shape mismatch " + shape_string(a) + " vs " + shape_string(b));
}

/// Matrix product with a fixed summation order (k innermost, ascending).
///
/// Eigen's blocked GEMM reorders the accumulation depending on the target
/// architecture; this loop does not, so results are bit-reproducible.
template <typename Scalar>
MatrixX<Scalar> matmul(const MatrixX<Scalar>& a, const MatrixX<Scalar>& b) {
    if (a.cols() != b.rows())
        throw ShapeError("matmul: cannot multiply " + shape_string(a) + " by " + shape_string(b));
    MatrixX<Scalar> out(a.rows(), b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            Scalar acc = 0;
            for (Eigen::Index k = 0; k < a.cols(); ++k)
                acc += a(i, k) * b(k, j);
            out(i, j) = acc;
        }
    }
    return out;
}

/// a * b^T, same fixed summation order as matmul.
template <typename Scalar>
MatrixX<Scalar> matmul_bt(const MatrixX<Scalar>& a, const MatrixX<Scalar>& b) {
    if (a.cols() != b.cols())
        throw ShapeError("matmul_bt: cannot multiply " + shape_string(a) + " by transpose of " + shape_string(b));
    MatrixX<Scalar> out(a.rows(), b.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < b.rows(); ++j) {
            Scalar acc = 0;
            for (Eigen::Index k = 0; k < a.cols(); ++k)
                acc += a(i, k) * b(j, k);
            out(i, j) = acc;
        }
    }
    return out;
}

/// a^T * b, accumulating over rows in ascending order.
template <typename Scalar>
MatrixX<Scalar> matmul_at(const MatrixX<Scalar>& a, const MatrixX<Scalar>& b) {
    if (a.rows() != b.rows())
        throw ShapeError("matmul_at: cannot multiply transpose of " + shape_string(a) + " by " + shape_string(b));
    MatrixX<Scalar> out(a.cols(), b.cols());
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            Scalar acc = 0;
            for (Eigen::Index k = 0; k < a.rows(); ++k)
                acc += a(k, i) * b(k, j);
            out(i, j) = acc;
        }
    }
    return out;
}

template <typename Scalar>
Scalar sigmoid(Scalar x) {
    // Split on sign so exp never overflows.
    if (x >= 0) {
        return Scalar(1) / (Scalar(1) + std::exp(-x));
    }
    const Scalar e = std::exp(x);
    return e / (Scalar(1) + e);
}

template <typename Scalar>
MatrixX<Scalar> sigmoid(const MatrixX<Scalar>& m) {
    return m.unaryExpr([](Scalar v) { return sigmoid(v); });
}

/// Adds `bias` to every row of `m`.
template <typename Scalar>
void add_row_bias(MatrixX<Scalar>& m, const VectorX<Scalar>& bias) {
    if (m.cols() != bias.size())
        throw ShapeError("bias of length " + std::to_string(bias.size()) + " does not fit " + shape_string(m));
    m.rowwise() += bias.transpose();
}

/// Column sums accumulated top to bottom.
template <typename Scalar>
VectorX<Scalar> column_sums(const MatrixX<Scalar>& m) {
    VectorX<Scalar> out = VectorX<Scalar>::Zero(m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out(j) += m(i, j);
    return out;
}

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& m) {
    return m.derived().array().isFinite().all();
}

/// Rows of `m` selected by `indices`, in order.
template <typename Scalar, typename IndexRange>
MatrixX<Scalar> gather_rows(const MatrixX<Scalar>& m, const IndexRange& indices) {
    MatrixX<Scalar> out(static_cast<Eigen::Index>(std::size(indices)), m.cols());
    Eigen::Index r = 0;
    for (auto idx : indices)
        out.row(r++) = m.row(static_cast<Eigen::Index>(idx));
    return out;
}

}  // namespace sdae
