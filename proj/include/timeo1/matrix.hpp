#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace timeo1 {

/// Shape or size mismatch between operands.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Invalid user-facing configuration value (ranges, ratios, flags).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Numeric breakdown: non-finite values, failed iterations.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Matrix is not positive definite (even after jitter).
struct FactorizationError : NumericError {
    using NumericError::NumericError;
};

/// Malformed input data (CSV parsing, file IO).
struct IngestionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Statistical estimation is ill-posed (too few samples).
struct EstimationError : NumericError {
    using NumericError::NumericError;
};

/// Training diverged or could not proceed.
struct TrainingError : NumericError {
    using NumericError::NumericError;
};

/// Standard deviations below this are floored to keep standardization finite.
inline constexpr double kStdFloor = 1e-8;

/// Singular values below this fraction of the largest are treated as zero.
inline constexpr double kRankTolerance = 1e-12;

/// Dense row-major matrix of doubles. Data-carrying constructors reject
/// non-finite entries; shape is immutable after construction.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_)
            throw DimensionError("Matrix: data length " + std::to_string(data_.size()) +
                                 " does not match " + std::to_string(rows_) + "x" +
                                 std::to_string(cols_));
        for (double v : data_)
            if (!std::isfinite(v)) throw NumericError("Matrix: non-finite entry");
    }

    Matrix(std::initializer_list<std::initializer_list<double>> rows_init) {
        rows_ = rows_init.size();
        cols_ = rows_ == 0 ? 0 : rows_init.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows_init) {
            if (r.size() != cols_) throw DimensionError("Matrix: ragged initializer");
            for (double v : r) {
                if (!std::isfinite(v)) throw NumericError("Matrix: non-finite entry");
                data_.push_back(v);
            }
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }
    const double* row_ptr(std::size_t r) const { return data_.data() + r * cols_; }
    double* row_ptr(std::size_t r) { return data_.data() + r * cols_; }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (double v : data_) s += v * v;
        return std::sqrt(s);
    }

    Matrix column(std::size_t c) const {
        Matrix out(rows_, 1);
        for (std::size_t r = 0; r < rows_; ++r) out(r, 0) = (*this)(r, c);
        return out;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Per-column mean and (floored) population standard deviation.
struct ColumnStats {
    std::vector<double> means;
    std::vector<double> stds;

    std::size_t cols() const { return means.size(); }
};

inline Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = a(r, c);
    return out;
}

/// C = A * B. Loop order keeps the inner stride unit-length for row-major data.
inline Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw DimensionError("matmul: inner dimensions " + std::to_string(a.cols()) + " vs " +
                             std::to_string(b.rows()));
    Matrix c(a.rows(), b.cols());
    const std::size_t n = b.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* ci = c.row_ptr(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const double* bk = b.row_ptr(k);
            for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

/// C = A^T * B without materializing the transpose.
inline Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows())
        throw DimensionError("matmul_at_b: row counts " + std::to_string(a.rows()) + " vs " +
                             std::to_string(b.rows()));
    Matrix c(a.cols(), b.cols());
    const std::size_t n = b.cols();
    for (std::size_t k = 0; k < a.rows(); ++k) {
        const double* ak = a.row_ptr(k);
        const double* bk = b.row_ptr(k);
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const double aki = ak[i];
            if (aki == 0.0) continue;
            double* ci = c.row_ptr(i);
            for (std::size_t j = 0; j < n; ++j) ci[j] += aki * bk[j];
        }
    }
    return c;
}

/// C = A * B^T.
inline Matrix matmul_a_bt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols())
        throw DimensionError("matmul_a_bt: column counts " + std::to_string(a.cols()) + " vs " +
                             std::to_string(b.cols()));
    Matrix c(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* ai = a.row_ptr(i);
        for (std::size_t j = 0; j < b.rows(); ++j) {
            const double* bj = b.row_ptr(j);
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += ai[k] * bj[k];
            c(i, j) = s;
        }
    }
    return c;
}

/// G = A^T A, accumulated row-by-row over the upper triangle then mirrored.
inline Matrix gram(const Matrix& a) {
    const std::size_t n = a.cols();
    Matrix g(n, n);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        const double* ar = a.row_ptr(r);
        for (std::size_t i = 0; i < n; ++i) {
            const double ari = ar[i];
            if (ari == 0.0) continue;
            double* gi = g.row_ptr(i);
            for (std::size_t j = i; j < n; ++j) gi[j] += ari * ar[j];
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
    return g;
}

/// Column means and population standard deviations, floored at kStdFloor.
inline ColumnStats fit_stats(const Matrix& m) {
    if (m.rows() < 2) throw DimensionError("fit_stats: need at least 2 rows");
    const std::size_t n = m.cols();
    ColumnStats s;
    s.means.assign(n, 0.0);
    s.stds.assign(n, 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const double* mr = m.row_ptr(r);
        for (std::size_t c = 0; c < n; ++c) s.means[c] += mr[c];
    }
    for (double& v : s.means) v /= static_cast<double>(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const double* mr = m.row_ptr(r);
        for (std::size_t c = 0; c < n; ++c) {
            const double d = mr[c] - s.means[c];
            s.stds[c] += d * d;
        }
    }
    for (double& v : s.stds) v = std::max(std::sqrt(v / static_cast<double>(m.rows())), kStdFloor);
    return s;
}

/// Entry-wise (x - mean_j) / std_j.
inline Matrix standardize(const Matrix& m, const ColumnStats& stats) {
    if (stats.cols() != m.cols())
        throw DimensionError("standardize: stats fitted on " + std::to_string(stats.cols()) +
                             " columns, matrix has " + std::to_string(m.cols()));
    Matrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const double* src = m.row_ptr(r);
        double* dst = out.row_ptr(r);
        for (std::size_t c = 0; c < m.cols(); ++c)
            dst[c] = (src[c] - stats.means[c]) / stats.stds[c];
    }
    return out;
}

/// Inverse of standardize: x * std_j + mean_j.
inline Matrix destandardize(const Matrix& m, const ColumnStats& stats) {
    if (stats.cols() != m.cols())
        throw DimensionError("destandardize: stats column count mismatch");
    Matrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            out(r, c) = m(r, c) * stats.stds[c] + stats.means[c];
    return out;
}

/// Symmetric eigendecomposition result, eigenvalues descending.
struct EighResult {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;  // columns, orthonormal
};

/// Cyclic Jacobi rotations on a symmetric matrix. Converges when the
/// off-diagonal Frobenius mass falls below tol * initial norm.
inline EighResult jacobi_eigh(const Matrix& sym, int max_sweeps = 64, double tol = 1e-14) {
    if (sym.rows() != sym.cols()) throw DimensionError("jacobi_eigh: matrix not square");
    const std::size_t n = sym.rows();
    Matrix a = sym;
    Matrix v = Matrix::identity(n);

    auto off_norm = [&a, n]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
        return std::sqrt(2.0 * s);
    };

    const double stop = tol * std::max(a.frobenius_norm(), 1e-300);
    for (int sweep = 0; sweep < max_sweeps && off_norm() > stop; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                // smaller root of t^2 + 2*tau*t - 1 = 0 keeps rotations small
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i);
    std::stable_sort(order.begin(), order.end(),
                     [&diag](std::size_t x, std::size_t y) { return diag[x] > diag[y]; });

    EighResult out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = diag[order[j]];
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
    }
    return out;
}

/// Thin SVD result. right_vectors always carries all cols(m) columns (trailing
/// singular values are zero when rows < cols); left_vectors is present only
/// when requested, with zero columns where sigma is below the rank tolerance.
struct SvdResult {
    std::vector<double> singular_values;  // descending, >= 0
    Matrix right_vectors;                 // n x n, orthonormal columns
    Matrix left_vectors;                  // m x n when requested, else empty
    bool has_left = false;
};

/// SVD via symmetric eigendecomposition of the Gram matrix m^T m.
/// Each right vector is sign-fixed so its largest-magnitude entry is positive
/// (ties broken by lowest index).
inline SvdResult svd(const Matrix& m, bool want_left = false) {
    if (m.rows() == 0 || m.cols() == 0) throw DimensionError("svd: empty matrix");
    if (!m.all_finite()) throw NumericError("svd: non-finite input");

    const std::size_t n = m.cols();
    EighResult eig = jacobi_eigh(gram(m));

    SvdResult out;
    out.singular_values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.singular_values[i] = std::sqrt(std::max(eig.eigenvalues[i], 0.0));
    out.right_vectors = std::move(eig.eigenvectors);

    for (std::size_t j = 0; j < n; ++j) {
        std::size_t arg = 0;
        double best = std::abs(out.right_vectors(0, j));
        for (std::size_t i = 1; i < n; ++i) {
            const double a = std::abs(out.right_vectors(i, j));
            if (a > best) {
                best = a;
                arg = i;
            }
        }
        if (out.right_vectors(arg, j) < 0.0)
            for (std::size_t i = 0; i < n; ++i) out.right_vectors(i, j) = -out.right_vectors(i, j);
    }

    if (want_left) {
        out.has_left = true;
        out.left_vectors = Matrix(m.rows(), n);
        const double sigma_max = out.singular_values.empty() ? 0.0 : out.singular_values[0];
        for (std::size_t j = 0; j < n; ++j) {
            const double sigma = out.singular_values[j];
            if (sigma <= kRankTolerance * sigma_max || sigma == 0.0) continue;
            for (std::size_t r = 0; r < m.rows(); ++r) {
                const double* mr = m.row_ptr(r);
                double s = 0.0;
                for (std::size_t k = 0; k < n; ++k) s += mr[k] * out.right_vectors(k, j);
                out.left_vectors(r, j) = s / sigma;
            }
        }
    }
    return out;
}

namespace detail {

// Lower Cholesky factor; empty optional when a pivot is not strictly positive.
inline bool try_cholesky(const Matrix& a, Matrix& l) {
    const std::size_t n = a.rows();
    l = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (!(s > 0.0) || !std::isfinite(s)) return false;
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return true;
}

// Factor as-is first; on failure add one diagonal jitter of 1e-10 * trace/n
// and try once more. No further escalation.
inline Matrix cholesky_with_jitter(const Matrix& spd, const char* who) {
    if (spd.rows() != spd.cols()) throw DimensionError(std::string(who) + ": matrix not square");
    if (!spd.all_finite()) throw NumericError(std::string(who) + ": non-finite input");
    Matrix l;
    if (try_cholesky(spd, l)) return l;
    double trace = 0.0;
    for (std::size_t i = 0; i < spd.rows(); ++i) trace += spd(i, i);
    const double jitter = 1e-10 * trace / static_cast<double>(spd.rows());
    Matrix jittered = spd;
    for (std::size_t i = 0; i < spd.rows(); ++i) jittered(i, i) += jitter;
    if (try_cholesky(jittered, l)) return l;
    throw FactorizationError(std::string(who) + ": matrix not positive definite after jitter");
}

}  // namespace detail

/// Solve spd * x = rhs (multiple right-hand sides) via Cholesky.
inline Matrix cholesky_solve(const Matrix& spd, const Matrix& rhs) {
    if (spd.rows() != rhs.rows())
        throw DimensionError("cholesky_solve: rhs has " + std::to_string(rhs.rows()) +
                             " rows, expected " + std::to_string(spd.rows()));
    const Matrix l = detail::cholesky_with_jitter(spd, "cholesky_solve");
    const std::size_t n = spd.rows();
    Matrix x = rhs;
    // forward substitution L y = rhs
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < rhs.cols(); ++c) {
            double s = x(i, c);
            for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x(k, c);
            x(i, c) = s / l(i, i);
        }
    }
    // back substitution L^T x = y
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t c = 0; c < rhs.cols(); ++c) {
            double s = x(ii, c);
            for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x(k, c);
            x(ii, c) = s / l(ii, ii);
        }
    }
    return x;
}

/// log|A| for symmetric positive definite A, as 2 * sum(log(diag(L))).
inline double log_det_spd(const Matrix& spd) {
    const Matrix l = detail::cholesky_with_jitter(spd, "log_det_spd");
    double s = 0.0;
    for (std::size_t i = 0; i < spd.rows(); ++i) s += std::log(l(i, i));
    return 2.0 * s;
}

}  // namespace timeo1
