#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "timeo1/matrix.hpp"
#include "timeo1/projection.hpp"

namespace timeo1 {

/// Fusion weight alpha in [0, 1], involution ratio gamma in (0, 1], and the
/// derived retained-component count k = round(gamma * T).
struct LossConfig {
    double alpha;
    double gamma;
    std::size_t k;

    LossConfig(double alpha_, double gamma_, std::size_t horizon)
        : alpha(alpha_), gamma(gamma_), k(truncation_k(gamma_, horizon)) {
        if (!(alpha_ >= 0.0) || alpha_ > 1.0)
            throw ConfigError("LossConfig: alpha must be in [0, 1], got " +
                              std::to_string(alpha_));
    }
};

/// total = alpha * component_part + (1 - alpha) * tmse_part.
struct LossValue {
    double total;
    double tmse_part;
    double component_part;
};

namespace detail {

inline void require_same_shape(const Matrix& yhat, const Matrix& y, const char* who) {
    if (yhat.rows() != y.rows() || yhat.cols() != y.cols())
        throw DimensionError(std::string(who) + ": forecast is " + std::to_string(yhat.rows()) +
                             "x" + std::to_string(yhat.cols()) + ", label is " +
                             std::to_string(y.rows()) + "x" + std::to_string(y.cols()));
    if (y.rows() == 0 || y.cols() == 0)
        throw DimensionError(std::string(who) + ": empty input");
}

inline double sign_or_zero(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace detail

/// Entry-mean squared error between forecast and label sequences.
inline double tmse(const Matrix& yhat, const Matrix& y) {
    detail::require_same_shape(yhat, y, "tmse");
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y.data()[i] - yhat.data()[i];
        s += d * d;
    }
    return s / static_cast<double>(y.size());
}

/// Entry-mean L1 distance between the first k projected components of the
/// forecast and label sequences.
inline double component_loss(const Matrix& yhat, const Matrix& y, const ProjectionBasis& basis,
                             std::size_t k) {
    detail::require_same_shape(yhat, y, "component_loss");
    ComponentMatrix z = transform(basis, y, k);
    ComponentMatrix zhat = transform(basis, yhat, k);
    double s = 0.0;
    for (std::size_t i = 0; i < z.z.size(); ++i) s += std::abs(zhat.z.data()[i] - z.z.data()[i]);
    return s / static_cast<double>(z.z.size());
}

/// Fused objective. alpha = 0 reduces bit-for-bit to tmse; alpha = 1 uses only
/// the component loss. Inputs are expected in standardized space.
inline LossValue timeo1_loss(const Matrix& yhat, const Matrix& y, const ProjectionBasis& basis,
                             const LossConfig& cfg) {
    const double t = tmse(yhat, y);
    const double c = component_loss(yhat, y, basis, cfg.k);
    return LossValue{cfg.alpha * c + (1.0 - cfg.alpha) * t, t, c};
}

/// d total / d yhat:
///   (1-alpha) * 2/(mT) * (yhat - y) + alpha / (mK) * sign(Zhat - Z) P_K^T
/// with sign(0) := 0.
inline Matrix timeo1_grad(const Matrix& yhat, const Matrix& y, const ProjectionBasis& basis,
                          const LossConfig& cfg) {
    detail::require_same_shape(yhat, y, "timeo1_grad");
    const std::size_t m = y.rows();
    const std::size_t t = y.cols();
    Matrix g(m, t);

    if (cfg.alpha != 1.0) {
        const double w = (1.0 - cfg.alpha) * 2.0 / static_cast<double>(m * t);
        for (std::size_t i = 0; i < g.size(); ++i)
            g.data()[i] = w * (yhat.data()[i] - y.data()[i]);
    }
    if (cfg.alpha != 0.0) {
        ComponentMatrix z = transform(basis, y, cfg.k);
        ComponentMatrix zhat = transform(basis, yhat, cfg.k);
        const double w = cfg.alpha / static_cast<double>(m * cfg.k);
        for (std::size_t r = 0; r < m; ++r) {
            double* gr = g.row_ptr(r);
            for (std::size_t j = 0; j < cfg.k; ++j) {
                const double s = detail::sign_or_zero(zhat.z(r, j) - z.z(r, j));
                if (s == 0.0) continue;
                const double ws = w * s;
                for (std::size_t col = 0; col < t; ++col) gr[col] += ws * basis.p_star(col, j);
            }
        }
    }
    return g;
}

/// Smallest |zhat - z| entry over the first k components; used to keep
/// gradient checks away from the L1 kinks.
inline double min_component_gap(const Matrix& yhat, const Matrix& y, const ProjectionBasis& basis,
                                std::size_t k) {
    ComponentMatrix z = transform(basis, y, k);
    ComponentMatrix zhat = transform(basis, yhat, k);
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < z.z.size(); ++i)
        gap = std::min(gap, std::abs(zhat.z.data()[i] - z.z.data()[i]));
    return gap;
}

namespace detail {

// Unnormalized DFT of a real row, O(T^2) direct evaluation.
inline void dft_row(const double* x, std::size_t n, std::vector<double>& re,
                    std::vector<double>& im) {
    re.assign(n, 0.0);
    im.assign(n, 0.0);
    const double step = -2.0 * M_PI / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t t = 0; t < n; ++t) {
            const double angle = step * static_cast<double>(k * t % n);
            re[k] += x[t] * std::cos(angle);
            im[k] += x[t] * std::sin(angle);
        }
    }
}

}  // namespace detail

/// Frequency-domain baseline: mean L1 distance between the DFT coefficients
/// (real and imaginary parts) of each forecast and label row. The transform is
/// unnormalized; the mean runs over all m * 2T coefficient parts.
inline double fourier_loss(const Matrix& yhat, const Matrix& y) {
    detail::require_same_shape(yhat, y, "fourier_loss");
    const std::size_t n = y.cols();
    std::vector<double> re_h, im_h, re_y, im_y;
    double s = 0.0;
    for (std::size_t r = 0; r < y.rows(); ++r) {
        detail::dft_row(yhat.row_ptr(r), n, re_h, im_h);
        detail::dft_row(y.row_ptr(r), n, re_y, im_y);
        for (std::size_t k = 0; k < n; ++k)
            s += std::abs(re_h[k] - re_y[k]) + std::abs(im_h[k] - im_y[k]);
    }
    return s / static_cast<double>(y.rows() * 2 * n);
}

/// d fourier_loss / d yhat. The DFT is linear in the row, so the gradient is a
/// signed sum of cosine and sine atoms per coefficient.
inline Matrix fourier_grad(const Matrix& yhat, const Matrix& y) {
    detail::require_same_shape(yhat, y, "fourier_grad");
    const std::size_t n = y.cols();
    const double w = 1.0 / static_cast<double>(y.rows() * 2 * n);
    const double step = -2.0 * M_PI / static_cast<double>(n);
    Matrix g(y.rows(), n);
    std::vector<double> re_h, im_h, re_y, im_y;
    for (std::size_t r = 0; r < y.rows(); ++r) {
        detail::dft_row(yhat.row_ptr(r), n, re_h, im_h);
        detail::dft_row(y.row_ptr(r), n, re_y, im_y);
        double* gr = g.row_ptr(r);
        for (std::size_t k = 0; k < n; ++k) {
            const double sr = detail::sign_or_zero(re_h[k] - re_y[k]);
            const double si = detail::sign_or_zero(im_h[k] - im_y[k]);
            if (sr == 0.0 && si == 0.0) continue;
            for (std::size_t t = 0; t < n; ++t) {
                const double angle = step * static_cast<double>(k * t % n);
                gr[t] += w * (sr * std::cos(angle) + si * std::sin(angle));
            }
        }
    }
    return g;
}

/// Smallest |coefficient difference| across rows and DFT parts; the Fourier
/// analogue of min_component_gap. The DC and Nyquist imaginary parts are
/// identically zero for real input (no kink there) and are skipped.
inline double min_fourier_gap(const Matrix& yhat, const Matrix& y) {
    const std::size_t n = y.cols();
    std::vector<double> re_h, im_h, re_y, im_y;
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < y.rows(); ++r) {
        detail::dft_row(yhat.row_ptr(r), n, re_h, im_h);
        detail::dft_row(y.row_ptr(r), n, re_y, im_y);
        for (std::size_t k = 0; k < n; ++k) {
            gap = std::min(gap, std::abs(re_h[k] - re_y[k]));
            const bool structurally_zero = (k == 0) || (n % 2 == 0 && k == n / 2);
            if (!structurally_zero) gap = std::min(gap, std::abs(im_h[k] - im_y[k]));
        }
    }
    return gap;
}

/// Gap between the sequence-likelihood quadratic form and the plain squared
/// error for one residual vector:
///   v^T Sigma^-1 v - v^T v - 0.5 * log|Sigma|.
/// Vanishes when the steps are decorrelated (Sigma = I).
inline double autocorrelation_bias(const std::vector<double>& residual, const Matrix& sigma) {
    const std::size_t t = residual.size();
    if (sigma.rows() != t || sigma.cols() != t)
        throw DimensionError("autocorrelation_bias: sigma must be TxT for a length-T residual");
    Matrix v(t, 1, residual);
    Matrix x = cholesky_solve(sigma, v);
    double quad = 0.0, plain = 0.0;
    for (std::size_t i = 0; i < t; ++i) {
        quad += residual[i] * x(i, 0);
        plain += residual[i] * residual[i];
    }
    return quad - plain - 0.5 * log_det_spd(sigma);
}

}  // namespace timeo1
