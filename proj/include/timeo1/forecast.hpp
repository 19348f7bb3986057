#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "timeo1/data.hpp"
#include "timeo1/io.hpp"
#include "timeo1/matrix.hpp"
#include "timeo1/objective.hpp"
#include "timeo1/projection.hpp"

namespace timeo1 {

/// Channel-independent linear direct forecaster: y_hat[:, d] = W^T x[:, d] + b.
/// One weight matrix is shared across variates by default; per-variate weights
/// keep one (W, b) pair per variate.
struct LinearForecaster {
    std::size_t lookback = 0;
    std::size_t horizon = 0;
    bool per_variate = false;
    std::vector<Matrix> weights;               // each lookback x horizon
    std::vector<std::vector<double>> biases;   // each length horizon

    static LinearForecaster make(std::size_t lookback, std::size_t horizon,
                                 std::size_t variates = 1, bool per_variate = false) {
        LinearForecaster m;
        m.lookback = lookback;
        m.horizon = horizon;
        m.per_variate = per_variate;
        const std::size_t sets = per_variate ? variates : 1;
        m.weights.assign(sets, Matrix(lookback, horizon));
        m.biases.assign(sets, std::vector<double>(horizon, 0.0));
        return m;
    }

    bool all_finite() const {
        for (const Matrix& w : weights)
            if (!w.all_finite()) return false;
        for (const auto& b : biases)
            for (double v : b)
                if (!std::isfinite(v)) return false;
        return true;
    }
};

/// Forecast one window: H x D in, T x D out.
inline Matrix forecast(const LinearForecaster& model, const Matrix& window) {
    if (window.rows() != model.lookback)
        throw DimensionError("forecast: window has " + std::to_string(window.rows()) +
                             " rows, model lookback is " + std::to_string(model.lookback));
    if (model.per_variate && window.cols() != model.weights.size())
        throw DimensionError("forecast: per-variate model expects " +
                             std::to_string(model.weights.size()) + " variates");
    Matrix out(model.horizon, window.cols());
    for (std::size_t d = 0; d < window.cols(); ++d) {
        const Matrix& w = model.weights[model.per_variate ? d : 0];
        const auto& b = model.biases[model.per_variate ? d : 0];
        for (std::size_t t = 0; t < model.horizon; ++t) {
            double s = b[t];
            for (std::size_t h = 0; h < model.lookback; ++h) s += w(h, t) * window(h, d);
            out(t, d) = s;
        }
    }
    return out;
}

enum class LossKind { Tmse, Timeo1, Fourier };

inline const char* to_string(LossKind k) {
    switch (k) {
        case LossKind::Tmse: return "tmse";
        case LossKind::Timeo1: return "timeo1";
        case LossKind::Fourier: return "fourier";
    }
    return "?";
}

inline LossKind loss_kind_from_string(const std::string& s) {
    if (s == "tmse") return LossKind::Tmse;
    if (s == "timeo1") return LossKind::Timeo1;
    if (s == "fourier") return LossKind::Fourier;
    throw ConfigError("unknown loss: " + s);
}

struct TrainConfig {
    double learning_rate = 1e-3;
    std::size_t epochs = 50;
    std::size_t batch_size = 64;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    std::uint64_t seed = 42;
    LossKind loss = LossKind::Timeo1;
    double alpha = 0.7;
    double gamma = 0.7;
    std::size_t patience = 10;
    bool per_variate_weights = false;

    void validate() const {
        if (!(learning_rate > 0.0)) throw ConfigError("TrainConfig: learning rate must be > 0");
        if (epochs == 0 || batch_size == 0 || patience == 0)
            throw ConfigError("TrainConfig: epochs, batch size and patience must be positive");
        if (!(beta1 > 0.0 && beta1 < 1.0 && beta2 > 0.0 && beta2 < 1.0 && adam_eps > 0.0))
            throw ConfigError("TrainConfig: invalid Adam parameters");
    }
};

struct EvalMetrics {
    double mse_std = 0.0;
    double mae_std = 0.0;
    double mse_orig = 0.0;
    double mae_orig = 0.0;
};

struct TrainReport {
    std::vector<double> train_loss;  // per epoch, mean over batches
    std::vector<double> val_mse;     // per epoch, standardized
    std::size_t best_epoch = 0;      // 1-based
    EvalMetrics test;
    double wall_seconds = 0.0;
    std::size_t adam_steps = 0;
};

/// Entry-mean squared and absolute error over every window of the split, in
/// standardized and original scale.
inline EvalMetrics evaluate(const LinearForecaster& model, const WindowedDataset& ds, Split s) {
    const std::size_t count = ds.window_count(s);
    if (count == 0) throw DimensionError("evaluate: empty split");
    const ColumnStats& stats = ds.stats();
    EvalMetrics m;
    double n = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        Matrix yhat = forecast(model, ds.input_window(s, i));
        Matrix y = ds.label_window(s, i);
        for (std::size_t t = 0; t < y.rows(); ++t)
            for (std::size_t d = 0; d < y.cols(); ++d) {
                const double e = yhat(t, d) - y(t, d);
                const double eo = e * stats.stds[d];
                m.mse_std += e * e;
                m.mae_std += std::abs(e);
                m.mse_orig += eo * eo;
                m.mae_orig += std::abs(eo);
                n += 1.0;
            }
    }
    m.mse_std /= n;
    m.mae_std /= n;
    m.mse_orig /= n;
    m.mae_orig /= n;
    return m;
}

/// A materialized mini-batch: aligned input and label windows.
struct Batch {
    std::vector<Matrix> inputs;  // each H x D
    std::vector<Matrix> labels;  // each T x D
};

inline Batch make_batch(const WindowedDataset& ds, Split s,
                        const std::vector<std::size_t>& indices) {
    Batch b;
    b.inputs.reserve(indices.size());
    b.labels.reserve(indices.size());
    for (std::size_t i : indices) {
        b.inputs.push_back(ds.input_window(s, i));
        b.labels.push_back(ds.label_window(s, i));
    }
    return b;
}

namespace detail {

// Pooled forecast/label rows in window-major, variate-minor order.
inline void stack_rows(const std::vector<Matrix>& mats, Matrix& out) {
    const std::size_t d = mats.empty() ? 0 : mats[0].cols();
    for (std::size_t b = 0; b < mats.size(); ++b)
        for (std::size_t c = 0; c < d; ++c) {
            double* row = out.row_ptr(b * d + c);
            for (std::size_t t = 0; t < mats[b].rows(); ++t) row[t] = mats[b](t, c);
        }
}

struct LossEval {
    LossValue value;
    Matrix grad;  // d total / d yhat rows
};

// Loss and gradient on pooled rows. Per-variate projection bases are applied
// block-wise (rows of one variate form a block); losses average over blocks,
// which matches the pooled entry-mean when block sizes are equal.
inline LossEval eval_loss(const Matrix& yhat, const Matrix& y, LossKind kind,
                          const LossConfig& cfg, const std::vector<ProjectionBasis>& bases,
                          std::size_t variates, bool want_grad) {
    LossEval out{LossValue{0.0, 0.0, 0.0}, Matrix()};
    switch (kind) {
        case LossKind::Tmse: {
            const double t = tmse(yhat, y);
            out.value = LossValue{t, t, 0.0};
            if (want_grad) {
                out.grad = Matrix(y.rows(), y.cols());
                const double w = 2.0 / static_cast<double>(y.size());
                for (std::size_t i = 0; i < y.size(); ++i)
                    out.grad.data()[i] = w * (yhat.data()[i] - y.data()[i]);
            }
            return out;
        }
        case LossKind::Fourier: {
            const double t = tmse(yhat, y);
            const double f = fourier_loss(yhat, y);
            out.value = LossValue{cfg.alpha * f + (1.0 - cfg.alpha) * t, t, f};
            if (want_grad) {
                out.grad = Matrix(y.rows(), y.cols());
                if (cfg.alpha != 1.0) {
                    const double w = (1.0 - cfg.alpha) * 2.0 / static_cast<double>(y.size());
                    for (std::size_t i = 0; i < y.size(); ++i)
                        out.grad.data()[i] = w * (yhat.data()[i] - y.data()[i]);
                }
                if (cfg.alpha != 0.0) {
                    Matrix fg = fourier_grad(yhat, y);
                    for (std::size_t i = 0; i < y.size(); ++i)
                        out.grad.data()[i] += cfg.alpha * fg.data()[i];
                }
            }
            return out;
        }
        case LossKind::Timeo1: break;
    }

    if (bases.empty()) throw ConfigError("timeo1 loss needs a fitted projection basis");
    if (bases.size() == 1) {
        out.value = timeo1_loss(yhat, y, bases[0], cfg);
        if (want_grad) out.grad = timeo1_grad(yhat, y, bases[0], cfg);
        return out;
    }
    if (bases.size() != variates)
        throw DimensionError("per-variate bases count does not match variates");
    const std::size_t rows_per_block = y.rows() / variates;
    if (want_grad) out.grad = Matrix(y.rows(), y.cols());
    const double block_weight = 1.0 / static_cast<double>(variates);
    for (std::size_t d = 0; d < variates; ++d) {
        Matrix yb(rows_per_block, y.cols());
        Matrix hb(rows_per_block, y.cols());
        for (std::size_t r = 0; r < rows_per_block; ++r)
            for (std::size_t c = 0; c < y.cols(); ++c) {
                yb(r, c) = y(r * variates + d, c);
                hb(r, c) = yhat(r * variates + d, c);
            }
        LossValue v = timeo1_loss(hb, yb, bases[d], cfg);
        out.value.total += block_weight * v.total;
        out.value.tmse_part += block_weight * v.tmse_part;
        out.value.component_part += block_weight * v.component_part;
        if (want_grad) {
            Matrix g = timeo1_grad(hb, yb, bases[d], cfg);
            for (std::size_t r = 0; r < rows_per_block; ++r)
                for (std::size_t c = 0; c < y.cols(); ++c)
                    out.grad(r * variates + d, c) = block_weight * g(r, c);
        }
    }
    return out;
}

struct ParamGrads {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
};

// Backprop of pooled-row gradients through the linear map:
// dL/dW[h, t] += x[h, d] * G[row(b, d), t], dL/db[t] += G[row(b, d), t].
inline ParamGrads backprop(const LinearForecaster& model, const Batch& batch, const Matrix& g) {
    ParamGrads grads;
    grads.weights.assign(model.weights.size(), Matrix(model.lookback, model.horizon));
    grads.biases.assign(model.biases.size(), std::vector<double>(model.horizon, 0.0));
    const std::size_t d = batch.inputs.empty() ? 0 : batch.inputs[0].cols();
    for (std::size_t b = 0; b < batch.inputs.size(); ++b) {
        const Matrix& x = batch.inputs[b];
        for (std::size_t c = 0; c < d; ++c) {
            const std::size_t set = model.per_variate ? c : 0;
            const double* grow = g.row_ptr(b * d + c);
            Matrix& wg = grads.weights[set];
            for (std::size_t h = 0; h < model.lookback; ++h) {
                const double xv = x(h, c);
                if (xv == 0.0) continue;
                double* wrow = wg.row_ptr(h);
                for (std::size_t t = 0; t < model.horizon; ++t) wrow[t] += xv * grow[t];
            }
            auto& bg = grads.biases[set];
            for (std::size_t t = 0; t < model.horizon; ++t) bg[t] += grow[t];
        }
    }
    return grads;
}

inline Matrix batch_forecast_rows(const LinearForecaster& model, const Batch& batch) {
    const std::size_t d = batch.inputs.empty() ? 0 : batch.inputs[0].cols();
    Matrix rows(batch.inputs.size() * d, model.horizon);
    for (std::size_t b = 0; b < batch.inputs.size(); ++b) {
        Matrix yhat = forecast(model, batch.inputs[b]);
        for (std::size_t c = 0; c < d; ++c) {
            double* row = rows.row_ptr(b * d + c);
            for (std::size_t t = 0; t < model.horizon; ++t) row[t] = yhat(t, c);
        }
    }
    return rows;
}

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

inline void adam_update(double* params, const double* grads, AdamState& state, std::size_t n,
                        const TrainConfig& cfg, std::size_t step) {
    const double b1t = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
    const double b2t = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
    for (std::size_t i = 0; i < n; ++i) {
        state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * grads[i];
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grads[i] * grads[i];
        const double mhat = state.m[i] / b1t;
        const double vhat = state.v[i] / b2t;
        params[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.adam_eps);
    }
}

// Fisher-Yates with explicit draws so the permutation does not depend on the
// standard library's shuffle implementation.
inline void deterministic_shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace detail

/// Mini-batch Adam on the selected objective. Deterministic per seed (fixed
/// shuffling, fixed batch order, trailing short batch included). Early stops
/// on validation MSE; the reported test metrics use the best-epoch weights.
inline TrainReport train(LinearForecaster& model, const WindowedDataset& ds,
                         const std::vector<ProjectionBasis>& bases, const TrainConfig& cfg) {
    cfg.validate();
    if (ds.lookback() != model.lookback || ds.horizon() != model.horizon)
        throw DimensionError("train: model window sizes do not match the dataset");
    if (cfg.loss == LossKind::Timeo1)
        for (const ProjectionBasis& b : bases)
            if (b.horizon != ds.horizon())
                throw DimensionError("train: basis horizon does not match dataset horizon");
    const std::size_t train_count = ds.window_count(Split::Train);
    const std::size_t val_count = ds.window_count(Split::Val);
    if (train_count == 0 || val_count == 0)
        throw DimensionError("train: train and validation splits must be non-empty");

    const auto t0 = std::chrono::steady_clock::now();
    const LossConfig loss_cfg(cfg.alpha, cfg.loss == LossKind::Fourier ? 1.0 : cfg.gamma,
                              ds.horizon());

    TrainReport report;
    std::mt19937_64 rng(cfg.seed);
    std::vector<std::size_t> order(train_count);
    for (std::size_t i = 0; i < train_count; ++i) order[i] = i;

    detail::AdamState weight_state(model.weights.size() * model.lookback * model.horizon);
    detail::AdamState bias_state(model.biases.size() * model.horizon);
    const std::size_t wstride = model.lookback * model.horizon;

    double best_val = std::numeric_limits<double>::infinity();
    std::vector<Matrix> best_weights = model.weights;
    auto best_biases = model.biases;
    std::size_t since_best = 0;

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        detail::deterministic_shuffle(order, rng);
        double epoch_loss = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < train_count; start += cfg.batch_size) {
            const std::size_t stop = std::min(start + cfg.batch_size, train_count);
            std::vector<std::size_t> idx(order.begin() + static_cast<std::ptrdiff_t>(start),
                                         order.begin() + static_cast<std::ptrdiff_t>(stop));
            Batch batch = make_batch(ds, Split::Train, idx);

            Matrix yhat_rows = detail::batch_forecast_rows(model, batch);
            Matrix y_rows(yhat_rows.rows(), yhat_rows.cols());
            detail::stack_rows(batch.labels, y_rows);

            detail::LossEval le = detail::eval_loss(yhat_rows, y_rows, cfg.loss, loss_cfg, bases,
                                                    ds.variates(), true);
            if (!std::isfinite(le.value.total))
                throw TrainingError("training diverged at epoch " + std::to_string(epoch) +
                                    " (non-finite loss)");
            epoch_loss += le.value.total;
            ++batches;

            detail::ParamGrads grads = detail::backprop(model, batch, le.grad);
            ++report.adam_steps;
            for (std::size_t set = 0; set < model.weights.size(); ++set) {
                detail::AdamState view(0);
                // contiguous slices of the shared state keep one step counter
                detail::adam_update(model.weights[set].data().data(),
                                    grads.weights[set].data().data(),
                                    weight_state, wstride, cfg, report.adam_steps);
                // advance the state window manually for multiple sets
                if (model.weights.size() > 1 && set + 1 < model.weights.size()) {
                    std::rotate(weight_state.m.begin(), weight_state.m.begin() + wstride,
                                weight_state.m.end());
                    std::rotate(weight_state.v.begin(), weight_state.v.begin() + wstride,
                                weight_state.v.end());
                }
            }
            if (model.weights.size() > 1) {
                std::rotate(weight_state.m.begin(), weight_state.m.begin() + wstride,
                            weight_state.m.end());
                std::rotate(weight_state.v.begin(), weight_state.v.begin() + wstride,
                            weight_state.v.end());
            }
            for (std::size_t set = 0; set < model.biases.size(); ++set) {
                detail::adam_update(model.biases[set].data(), grads.biases[set].data(),
                                    bias_state, model.horizon, cfg, report.adam_steps);
                if (model.biases.size() > 1 && set + 1 < model.biases.size()) {
                    std::rotate(bias_state.m.begin(), bias_state.m.begin() + model.horizon,
                                bias_state.m.end());
                    std::rotate(bias_state.v.begin(), bias_state.v.begin() + model.horizon,
                                bias_state.v.end());
                }
            }
            if (model.biases.size() > 1) {
                std::rotate(bias_state.m.begin(), bias_state.m.begin() + model.horizon,
                            bias_state.m.end());
                std::rotate(bias_state.v.begin(), bias_state.v.begin() + model.horizon,
                            bias_state.v.end());
            }
        }
        if (!model.all_finite())
            throw TrainingError("training diverged at epoch " + std::to_string(epoch) +
                                " (non-finite parameters)");

        report.train_loss.push_back(epoch_loss / static_cast<double>(batches));
        const double val = evaluate(model, ds, Split::Val).mse_std;
        report.val_mse.push_back(val);
        if (val < best_val) {
            best_val = val;
            report.best_epoch = epoch;
            best_weights = model.weights;
            best_biases = model.biases;
            since_best = 0;
        } else if (++since_best >= cfg.patience) {
            break;
        }
    }

    model.weights = best_weights;
    model.biases = best_biases;
    report.test = evaluate(model, ds, Split::Test);
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

/// Flat analytic parameter gradient of the batch loss (weights of every set
/// first, then biases).
inline std::vector<double> parameter_gradient(const LinearForecaster& model, const Batch& batch,
                                              const std::vector<ProjectionBasis>& bases,
                                              const TrainConfig& cfg) {
    if (batch.inputs.empty()) throw DimensionError("parameter_gradient: empty batch");
    const std::size_t variates = batch.inputs[0].cols();
    const LossConfig loss_cfg(cfg.alpha, cfg.loss == LossKind::Fourier ? 1.0 : cfg.gamma,
                              model.horizon);
    Matrix yhat_rows = detail::batch_forecast_rows(model, batch);
    Matrix y_rows(yhat_rows.rows(), yhat_rows.cols());
    detail::stack_rows(batch.labels, y_rows);
    detail::LossEval le =
        detail::eval_loss(yhat_rows, y_rows, cfg.loss, loss_cfg, bases, variates, true);
    detail::ParamGrads grads = detail::backprop(model, batch, le.grad);

    std::vector<double> flat;
    for (const Matrix& w : grads.weights)
        flat.insert(flat.end(), w.data().begin(), w.data().end());
    for (const auto& b : grads.biases) flat.insert(flat.end(), b.begin(), b.end());
    return flat;
}

/// Batch loss as a function of the model parameters only.
inline double batch_loss(const LinearForecaster& model, const Batch& batch,
                         const std::vector<ProjectionBasis>& bases, const TrainConfig& cfg) {
    const std::size_t variates = batch.inputs[0].cols();
    const LossConfig loss_cfg(cfg.alpha, cfg.loss == LossKind::Fourier ? 1.0 : cfg.gamma,
                              model.horizon);
    Matrix yhat_rows = detail::batch_forecast_rows(model, batch);
    Matrix y_rows(yhat_rows.rows(), yhat_rows.cols());
    detail::stack_rows(batch.labels, y_rows);
    return detail::eval_loss(yhat_rows, y_rows, cfg.loss, loss_cfg, bases, variates, false)
        .value.total;
}

/// Smallest |zhat - z| (or DFT coefficient gap) over the batch; callers keep
/// gradient checks away from L1 kinks by resampling while this is small.
inline double batch_kink_gap(const LinearForecaster& model, const Batch& batch,
                             const std::vector<ProjectionBasis>& bases, const TrainConfig& cfg) {
    Matrix yhat_rows = detail::batch_forecast_rows(model, batch);
    Matrix y_rows(yhat_rows.rows(), yhat_rows.cols());
    detail::stack_rows(batch.labels, y_rows);
    if (cfg.loss == LossKind::Fourier) return min_fourier_gap(yhat_rows, y_rows);
    if (cfg.loss == LossKind::Tmse) return std::numeric_limits<double>::infinity();
    const LossConfig loss_cfg(cfg.alpha, cfg.gamma, model.horizon);
    if (bases.size() == 1) return min_component_gap(yhat_rows, y_rows, bases[0], loss_cfg.k);
    double gap = std::numeric_limits<double>::infinity();
    const std::size_t variates = batch.inputs[0].cols();
    const std::size_t rows_per_block = y_rows.rows() / variates;
    for (std::size_t d = 0; d < variates; ++d) {
        Matrix yb(rows_per_block, y_rows.cols());
        Matrix hb(rows_per_block, y_rows.cols());
        for (std::size_t r = 0; r < rows_per_block; ++r)
            for (std::size_t c = 0; c < y_rows.cols(); ++c) {
                yb(r, c) = y_rows(r * variates + d, c);
                hb(r, c) = yhat_rows(r * variates + d, c);
            }
        gap = std::min(gap, min_component_gap(hb, yb, bases[d], loss_cfg.k));
    }
    return gap;
}

/// Compare the analytic parameter gradient to central finite differences over
/// a random subset of at least `subset` parameters; returns the max relative
/// error. The caller is responsible for staying away from L1 kinks.
inline double grad_check(const LinearForecaster& model, const Batch& batch,
                         const std::vector<ProjectionBasis>& bases, const TrainConfig& cfg,
                         std::size_t subset = 60, double step = 1e-5) {
    if (batch.inputs.empty()) throw DimensionError("grad_check: empty batch");
    std::vector<double> analytic = parameter_gradient(model, batch, bases, cfg);

    const std::size_t total = analytic.size();
    std::vector<std::size_t> picks(total);
    for (std::size_t i = 0; i < total; ++i) picks[i] = i;
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
    detail::deterministic_shuffle(picks, rng);
    const std::size_t n_check = std::min(std::max<std::size_t>(subset, 50), total);

    LinearForecaster probe = model;
    const std::size_t wstride = model.lookback * model.horizon;
    const std::size_t weight_total = model.weights.size() * wstride;
    auto param_ref = [&probe, wstride, weight_total, &model](std::size_t flat) -> double& {
        if (flat < weight_total)
            return probe.weights[flat / wstride].data()[flat % wstride];
        const std::size_t rest = flat - weight_total;
        return probe.biases[rest / model.horizon][rest % model.horizon];
    };

    double max_rel = 0.0;
    for (std::size_t i = 0; i < n_check; ++i) {
        const std::size_t flat = picks[i];
        double& p = param_ref(flat);
        const double saved = p;
        p = saved + step;
        const double up = batch_loss(probe, batch, bases, cfg);
        p = saved - step;
        const double down = batch_loss(probe, batch, bases, cfg);
        p = saved;
        const double fd = (up - down) / (2.0 * step);
        const double a = analytic[flat];
        const double rel = std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1e-8});
        max_rel = std::max(max_rel, rel);
    }
    return max_rel;
}

/// Deterministic Gaussian weight init for fixtures and gradient checks.
inline void randomize(LinearForecaster& model, std::uint64_t seed, double scale = 0.1) {
    std::mt19937_64 rng(seed);
    for (Matrix& w : model.weights)
        for (double& v : w.data()) v = scale * detail::gaussian(rng);
    for (auto& b : model.biases)
        for (double& v : b) v = scale * detail::gaussian(rng);
}

inline constexpr int kCheckpointSchemaVersion = 1;

struct Checkpoint {
    LinearForecaster model;
    ColumnStats stats;       // per-variate train stats the model was trained under
    std::string basis_id;    // identifier of the basis file, or "none"
};

inline void save_checkpoint(const Checkpoint& cp, const std::filesystem::path& path) {
    nlohmann::json weights = nlohmann::json::array();
    for (const Matrix& w : cp.model.weights) weights.push_back(matrix_to_json(w));
    nlohmann::json j{{"schema_version", kCheckpointSchemaVersion},
                     {"kind", "timeo1.checkpoint"},
                     {"lookback", cp.model.lookback},
                     {"horizon", cp.model.horizon},
                     {"per_variate", cp.model.per_variate},
                     {"weights", weights},
                     {"biases", cp.model.biases},
                     {"stats", stats_to_json(cp.stats)},
                     {"basis_id", cp.basis_id}};
    atomic_write_text(path, j.dump(2) + "\n");
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
    nlohmann::json j = nlohmann::json::parse(read_text(path));
    if (j.at("kind").get<std::string>() != "timeo1.checkpoint")
        throw IngestionError("not a checkpoint file");
    if (j.at("schema_version").get<int>() != kCheckpointSchemaVersion)
        throw IngestionError("unsupported checkpoint schema version");
    Checkpoint cp;
    cp.model.lookback = j.at("lookback").get<std::size_t>();
    cp.model.horizon = j.at("horizon").get<std::size_t>();
    cp.model.per_variate = j.at("per_variate").get<bool>();
    for (const auto& w : j.at("weights")) cp.model.weights.push_back(matrix_from_json(w));
    cp.model.biases = j.at("biases").get<std::vector<std::vector<double>>>();
    cp.stats = stats_from_json(j.at("stats"));
    cp.basis_id = j.at("basis_id").get<std::string>();
    return cp;
}

}  // namespace timeo1
