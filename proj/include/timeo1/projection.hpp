#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "timeo1/io.hpp"
#include "timeo1/matrix.hpp"

namespace timeo1 {

enum class ProjectionMode { Pooled, PerVariate };

inline const char* to_string(ProjectionMode m) {
    return m == ProjectionMode::Pooled ? "pooled" : "per-variate";
}

inline ProjectionMode projection_mode_from_string(const std::string& s) {
    if (s == "pooled") return ProjectionMode::Pooled;
    if (s == "per-variate") return ProjectionMode::PerVariate;
    throw ConfigError("unknown projection mode: " + s);
}

/// Orthonormal label-space projection fitted on training labels. Columns of
/// p_star are ordered by descending singular value (significance order).
/// Immutable once fitted; fit once on the training split, never per batch.
struct ProjectionBasis {
    Matrix p_star;                        // T x T
    std::vector<double> singular_values;  // length T, descending
    ColumnStats label_stats;              // per-step stats the fit saw
    bool standardize_first = true;
    ProjectionMode mode = ProjectionMode::Pooled;
    std::size_t horizon = 0;
};

/// Projected sequences, keeping only the first k significance-ordered columns.
struct ComponentMatrix {
    Matrix z;                  // m x k
    std::size_t k = 0;
    std::size_t source_horizon = 0;
};

/// K = round(gamma * T), half away from zero, clamped to [1, T].
inline std::size_t truncation_k(double gamma, std::size_t horizon) {
    if (!(gamma > 0.0) || gamma > 1.0)
        throw ConfigError("truncation_k: gamma must be in (0, 1], got " + std::to_string(gamma));
    if (horizon == 0) throw DimensionError("truncation_k: horizon must be positive");
    auto k = static_cast<long long>(std::llround(gamma * static_cast<double>(horizon)));
    if (k < 1) k = 1;
    if (k > static_cast<long long>(horizon)) k = static_cast<long long>(horizon);
    return static_cast<std::size_t>(k);
}

/// Fit the variance-maximizing projection from a label matrix (one row per
/// sample). When standardize_first is set the labels are standardized with
/// stats before the SVD; the Appendix-C style variant skips that step.
inline ProjectionBasis fit_projection(const Matrix& labels, const ColumnStats& stats,
                                      bool standardize_first = true,
                                      ProjectionMode mode = ProjectionMode::Pooled) {
    if (labels.rows() < 2) throw DimensionError("fit_projection: need at least 2 label rows");
    if (stats.cols() != labels.cols())
        throw DimensionError("fit_projection: stats column count mismatch");

    SvdResult dec =
        standardize_first ? svd(standardize(labels, stats), false) : svd(labels, false);

    ProjectionBasis basis;
    basis.p_star = std::move(dec.right_vectors);
    basis.singular_values = std::move(dec.singular_values);
    basis.label_stats = stats;
    basis.standardize_first = standardize_first;
    basis.mode = mode;
    basis.horizon = labels.cols();
    return basis;
}

/// One basis per variate (each fitted independently, same flags).
inline std::vector<ProjectionBasis> fit_projection_per_variate(
    const std::vector<Matrix>& per_variate_labels, bool standardize_first = true) {
    std::vector<ProjectionBasis> bases;
    bases.reserve(per_variate_labels.size());
    for (const Matrix& labels : per_variate_labels)
        bases.push_back(fit_projection(labels, fit_stats(labels), standardize_first,
                                       ProjectionMode::PerVariate));
    return bases;
}

/// z = seq * p_star[:, 1..k].
inline ComponentMatrix transform(const ProjectionBasis& basis, const Matrix& seq, std::size_t k) {
    if (seq.cols() != basis.horizon)
        throw DimensionError("transform: sequence has " + std::to_string(seq.cols()) +
                             " steps, basis horizon is " + std::to_string(basis.horizon));
    if (k < 1 || k > basis.horizon)
        throw DimensionError("transform: k out of range [1, horizon]");
    Matrix z(seq.rows(), k);
    for (std::size_t r = 0; r < seq.rows(); ++r) {
        const double* row = seq.row_ptr(r);
        for (std::size_t j = 0; j < k; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < basis.horizon; ++t) s += row[t] * basis.p_star(t, j);
            z(r, j) = s;
        }
    }
    return ComponentMatrix{std::move(z), k, basis.horizon};
}

/// z * p_star[:, 1..k]^T; lossless exactly when k equals the horizon.
inline Matrix inverse_transform(const ProjectionBasis& basis, const ComponentMatrix& cm) {
    if (cm.k > basis.horizon || cm.z.cols() != cm.k)
        throw DimensionError("inverse_transform: component count exceeds horizon");
    Matrix out(cm.z.rows(), basis.horizon);
    for (std::size_t r = 0; r < cm.z.rows(); ++r) {
        const double* zr = cm.z.row_ptr(r);
        double* dst = out.row_ptr(r);
        for (std::size_t t = 0; t < basis.horizon; ++t) {
            double s = 0.0;
            for (std::size_t j = 0; j < cm.k; ++j) s += zr[j] * basis.p_star(t, j);
            dst[t] = s;
        }
    }
    return out;
}

/// Max over p != p' of |Z_p . Z_p'| / (|Z_p| |Z_p'| + eps). Zero for exactly
/// decorrelated components.
inline double decorrelation_report(const ComponentMatrix& cm) {
    if (cm.k < 2) throw DimensionError("decorrelation_report: need at least 2 components");
    const std::size_t k = cm.k;
    constexpr double eps = 1e-12;
    std::vector<double> norms(k, 0.0);
    for (std::size_t r = 0; r < cm.z.rows(); ++r)
        for (std::size_t j = 0; j < k; ++j) norms[j] += cm.z(r, j) * cm.z(r, j);
    for (double& n : norms) n = std::sqrt(n);

    double worst = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t q = p + 1; q < k; ++q) {
            double dot = 0.0;
            for (std::size_t r = 0; r < cm.z.rows(); ++r) dot += cm.z(r, p) * cm.z(r, q);
            worst = std::max(worst, std::abs(dot) / (norms[p] * norms[q] + eps));
        }
    }
    return worst;
}

inline constexpr int kBasisSchemaVersion = 1;

inline nlohmann::json basis_to_json(const ProjectionBasis& basis) {
    return nlohmann::json{{"schema_version", kBasisSchemaVersion},
                          {"kind", "timeo1.basis"},
                          {"horizon", basis.horizon},
                          {"mode", to_string(basis.mode)},
                          {"standardize_first", basis.standardize_first},
                          {"label_stats", stats_to_json(basis.label_stats)},
                          {"singular_values", basis.singular_values},
                          {"p_star", matrix_to_json(basis.p_star)}};
}

inline ProjectionBasis basis_from_json(const nlohmann::json& j) {
    if (j.at("kind").get<std::string>() != "timeo1.basis")
        throw IngestionError("not a basis file");
    if (j.at("schema_version").get<int>() != kBasisSchemaVersion)
        throw IngestionError("unsupported basis schema version");
    ProjectionBasis basis;
    basis.horizon = j.at("horizon").get<std::size_t>();
    basis.mode = projection_mode_from_string(j.at("mode").get<std::string>());
    basis.standardize_first = j.at("standardize_first").get<bool>();
    basis.label_stats = stats_from_json(j.at("label_stats"));
    basis.singular_values = j.at("singular_values").get<std::vector<double>>();
    basis.p_star = matrix_from_json(j.at("p_star"));
    if (basis.p_star.rows() != basis.horizon || basis.p_star.cols() != basis.horizon)
        throw IngestionError("basis file horizon does not match p_star shape");
    return basis;
}

inline void save_basis(const ProjectionBasis& basis, const std::filesystem::path& path) {
    atomic_write_text(path, basis_to_json(basis).dump(2) + "\n");
}

inline ProjectionBasis load_basis(const std::filesystem::path& path) {
    return basis_from_json(nlohmann::json::parse(read_text(path)));
}

}  // namespace timeo1
