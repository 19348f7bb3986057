#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "timeo1/matrix.hpp"

namespace timeo1 {

/// Write content to a sibling temp file, then rename over the target so a
/// failed run never leaves a partial file behind.
inline void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IngestionError("cannot open for writing: " + tmp.string());
        out << content;
        if (!out) throw IngestionError("short write: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestionError("cannot open: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline nlohmann::json matrix_to_json(const Matrix& m) {
    return nlohmann::json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
    return Matrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                  j.at("data").get<std::vector<double>>());
}

inline nlohmann::json stats_to_json(const ColumnStats& s) {
    return nlohmann::json{{"means", s.means}, {"stds", s.stds}};
}

inline ColumnStats stats_from_json(const nlohmann::json& j) {
    return ColumnStats{j.at("means").get<std::vector<double>>(),
                       j.at("stds").get<std::vector<double>>()};
}

}  // namespace timeo1
