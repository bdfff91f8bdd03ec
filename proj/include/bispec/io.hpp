#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "bispec/cm_pair.hpp"

namespace bispec::io {

using json = nlohmann::json;

/// Matrix: {"n": int, "entries": [[re, im], ...]} row-major. Float entries are numbers;
/// exact entries are rational strings "p/q". A matrix mixing the two encodings is rejected.
template <class T>
json to_json(const Matrix<T>& m);

/// Decodes either encoding into backend T (floats convert exactly to rationals; rationals round to double).
template <class T>
Matrix<T> matrix_from_json(const json& j);

/// Backend the document was written in.
Backend detect_backend(const json& matrix_json);

/// {"P": Matrix, "Q": Matrix}
template <class T>
json to_json(const CMPair<T>& pair);
template <class T>
CMPair<T> pair_from_json(const json& j);

/// {"lambdas": [[re, im], ...], "alphas": [[re, im], ...]}
template <class T>
json to_json(const SpectralData<T>& data);
template <class T>
SpectralData<T> spectral_from_json(const json& j);

template <class T>
json scalar_to_json(const T& v);
template <class T>
T scalar_from_json(const json& j);

/// 17 significant digits: round-trips every double.
std::string format_double(double v);

/// "re" or "re:im", e.g. "1.5", "-2:0.25".
Complex parse_complex(std::string_view text);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace bispec::io
