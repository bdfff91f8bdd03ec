#include "bispec/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bispec::io {
namespace {

mpq_class exact_part(const json& j) {
    if (j.is_string()) return rational_from_string(j.get<std::string>());
    if (j.is_number_integer()) return mpq_class(j.get<long>());
    if (j.is_number()) return mpq_class(j.get<double>());
    throw Error(ErrorCode::InvalidArgument, "expected a number or rational string");
}

double float_part(const json& j) {
    if (j.is_string()) return rational_from_string(j.get<std::string>()).get_d();
    if (j.is_number()) return j.get<double>();
    throw Error(ErrorCode::InvalidArgument, "expected a number or rational string");
}

void require_pair_shape(const json& j) {
    if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::InvalidArgument, "scalar must be [re, im]");
}

std::vector<json> complex_list(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array()) throw Error(ErrorCode::InvalidArgument, std::string("missing ") + key);
    return j.at(key).get<std::vector<json>>();
}

}  // namespace

template <>
json scalar_to_json<Complex>(const Complex& v) {
    return json::array({v.real(), v.imag()});
}

template <>
json scalar_to_json<GaussianRational>(const GaussianRational& v) {
    return json::array({rational_to_string(v.real()), rational_to_string(v.imag())});
}

template <>
Complex scalar_from_json<Complex>(const json& j) {
    require_pair_shape(j);
    return {float_part(j[0]), float_part(j[1])};
}

template <>
GaussianRational scalar_from_json<GaussianRational>(const json& j) {
    require_pair_shape(j);
    return {exact_part(j[0]), exact_part(j[1])};
}

Backend detect_backend(const json& m) {
    if (!m.is_object() || !m.contains("entries") || !m.at("entries").is_array())
        throw Error(ErrorCode::InvalidArgument, "matrix needs an 'entries' array");
    bool strings = false, numbers = false;
    for (const auto& e : m.at("entries")) {
        require_pair_shape(e);
        for (const auto& part : e) {
            if (part.is_string()) strings = true;
            else if (part.is_number()) numbers = true;
            else throw Error(ErrorCode::InvalidArgument, "matrix entry parts must be numbers or strings");
        }
    }
    if (strings && numbers) throw Error(ErrorCode::InvalidArgument, "matrix mixes float and exact entries");
    return strings ? Backend::Exact : Backend::Float;
}

template <class T>
json to_json(const Matrix<T>& m) {
    if (!m.is_square()) throw Error(ErrorCode::NonSquare, "only square matrices are serialised");
    json entries = json::array();
    for (const auto& v : m.entries()) entries.push_back(scalar_to_json(v));
    return {{"n", m.rows()}, {"entries", std::move(entries)}};
}

template <class T>
Matrix<T> matrix_from_json(const json& j) {
    detect_backend(j);
    if (!j.contains("n") || !j.at("n").is_number_integer()) throw Error(ErrorCode::InvalidArgument, "matrix needs 'n'");
    const long n = j.at("n").get<long>();
    if (n <= 0) throw Error(ErrorCode::InvalidArgument, "matrix size must be positive");
    const auto& entries = j.at("entries");
    const auto size = static_cast<std::size_t>(n);
    if (entries.size() != size * size) throw Error(ErrorCode::DimensionMismatch, "entries do not match n*n");
    Matrix<T> m(size, size);
    for (std::size_t k = 0; k < entries.size(); ++k) m(k / size, k % size) = scalar_from_json<T>(entries[k]);
    return m;
}

template <class T>
json to_json(const CMPair<T>& pair) {
    return {{"P", to_json(pair.P)}, {"Q", to_json(pair.Q)}};
}

template <class T>
CMPair<T> pair_from_json(const json& j) {
    if (!j.is_object() || !j.contains("P") || !j.contains("Q")) throw Error(ErrorCode::InvalidArgument, "pair needs P and Q");
    if (detect_backend(j.at("P")) != detect_backend(j.at("Q")))
        throw Error(ErrorCode::InvalidArgument, "P and Q use different backends");
    CMPair<T> pair{matrix_from_json<T>(j.at("P")), matrix_from_json<T>(j.at("Q"))};
    require_same_square(pair.P, pair.Q);
    return pair;
}

template <class T>
json to_json(const SpectralData<T>& data) {
    json lambdas = json::array(), alphas = json::array();
    for (const auto& v : data.lambdas) lambdas.push_back(scalar_to_json(v));
    for (const auto& v : data.alphas) alphas.push_back(scalar_to_json(v));
    return {{"lambdas", std::move(lambdas)}, {"alphas", std::move(alphas)}};
}

template <class T>
SpectralData<T> spectral_from_json(const json& j) {
    SpectralData<T> data;
    for (const auto& e : complex_list(j, "lambdas")) data.lambdas.push_back(scalar_from_json<T>(e));
    for (const auto& e : complex_list(j, "alphas")) data.alphas.push_back(scalar_from_json<T>(e));
    if (data.lambdas.size() != data.alphas.size()) throw Error(ErrorCode::DimensionMismatch, "lambdas/alphas lengths differ");
    return data;
}

template json to_json(const Matrix<Complex>&);
template json to_json(const Matrix<GaussianRational>&);
template Matrix<Complex> matrix_from_json<Complex>(const json&);
template Matrix<GaussianRational> matrix_from_json<GaussianRational>(const json&);
template json to_json(const CMPair<Complex>&);
template json to_json(const CMPair<GaussianRational>&);
template CMPair<Complex> pair_from_json<Complex>(const json&);
template CMPair<GaussianRational> pair_from_json<GaussianRational>(const json&);
template json to_json(const SpectralData<Complex>&);
template json to_json(const SpectralData<GaussianRational>&);
template SpectralData<Complex> spectral_from_json<Complex>(const json&);
template SpectralData<GaussianRational> spectral_from_json<GaussianRational>(const json&);

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Complex parse_complex(std::string_view text) {
    auto parse = [&](std::string_view s) {
        double v = 0.0;
        const auto* end = s.data() + s.size();
        auto [ptr, ec] = std::from_chars(s.data(), end, v);
        if (ec != std::errc() || ptr != end || s.empty())
            throw Error(ErrorCode::InvalidArgument, "not a number: '" + std::string(text) + "'");
        return v;
    };
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) return {parse(text), 0.0};
    return {parse(text.substr(0, colon)), parse(text.substr(colon + 1))};
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Io, path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace bispec::io
