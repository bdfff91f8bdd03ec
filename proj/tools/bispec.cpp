// bispec: command-line front end.
//
// Exit status: 0 success / all suites passed, 1 a verification suite failed,
// 2 usage or domain error.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "bispec/dynamics.hpp"
#include "bispec/io.hpp"

using namespace bispec;
using io::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr const char* kVersion = "1.0.0";

struct Globals {
    std::string backend = "float";
    double tol = 1e-9;
    std::uint64_t seed = 0;
    std::string out;
    std::string rho = "airy2";
    std::string kind = "airy";
    bool no_validate_rho = false;
    std::vector<std::string> argv;

    Backend backend_tag() const { return backend == "exact" ? Backend::Exact : Backend::Float; }
};

// ---------------------------------------------------------------- helpers

template <class T>
T scalar_from_text(const std::string& s);

template <>
Complex scalar_from_text<Complex>(const std::string& s) {
    return io::parse_complex(s);
}

/// "p/q" or "p/q:p/q"; decimals are accepted and converted exactly.
template <>
GaussianRational scalar_from_text<GaussianRational>(const std::string& s) {
    auto part = [](const std::string& t) {
        if (t.find_first_of(".eE") != std::string::npos) return mpq_class(io::parse_complex(t).real());
        return rational_from_string(t);
    };
    const auto colon = s.find(':');
    if (colon == std::string::npos) return {part(s), mpq_class(0)};
    return {part(s.substr(0, colon)), part(s.substr(colon + 1))};
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, sep);)
        if (!item.empty()) out.push_back(item);
    return out;
}

template <class T>
RhoPoly<T> make_rho(const Globals& g) {
    if (g.rho == "airy2") return RhoPoly<T>::airy2();
    if (g.rho == "bessel2") return RhoPoly<T>::bessel2();
    Kind kind;
    if (g.kind == "airy") kind = Kind::Airy;
    else if (g.kind == "bessel") kind = Kind::Bessel;
    else throw Error(ErrorCode::InvalidArgument, "--kind must be airy or bessel");
    Vector<T> a;
    for (const auto& c : split(g.rho, ',')) a.push_back(scalar_from_text<T>(c));
    if (g.no_validate_rho) {
        RhoPoly<T> rho(kind, a, false);
        try {
            rho.check_normalization();
        } catch (const Error& e) {
            std::cerr << "warning: " << e.what() << " (continuing: --no-validate-rho)\n";
        }
        return rho;
    }
    return RhoPoly<T>(kind, a);
}

template <class T>
json rho_json(const RhoPoly<T>& rho) {
    json a = json::array();
    for (const auto& c : rho.a()) a.push_back(io::scalar_to_json(c));
    return {{"kind", std::string(to_string(rho.kind()))}, {"a", a}};
}

template <class T>
CMPair<T> load_pair(const std::string& path) {
    return io::pair_from_json<T>(io::read_json_file(path));
}

json provenance(const Globals& g, const std::string& command, json extra = json::object()) {
    json p{{"tool", "bispec"},     {"version", kVersion}, {"command", command},
           {"argv", g.argv},       {"backend", g.backend}, {"tol", g.tol},
           {"seed", g.seed}};
    for (auto it = extra.begin(); it != extra.end(); ++it) p[it.key()] = it.value();
    return p;
}

void emit(const Globals& g, const std::string& text, const json& meta) {
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    io::write_text_file(g.out, text);
    io::write_text_file(g.out + ".meta.json", meta.dump(2) + "\n");
}

template <class T>
T random_scalar(std::mt19937_64& rng, double half_width);

template <>
Complex random_scalar<Complex>(std::mt19937_64& rng, double half_width) {
    std::uniform_real_distribution<double> d(-half_width, half_width);
    const double re = d(rng);
    return {re, d(rng)};
}

template <>
GaussianRational random_scalar<GaussianRational>(std::mt19937_64& rng, double half_width) {
    const long bound = static_cast<long>(half_width) * 2;
    std::uniform_int_distribution<long> num(-bound, bound), den(1, 2);
    const mpq_class re(num(rng), den(rng));
    const mpq_class im(num(rng), den(rng));
    return {re, im};
}

bool is_pole(const Error& e) {
    switch (e.code()) {
    case ErrorCode::PoleInX:
    case ErrorCode::PoleInZ:
    case ErrorCode::SingularSystem:
    case ErrorCode::SingularMatrix: return true;
    default: return false;
    }
}

/// Calls f(rng) with fresh samples until it stops hitting poles.
template <class F>
auto avoiding_poles(std::mt19937_64& rng, F&& f) {
    for (int attempt = 0;; ++attempt) {
        try {
            return f(rng);
        } catch (const Error& e) {
            if (!is_pole(e) || attempt >= 50) throw;
        }
    }
}

double max_abs_diff(const Vector<Complex>& a, const Vector<Complex>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
    return m;
}

// ---------------------------------------------------------------- gen

int cmd_gen(const Globals& g, std::size_t n) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "--n must be >= 1");
    json pair, data;
    if (g.backend_tag() == Backend::Exact) {
        const auto d = random_exact_spectral_data(n, g.seed);
        pair = io::to_json(random_exact_pair(n, g.seed));
        data = io::to_json(d);
    } else {
        const auto d = random_spectral_data(n, g.seed);
        pair = io::to_json(from_spectral_data(d));
        data = io::to_json(d);
    }
    emit(g, pair.dump(2) + "\n", provenance(g, "gen", {{"n", n}, {"spectral_data", data}}));
    if (!g.out.empty()) io::write_text_file(g.out + ".spectral.json", data.dump(2) + "\n");
    return kExitPass;
}

// ---------------------------------------------------------------- involute

template <class T>
int run_involute(const Globals& g, const std::string& pair_path, const std::string& map_name) {
    const CMPair<T> pair = load_pair<T>(pair_path);
    const InvolutionKind kind = parse_involution(map_name);
    Involution<T> map = Involution<T>::kp();
    json extra{{"input", pair_path}, {"map", map_name}};
    if (kind != InvolutionKind::KP) {
        const RhoPoly<T> rho = make_rho<T>(g);
        if ((kind == InvolutionKind::Airy) != (rho.kind() == Kind::Airy))
            throw Error(ErrorCode::InvalidArgument, "--map " + map_name + " needs a rho of the same kind");
        map = Involution<T>::of(rho);
        extra["rho"] = rho_json(rho);
    }
    emit(g, io::to_json(map(pair)).dump(2) + "\n", provenance(g, "involute", extra));
    return kExitPass;
}

// ---------------------------------------------------------------- baker

template <class T>
T power(const T& x, std::size_t r) {
    T out = from_int<T>(1);
    for (std::size_t k = 0; k < r; ++k) out = out * x;
    return out;
}

template <class T>
int run_baker(const Globals& g, const std::string& pair_path, const std::vector<std::string>& xs,
              const std::vector<std::string>& zs, const std::string& mode) {
    const CMPair<T> pair = load_pair<T>(pair_path);
    const RhoPoly<T> rho = make_rho<T>(g);
    if (mode != "transformed" && mode != "raw") throw Error(ErrorCode::InvalidArgument, "--mode must be raw or transformed");
    const bool raw = mode == "raw" && rho.kind() == Kind::Bessel;
    const std::size_t r = rho.order();

    std::ostringstream csv;
    csv << "x_re,x_im,z_re,z_im";
    for (std::size_t j = 0; j < r; ++j) csv << ",k" << j << "_re,k" << j << "_im";
    csv << ",error\n";
    for (const auto& xt : xs)
        for (const auto& zt : zs) {
            const T x = scalar_from_text<T>(xt), z = scalar_from_text<T>(zt);
            const Complex xc = to_complex(x), zc = to_complex(z);
            csv << io::format_double(xc.real()) << ',' << io::format_double(xc.imag()) << ','
                << io::format_double(zc.real()) << ',' << io::format_double(zc.imag());
            try {
                const KVector<T> k = raw ? baker_k(pair, rho, power(x, r), power(z, r)) : baker_k(pair, rho, x, z);
                for (const auto& v : k) {
                    const Complex c = to_complex(v);
                    csv << ',' << io::format_double(c.real()) << ',' << io::format_double(c.imag());
                }
                csv << ",\n";
            } catch (const Error& e) {
                if (!is_pole(e)) throw;
                for (std::size_t j = 0; j < r; ++j) csv << ",nan,nan";
                csv << ',' << to_string(e.code()) << '\n';
            }
        }
    emit(g, csv.str(), provenance(g, "baker", {{"input", pair_path}, {"rho", rho_json(rho)}, {"mode", mode},
                                              {"x", xs}, {"z", zs}}));
    return kExitPass;
}

// ---------------------------------------------------------------- verify

struct SuiteResult {
    bool pass = false;
    double max_residual = 0.0;
    std::optional<bool> exact_zero;
    std::string note;
    std::string error;

    json to_json() const {
        json j{{"pass", pass}, {"max_residual", max_residual}};
        if (exact_zero) j["exact_zero"] = *exact_zero;
        if (!note.empty()) j["note"] = note;
        if (!error.empty()) j["error"] = error;
        return j;
    }
};

struct VerifyContext {
    double tol;
    double fd_tol;
    int samples;
    std::uint64_t seed;
};

/// Residual accumulator: exact backends demand literal zero, float ones compare with tol.
template <class T>
struct Accumulator {
    double max_residual = 0.0;
    bool exact_zero = true;

    void add(const Matrix<T>& deviation) {
        max_residual = std::max(max_residual, deviation.max_abs());
        exact_zero = exact_zero && deviation.is_zero();
    }
    void add(const Vector<T>& a, const Vector<T>& b) {
        Matrix<T> d(a.size(), 1);
        for (std::size_t i = 0; i < a.size(); ++i) d(i, 0) = a[i] - b[i];
        add(d);
    }
    SuiteResult result(double tol) const {
        SuiteResult s;
        s.max_residual = max_residual;
        if constexpr (is_exact_v<T>) {
            s.exact_zero = exact_zero;
            s.pass = exact_zero;
        } else {
            s.pass = max_residual <= tol;
        }
        return s;
    }
};

template <class T>
SuiteResult suite_rank(const CMPair<T>& pair, const VerifyContext& ctx) {
    const Matrix<T> m = commutator(pair.P, pair.Q) - Matrix<T>::identity(pair.size());
    try {
        const auto f = validate_and_factor(pair, ctx.tol);
        Accumulator<T> acc;
        acc.add(m + outer(f.w1, f.w2));
        return acc.result(ctx.tol * std::max(1.0, m.max_abs()));
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotRankOne) throw;
        SuiteResult s;
        s.error = e.what();
        s.max_residual = std::numeric_limits<double>::infinity();
        return s;
    }
}

/// Spectral data of the pair: read off directly when Q is diagonal, else canonicalised in floats.
template <class T>
std::optional<SpectralData<T>> spectral_data_of(const CMPair<T>& pair) {
    const std::size_t n = pair.size();
    bool diagonal = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && !is_exact_zero(pair.Q(i, j))) diagonal = false;
    if (diagonal) {
        const auto f = validate_and_factor(pair);
        bool ones = true;
        for (std::size_t i = 0; i < n; ++i) ones = ones && f.w1[i] == f.w1[0] && f.w2[i] == f.w2[0];
        if (ones) {
            SpectralData<T> d;
            for (std::size_t i = 0; i < n; ++i) {
                d.lambdas.push_back(pair.Q(i, i));
                T alpha = pair.P(i, i);
                for (std::size_t j = 0; j < n; ++j)
                    if (j != i) alpha += from_int<T>(1) / (pair.Q(i, i) - pair.Q(j, j));
                d.alphas.push_back(alpha);
            }
            return d;
        }
    }
    if constexpr (is_exact_v<T>) {
        return std::nullopt;
    } else {
        return canonicalize(pair);
    }
}

template <class T>
SuiteResult suite_oracle(const CMPair<T>& pair, const RhoPoly<T>& rho, const VerifyContext& ctx) {
    const auto data = spectral_data_of(pair);
    if (!data) {
        SuiteResult s{true, 0.0, std::nullopt, "skipped: exact oracle needs diagonal Q in canonical gauge", ""};
        return s;
    }
    std::mt19937_64 rng(ctx.seed ^ 0x0badc0deULL);
    Accumulator<T> acc;
    double rel = 0.0;
    for (int s = 0; s < ctx.samples; ++s)
        avoiding_poles(rng, [&](std::mt19937_64& g) {
            const T x = random_scalar<T>(g, 4.0), z = random_scalar<T>(g, 4.0);
            const auto a = baker_k(pair, rho, x, z);
            const auto b = k_solver_oracle(*data, rho, x, z);
            acc.add(a, b);
            Vector<Complex> ac, bc;
            for (const auto& v : a) ac.push_back(to_complex(v));
            for (const auto& v : b) bc.push_back(to_complex(v));
            rel = std::max(rel, max_abs_diff(ac, bc));
            return 0;
        });
    auto res = acc.result(ctx.tol);
    if constexpr (!is_exact_v<T>) {
        res.max_residual = rel;
        res.pass = rel <= ctx.tol;
    }
    return res;
}

template <class T>
SuiteResult suite_symmetry(const CMPair<T>& pair, const RhoPoly<T>& rho, const VerifyContext& ctx) {
    const CMPair<T> image = rho.kind() == Kind::Airy ? beta_airy(pair, rho) : beta_bessel(pair, rho);
    const CMPair<T> kp = beta_kp(pair);
    std::mt19937_64 rng(ctx.seed ^ 0x5eed5eedULL);
    Accumulator<T> acc;
    double rel = 0.0;
    for (int s = 0; s < ctx.samples; ++s)
        avoiding_poles(rng, [&](std::mt19937_64& g) {
            const T x = random_scalar<T>(g, 4.0), z = random_scalar<T>(g, 4.0);
            const auto a = baker_k(image, rho, x, z);
            const auto b = baker_k(pair, rho, z, x);
            const Vector<T> wa{wilson_rational_factor(kp, z, x)}, wb{wilson_rational_factor(pair, x, z)};
            acc.add(a, b);
            acc.add(wa, wb);
            Vector<Complex> ac, bc;
            for (const auto& v : a) ac.push_back(to_complex(v));
            for (const auto& v : b) bc.push_back(to_complex(v));
            ac.push_back(to_complex(wa[0]));
            bc.push_back(to_complex(wb[0]));
            rel = std::max(rel, max_abs_diff(ac, bc));
            return 0;
        });
    auto res = acc.result(ctx.tol);
    if constexpr (!is_exact_v<T>) {
        res.max_residual = rel;
        res.pass = rel <= ctx.tol;
    }
    return res;
}

template <class T>
SuiteResult suite_involutivity(const CMPair<T>& pair, const RhoPoly<T>& rho, const VerifyContext& ctx) {
    Accumulator<T> acc;
    const double scale = std::max({1.0, pair.P.max_abs(), pair.Q.max_abs()});
    for (const auto& map : {Involution<T>::kp(), Involution<T>::of(rho)}) {
        const CMPair<T> image = map(pair);
        const CMPair<T> back = map(image);
        acc.add(back.P - pair.P);
        acc.add(back.Q - pair.Q);
        acc.add(commutator(image.P, image.Q) - commutator(pair.P, pair.Q).transpose());
    }
    auto res = acc.result(ctx.tol * scale);
    if constexpr (!is_exact_v<T>) res.max_residual /= scale;
    return res;
}

SuiteResult suite_antisymplectic(const CMPair<Complex>& pair, const RhoPoly<Complex>& rho, const VerifyContext& ctx) {
    double w = antisymplectic_residual(Involution<Complex>::kp(), pair, ctx.samples, ctx.seed);
    w = std::max(w, antisymplectic_residual(Involution<Complex>::of(rho), pair, ctx.samples, ctx.seed + 1));
    SuiteResult s;
    s.max_residual = w;
    s.pass = w <= ctx.fd_tol;
    s.note = "finite differences, h = 1e-5, compared with --fd-tol";
    return s;
}

template <class T>
SuiteResult suite_a_identity(const CMPair<T>& pair, const RhoPoly<T>& rho, const VerifyContext& ctx) {
    std::mt19937_64 rng(ctx.seed ^ 0xa1a1a1a1ULL);
    double worst = 0.0;
    bool zero = true;
    const double scale = std::max({1.0, pair.P.max_abs(), pair.Q.max_abs()});
    for (int s = 0; s < ctx.samples; ++s) {
        const auto res = verify_a_identity(pair, rho, random_scalar<T>(rng, 4.0));
        worst = std::max(worst, res.max_abs);
        zero = zero && res.exact_zero;
    }
    SuiteResult s;
    s.max_residual = is_exact_v<T> ? worst : worst / std::pow(scale, static_cast<double>(rho.order()));
    if constexpr (is_exact_v<T>) {
        s.exact_zero = zero;
        s.pass = zero;
    } else {
        s.pass = s.max_residual <= ctx.tol;
    }
    return s;
}

SuiteResult suite_conditions(const CMPair<Complex>& pair, const RhoPoly<Complex>& rho, const VerifyContext& ctx) {
    const SpectralData<Complex> data = *spectral_data_of(pair);
    std::mt19937_64 rng(ctx.seed ^ 0xc0c0c0c0ULL);
    double worst = 0.0;
    for (int s = 0; s < ctx.samples; ++s) {
        const auto rows = avoiding_poles(rng, [&](std::mt19937_64& g) {
            const Complex x = random_scalar<Complex>(g, 4.0);
            return condition_residual(data, rho, std::span<const Complex>(&x, 1));
        });
        for (const auto& row : rows)
            for (double v : row) worst = std::max(worst, v);
    }
    SuiteResult s;
    s.max_residual = worst;
    s.pass = worst <= std::max(ctx.tol, 1e-8);
    s.note = "evaluated on the canonical form; tolerance max(tol, 1e-8)";
    return s;
}

const std::vector<std::string> kSuites{"rank", "oracle", "symmetry", "involutivity", "antisymplectic", "a_identity",
                                       "conditions"};

template <class T>
SuiteResult run_suite(const std::string& name, const CMPair<T>& pair, const RhoPoly<T>& rho, const VerifyContext& ctx) {
    if (name == "rank") return suite_rank(pair, ctx);
    if (name == "oracle") return suite_oracle(pair, rho, ctx);
    if (name == "symmetry") return suite_symmetry(pair, rho, ctx);
    if (name == "involutivity") return suite_involutivity(pair, rho, ctx);
    if (name == "a_identity") return suite_a_identity(pair, rho, ctx);
    // Finite-difference and root-finding suites always run in floating point.
    const CMPair<Complex> fpair = to_float(pair);
    const RhoPoly<Complex> frho = to_float(rho);
    SuiteResult s = name == "antisymplectic" ? suite_antisymplectic(fpair, frho, ctx) : suite_conditions(fpair, frho, ctx);
    if constexpr (is_exact_v<T>) s.note += s.note.empty() ? "float evaluation" : "; float evaluation";
    return s;
}

template <class T>
int run_verify(const Globals& g, const std::string& pair_path, std::vector<std::string> suites, int samples,
               double fd_tol) {
    const CMPair<T> pair = load_pair<T>(pair_path);
    const RhoPoly<T> rho = make_rho<T>(g);
    if (suites.empty()) suites = kSuites;
    for (const auto& s : suites)
        if (std::find(kSuites.begin(), kSuites.end(), s) == kSuites.end())
            throw Error(ErrorCode::InvalidArgument, "unknown suite '" + s + "'");
    const VerifyContext ctx{g.tol, fd_tol, samples, g.seed};

    json report{{"input", pair_path}, {"backend", g.backend}, {"tol", g.tol}, {"rho", rho_json(rho)}};
    bool all = true;
    // A failed rank check makes the other suites meaningless; they are still attempted.
    for (const auto& name : suites) {
        SuiteResult r;
        try {
            r = run_suite(name, pair, rho, ctx);
        } catch (const Error& e) {
            r.pass = false;
            r.max_residual = std::numeric_limits<double>::infinity();
            r.error = std::string(to_string(e.code())) + ": " + e.what();
        }
        all = all && r.pass;
        json j = r.to_json();
        if (!std::isfinite(r.max_residual)) j["max_residual"] = nullptr;
        report["suites"][name] = j;
    }
    report["pass"] = all;
    emit(g, report.dump(2) + "\n", provenance(g, "verify", {{"input", pair_path}, {"suites", suites}, {"samples", samples}}));
    if (!g.out.empty()) std::cerr << (all ? "PASS" : "FAIL") << '\n';
    return all ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------- flow

int run_flow(const Globals& g, const std::string& pair_path, int m, double t0, double t1, std::size_t steps) {
    const CMPair<Complex> pair = load_pair<Complex>(pair_path);
    const RhoPoly<Complex> rho = make_rho<Complex>(g);
    const FlowSpec spec = FlowSpec::uniform(m, t0, t1, steps);
    const Trajectory tr = pole_trajectories(pair, rho, spec);
    const std::size_t n = pair.size();

    std::ostringstream csv;
    csv << 't';
    for (std::size_t i = 1; i <= n; ++i) csv << ",pole" << i << "_re,pole" << i << "_im";
    csv << ",collision_flag\n";
    for (const auto& row : tr.rows) {
        csv << io::format_double(row.t);
        for (std::size_t i = 0; i < n; ++i) {
            if (row.poles.empty()) {
                csv << ",nan,nan";
            } else {
                csv << ',' << io::format_double(row.poles[i].real()) << ',' << io::format_double(row.poles[i].imag());
            }
        }
        csv << ',' << static_cast<int>(row.status) << '\n';
    }
    json extra{{"input", pair_path},
               {"pair", io::to_json(pair)},
               {"rho", rho_json(rho)},
               {"m", m},
               {"grid", {{"t0", t0}, {"t1", t1}, {"steps", steps}}},
               {"collision_rule", "flag 1 when a pole moves more than half the previous minimum gap; 2 marks a domain error"},
               {"collisions", tr.collisions()}};
    emit(g, csv.str(), provenance(g, "flow", extra));
    return kExitPass;
}

// ---------------------------------------------------------------- ham

template <class T>
int run_ham(const Globals& g, const std::string& pair_path, int m, bool compare) {
    const CMPair<T> pair = load_pair<T>(pair_path);
    const RhoPoly<T> rho = make_rho<T>(g);
    const T h = hamiltonian(pair, rho, m);
    json out{{"m", m}, {"value", io::scalar_to_json(h)}, {"rho", rho_json(rho)}};
    if (compare) {
        // Reduced coordinates are read in the canonical gauge: lambda = spec Q, gamma = diagonal of P there.
        const CMPair<Complex> fpair = to_float(pair);
        const auto data = canonicalize(fpair);
        const auto canon = from_spectral_data(data);
        Vector<Complex> coords(data.lambdas);
        for (std::size_t i = 0; i < data.size(); ++i) coords.push_back(canon.P(i, i));
        const Complex ref = reduced_reference_h1(to_float(rho), coords);
        const Complex hv = to_complex(h);
        out["reduced_formula"] = io::scalar_to_json(ref);
        out["difference"] = std::abs(hv - ref);
        if (m != 1) out["note"] = "the reduced formulas describe m = 1";
    }
    emit(g, out.dump(2) + "\n", provenance(g, "ham", {{"input", pair_path}, {"m", m}}));
    return kExitPass;
}

template <class F>
int dispatch(const Globals& g, F&& f) {
    return g.backend_tag() == Backend::Exact ? f(GaussianRational{}) : f(Complex{});
}

}  // namespace

int main(int argc, char** argv) {
    Globals g;
    for (int i = 0; i < argc; ++i) g.argv.emplace_back(argv[i]);

    CLI::App app{"Baker functions, bispectral involutions and pole dynamics for Calogero-Moser pairs"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand
    app.add_option("--backend", g.backend, "float or exact")->check(CLI::IsMember({"float", "exact"}));
    app.add_option("--tol", g.tol, "verification tolerance (float backend)")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "seed for generation and sampling");
    app.add_option("--out", g.out, "output file (default stdout); a .meta.json sidecar is written next to it");
    app.add_option("--rho", g.rho, "airy2, bessel2, or coefficients a0,...,a_{r-1} (complex as re:im)");
    app.add_option("--kind", g.kind, "kind for a coefficient-list rho")->check(CLI::IsMember({"airy", "bessel"}));
    app.add_flag("--no-validate-rho", g.no_validate_rho, "warn instead of failing on a mis-normalised rho");

    std::size_t n = 0;
    auto* gen = app.add_subcommand("gen", "random Calogero-Moser pair in canonical form");
    gen->add_option("--n", n, "matrix size")->required();

    std::string pair_path, map_name = "kp";
    auto* inv = app.add_subcommand("involute", "apply a bispectral involution");
    inv->add_option("pair", pair_path, "pair JSON")->required()->check(CLI::ExistingFile);
    inv->add_option("--map", map_name, "kp, airy or bessel")->check(CLI::IsMember({"kp", "airy", "bessel"}));

    std::vector<std::string> xs, zs;
    std::string mode = "transformed";
    auto* baker = app.add_subcommand("baker", "evaluate the k-vector on a grid");
    baker->add_option("pair", pair_path, "pair JSON")->required()->check(CLI::ExistingFile);
    baker->add_option("--x", xs, "x values (re or re:im)")->required()->delimiter(',');
    baker->add_option("--z", zs, "z values (re or re:im)")->required()->delimiter(',');
    baker->add_option("--mode", mode, "Bessel only: raw evaluates at (x^r, z^r)")
        ->check(CLI::IsMember({"raw", "transformed"}));

    std::vector<std::string> suites;
    int samples = 10;
    double fd_tol = 1e-6;
    auto* verify = app.add_subcommand("verify", "run identity suites and write a JSON report");
    verify->add_option("pair", pair_path, "pair JSON")->required()->check(CLI::ExistingFile);
    verify->add_option("--suites", suites, "subset of: rank,oracle,symmetry,involutivity,antisymplectic,a_identity,conditions")
        ->delimiter(',');
    verify->add_option("--samples", samples, "sample points / tangent trials per suite")->check(CLI::PositiveNumber);
    verify->add_option("--fd-tol", fd_tol, "tolerance for finite-difference suites")->check(CLI::PositiveNumber);

    int m = 1;
    double t0 = -1.0, t1 = 1.0;
    std::size_t steps = 101;
    auto* flow_cmd = app.add_subcommand("flow", "pole trajectories of tau along the m-th flow");
    flow_cmd->add_option("pair", pair_path, "pair JSON")->required()->check(CLI::ExistingFile);
    flow_cmd->add_option("--m", m, "flow index")->check(CLI::PositiveNumber);
    flow_cmd->add_option("--t0", t0, "first time");
    flow_cmd->add_option("--t1", t1, "last time");
    flow_cmd->add_option("--steps", steps, "number of grid points")->check(CLI::PositiveNumber);

    bool compare = false;
    auto* ham = app.add_subcommand("ham", "tr(Qhat^m)");
    ham->add_option("pair", pair_path, "pair JSON")->required()->check(CLI::ExistingFile);
    ham->add_option("--m", m, "power")->check(CLI::PositiveNumber);
    ham->add_flag("--compare-reduced", compare, "also evaluate the explicit 1- or 2-particle formula");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (*gen) return cmd_gen(g, n);
        if (*inv)
            return dispatch(g, [&](auto tag) { return run_involute<decltype(tag)>(g, pair_path, map_name); });
        if (*baker) return dispatch(g, [&](auto tag) { return run_baker<decltype(tag)>(g, pair_path, xs, zs, mode); });
        if (*verify)
            return dispatch(g, [&](auto tag) { return run_verify<decltype(tag)>(g, pair_path, suites, samples, fd_tol); });
        if (*flow_cmd) {
            if (g.backend_tag() == Backend::Exact) std::cerr << "note: flow evaluates poles in floating point\n";
            return run_flow(g, pair_path, m, t0, t1, steps);
        }
        if (*ham) return dispatch(g, [&](auto tag) { return run_ham<decltype(tag)>(g, pair_path, m, compare); });
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
