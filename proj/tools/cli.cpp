#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "CLI11.hpp"
#include "json.hpp"
#include "plateau/circuit.hpp"
#include "plateau/closed_form.hpp"
#include "plateau/cone.hpp"
#include "plateau/observable.hpp"
#include "plateau/oracle.hpp"
#include "plateau/zx.hpp"

namespace plateau::cli {

namespace {

// Usage error tied to one flag; reported with exit code 2.
struct UsageError : std::runtime_error {
    UsageError(const std::string& flag, const std::string& what) : std::runtime_error(flag + ": " + what) {}
};

// Instance that has no closed form; skipped inside sweeps.
struct NotCovered : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Method { tn, closed, mc, grid };

Method parse_method(const std::string& s) {
    if (s == "tn") return Method::tn;
    if (s == "closed") return Method::closed;
    if (s == "mc") return Method::mc;
    if (s == "grid") return Method::grid;
    throw UsageError("--method", "expected tn|closed|mc|grid, got '" + s + "'");
}

std::string method_str(Method m) {
    switch (m) {
        case Method::tn: return "tn";
        case Method::closed: return "closed";
        case Method::mc: return "mc";
        case Method::grid: return "grid";
    }
    return "?";
}

struct RunRecord {
    Family family = Family::qMPS;
    int n_qubits = 0;
    std::string observable;
    std::vector<int> support;
    ParamId param;
    Method method = Method::tn;
    double variance = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    double ms = 0.0;

    auto key() const {
        return std::make_tuple(static_cast<int>(family), n_qubits, support, observable, param.j, param.k,
                               static_cast<int>(method));
    }
};

std::string num(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

template <class T>
T parse_int(const std::string& s, const std::string& flag) {
    T v{};
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw UsageError(flag, "bad integer '" + s + "'");
    return v;
}

// "a..b" or "a,b,c"
std::vector<int> parse_range(const std::string& s, const std::string& flag) {
    std::vector<int> out;
    if (auto dots = s.find(".."); dots != std::string::npos) {
        int a = parse_int<int>(s.substr(0, dots), flag), b = parse_int<int>(s.substr(dots + 2), flag);
        if (b < a) throw UsageError(flag, "empty range '" + s + "'");
        for (int v = a; v <= b; ++v) out.push_back(v);
    } else {
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(parse_int<int>(tok, flag));
    }
    if (out.empty()) throw UsageError(flag, "empty sweep");
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ParamId parse_param(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos) throw UsageError("--param", "expected j,k, got '" + s + "'");
    return {parse_int<int>(s.substr(0, comma), "--param"), parse_int<int>(s.substr(comma + 1), "--param")};
}

// Site tokens may be an integer, N (last register) or i (the --site-range
// value), each optionally followed by +d or -d.
int eval_site(const std::string& t, int n, std::optional<int> i) {
    std::size_t pos = 0;
    int base = 0;
    if (!t.empty() && (t[0] == 'N' || t[0] == 'i')) {
        if (t[0] == 'i') {
            if (!i) throw UsageError("--observable", "site 'i' needs --site-range");
            base = *i;
        } else {
            base = n;
        }
        pos = 1;
    } else {
        while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) ++pos;
        if (pos == 0) throw UsageError("--observable", "bad register '" + t + "'");
        base = parse_int<int>(t.substr(0, pos), "--observable");
    }
    if (pos == t.size()) return base;
    if (t[pos] != '+' && t[pos] != '-') throw UsageError("--observable", "bad register '" + t + "'");
    const int d = parse_int<int>(t.substr(pos + 1), "--observable");
    return t[pos] == '+' ? base + d : base - d;
}

std::string expand_sites(const std::string& s, int n, std::optional<int> i) {
    if (s.rfind("ising", 0) == 0 || s == "heisenberg") {
        if (i) throw UsageError("--site-range", "not valid with a Hamiltonian preset");
        return s;
    }
    std::string out;
    std::stringstream ss(s);
    std::string f;
    while (std::getline(ss, f, '*')) {
        auto colon = f.find(':');
        if (colon == std::string::npos) throw UsageError("--observable", "bad observable factor '" + f + "'");
        if (!out.empty()) out += '*';
        out += f.substr(0, colon + 1) + std::to_string(eval_site(f.substr(colon + 1), n, i));
    }
    return out;
}

std::vector<WeightedTerm> observable_terms(const std::string& pattern, int n, std::optional<int> i) {
    try {
        return parse_observable(expand_sites(pattern, n, i), n);
    } catch (const std::invalid_argument& e) {
        throw UsageError("--observable", e.what());
    }
}

Circuit make_circuit(Family f, int n) {
    try {
        return build_ansatz(f, n);
    } catch (const std::exception& e) {
        throw UsageError("--qubits", e.what());
    }
}

// X on one register, or X_i X_{i+1}
std::optional<int> single_x(const Observable& o) {
    if (o.sites().size() != 1) return std::nullopt;
    const auto& [s, w] = *o.sites().begin();
    if (w == PauliWeights{0.0, 1.0, 0.0, 0.0}) return s;
    return std::nullopt;
}

std::optional<int> adjacent_xx(const Observable& o) {
    if (o.sites().size() != 2) return std::nullopt;
    const auto s = o.support();
    if (s[1] != s[0] + 1 || !(o == Observable::XX(s[0]))) return std::nullopt;
    return s[0];
}

double closed_value(Family f, int n, const Observable& o, ParamId p) {
    const std::string what = "no closed form for " + family_name(f) + "(" + std::to_string(n) + ") " + canonical(o) +
                             " parameter (" + to_string(p) + ")";
    if (f == Family::qMPS) {
        if (auto i = single_x(o)) {
            if (auto v = closed::var_qmps(n, *i, p)) return *v;
        } else if (auto i = adjacent_xx(o); i && p == ParamId{1, 1}) {
            return closed::var_qmps_xx(n, *i);
        }
    } else if (f == Family::qTTN && p == ParamId{1, 1}) {
        if (auto i = single_x(o)) {
            if (*i == n) return closed::var_qttn_xn(log2_exact(n));
            if (*i == 1) return closed::var_qttn_x1(log2_exact(n));
        }
    }
    throw NotCovered(what);
}

struct Settings {
    Family family = Family::qMPS;
    Method method = Method::tn;
    std::uint64_t samples = 10000;
    std::uint64_t seed = 0;
    bool timing = false;
};

std::vector<RunRecord> evaluate(const Settings& st, const Circuit& c, const std::vector<WeightedTerm>& terms,
                                const std::vector<ParamId>& params) {
    std::vector<RunRecord> rows;
    for (const WeightedTerm& t : terms) {
        std::map<ParamId, double> all;
        if (st.method == Method::tn && params.size() > 1) {
            try {
                all = zx::contract_variance_all_params(c, t.term);
            } catch (const std::length_error& e) {
                throw UsageError("--method", std::string("tn: ") + e.what());
            }
        }
        for (ParamId p : params) {
            RunRecord r;
            r.family = st.family;
            r.n_qubits = c.n_qubits();
            r.observable = canonical(t.term);
            r.support = t.term.support();
            r.param = p;
            r.method = st.method;
            const double scale = t.coeff * t.coeff;
            const auto t0 = std::chrono::steady_clock::now();
            switch (st.method) {
                case Method::tn:
                    try {
                        r.variance = scale * (all.empty() ? zx::contract_variance_tn(c, t.term, p) : all.at(p));
                    } catch (const std::length_error& e) {
                        throw UsageError("--method", std::string("tn: ") + e.what());
                    }
                    break;
                case Method::closed: r.variance = scale * closed_value(st.family, c.n_qubits(), t.term, p); break;
                case Method::mc: {
                    const auto e = oracle::mc_variance(c, t.term, p, st.samples, st.seed);
                    r.variance = scale * e.value;
                    r.std_error = scale * e.std_error;
                    r.samples = st.samples;
                    r.seed = st.seed;
                    break;
                }
                case Method::grid:
                    try {
                        r.variance = scale * oracle::grid_variance(c, t.term, p).value;
                    } catch (const std::length_error& e) {
                        throw UsageError("--method", std::string("grid: ") + e.what());
                    }
                    break;
            }
            if (st.timing)
                r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

const char* kHeader = "ansatz,n_qubits,observable,param_j,param_k,method,variance,stderr,samples,seed,ms";

struct FitRow {
    std::string axis;
    std::size_t points = 0;
    closed::PowerLawFit fit;
};

void write_rows(std::ostream& os, const std::vector<RunRecord>& rows, const std::optional<FitRow>& fit,
                const std::string& format) {
    if (format == "json") {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const RunRecord& r : rows) {
            nlohmann::ordered_json o;
            o["ansatz"] = family_name(r.family);
            o["n_qubits"] = r.n_qubits;
            o["observable"] = r.observable;
            o["param_j"] = r.param.j;
            o["param_k"] = r.param.k;
            o["method"] = method_str(r.method);
            o["variance"] = r.variance;
            o["stderr"] = r.std_error;
            o["samples"] = r.samples;
            o["seed"] = r.seed;
            o["ms"] = r.ms;
            arr.push_back(std::move(o));
        }
        if (fit) {
            nlohmann::ordered_json o;
            o["fit_axis"] = fit->axis;
            o["fit_points"] = fit->points;
            o["exponent"] = fit->fit.exponent;
            o["prefactor"] = fit->fit.prefactor;
            o["r2"] = fit->fit.r2;
            arr.push_back(std::move(o));
        }
        os << arr.dump(2) << '\n';
        return;
    }
    os << kHeader << '\n';
    for (const RunRecord& r : rows) {
        os << family_name(r.family) << ',' << r.n_qubits << ',' << r.observable << ',' << r.param.j << ','
           << r.param.k << ',' << method_str(r.method) << ',' << num(r.variance) << ',' << num(r.std_error) << ','
           << r.samples << ',' << r.seed << ',' << num(r.ms) << '\n';
    }
    if (fit)
        os << "# fit axis=" << fit->axis << " points=" << fit->points << " exponent=" << num(fit->fit.exponent)
           << " prefactor=" << num(fit->fit.prefactor) << " r2=" << num(fit->fit.r2) << '\n';
}

std::uint64_t default_seed() {
    const char* env = std::getenv("PLATEAU_SEED");
    if (!env) return 0;
    return parse_int<std::uint64_t>(env, "PLATEAU_SEED");
}

struct CommonFlags {
    std::string ansatz, observable, method = "tn", format = "csv", out, seed;
    std::string qubits, param;
    std::string samples = "10000";
    bool timing = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool sweep) {
    cmd->add_option("--ansatz", f.ansatz, "qmps | qttn | qmera")->required();
    if (sweep) {
        cmd->add_option("--qubits", f.qubits, "register count N");
        cmd->add_option("--param", f.param, "parameter j,k");
    } else {
        cmd->add_option("--qubits", f.qubits, "register count N")->required();
        cmd->add_option("--param", f.param, "parameter j,k")->required();
    }
    cmd->add_option("--observable", f.observable, "P:i[*P:i...], ising:J,h or heisenberg; sites may use N and i")
        ->required();
    cmd->add_option("--method", f.method, "tn | closed | mc | grid");
    cmd->add_option("--samples", f.samples, "Monte Carlo samples");
    cmd->add_option("--seed", f.seed, "Monte Carlo seed (default $PLATEAU_SEED or 0)");
    cmd->add_option("--out", f.out, "write output here instead of stdout");
    cmd->add_option("--format", f.format, "csv | json");
    cmd->add_flag("--timing", f.timing, "fill the ms column with wall time");
}

Settings settings_from(const CommonFlags& f) {
    Settings st;
    try {
        st.family = parse_family(f.ansatz);
    } catch (const std::exception& e) {
        throw UsageError("--ansatz", e.what());
    }
    if (st.family == Family::custom) throw UsageError("--ansatz", "expected qmps|qttn|qmera");
    st.method = parse_method(f.method);
    st.samples = parse_int<std::uint64_t>(f.samples, "--samples");
    if (st.samples < 2) throw UsageError("--samples", "need at least 2 samples");
    st.seed = f.seed.empty() ? default_seed() : parse_int<std::uint64_t>(f.seed, "--seed");
    st.timing = f.timing;
    if (f.format != "csv" && f.format != "json") throw UsageError("--format", "expected csv|json, got '" + f.format + "'");
    return st;
}

ParamId checked_param(const Circuit& c, const std::string& s) {
    const ParamId p = parse_param(s);
    if (!c.gate_of(p))
        throw UsageError("--param", "(" + to_string(p) + ") not in " + family_name(c.family()) + "(" +
                                        std::to_string(c.n_qubits()) + ")");
    return p;
}

void emit(const CommonFlags& f, const std::vector<RunRecord>& rows, const std::optional<FitRow>& fit,
          std::ostream& out) {
    if (f.out.empty()) {
        write_rows(out, rows, fit, f.format);
        return;
    }
    std::ofstream file(f.out, std::ios::binary);
    if (!file) throw UsageError("--out", "cannot open '" + f.out + "'");
    write_rows(file, rows, fit, f.format);
}

int cmd_variance(const CommonFlags& f, std::ostream& out) {
    const Settings st = settings_from(f);
    const int n = parse_int<int>(f.qubits, "--qubits");
    const Circuit c = make_circuit(st.family, n);
    const auto terms = observable_terms(f.observable, n, std::nullopt);
    const ParamId p = checked_param(c, f.param);
    std::vector<RunRecord> rows;
    try {
        rows = evaluate(st, c, terms, {p});
    } catch (const NotCovered& e) {
        throw UsageError("--method", e.what());
    }
    std::sort(rows.begin(), rows.end(), [](const RunRecord& a, const RunRecord& b) { return a.key() < b.key(); });
    emit(f, rows, std::nullopt, out);
    return 0;
}

int cmd_scan(const CommonFlags& f, const std::string& qrange, const std::string& srange, bool all_params, bool fit,
             std::ostream& out, std::ostream& err) {
    const Settings st = settings_from(f);
    const int axes = !qrange.empty() + !srange.empty() + all_params;
    if (axes == 0) throw UsageError("--qubits-range", "scan needs --qubits-range, --site-range or --all-params");
    if (!qrange.empty() && !f.qubits.empty()) throw UsageError("--qubits", "conflicts with --qubits-range");
    if (all_params && !f.param.empty()) throw UsageError("--param", "conflicts with --all-params");
    if (!all_params && f.param.empty()) throw UsageError("--param", "required unless --all-params is given");
    if (qrange.empty() && f.qubits.empty()) throw UsageError("--qubits", "required unless --qubits-range is given");
    if (fit && qrange.empty() == srange.empty())
        throw UsageError("--fit", "needs exactly one of --qubits-range or --site-range");

    const std::vector<int> ns = qrange.empty() ? std::vector<int>{parse_int<int>(f.qubits, "--qubits")}
                                               : parse_range(qrange, "--qubits-range");
    std::optional<std::vector<int>> sites;
    if (!srange.empty()) sites = parse_range(srange, "--site-range");

    std::vector<RunRecord> rows;
    std::vector<std::pair<double, double>> points;
    for (int n : ns) {
        const Circuit c = make_circuit(st.family, n);
        std::vector<ParamId> params;
        if (all_params) {
            params = c.params();
        } else {
            params = {checked_param(c, f.param)};
        }
        const std::vector<std::optional<int>> is =
            sites ? std::vector<std::optional<int>>(sites->begin(), sites->end())
                  : std::vector<std::optional<int>>{std::nullopt};
        for (auto i : is) {
            const auto terms = observable_terms(f.observable, n, i);
            std::vector<RunRecord> got;
            if (st.method == Method::closed) {
                for (const auto& t : terms)
                    for (ParamId p : params) {
                        try {
                            auto one = evaluate(st, c, {t}, {p});
                            got.insert(got.end(), one.begin(), one.end());
                        } catch (const NotCovered& e) {
                            err << "note: skipped, " << e.what() << '\n';
                        }
                    }
            } else {
                got = evaluate(st, c, terms, params);
            }
            for (const RunRecord& r : got) {
                if (fit && r.variance > 0.0) points.emplace_back(i ? *i : n, r.variance);
                rows.push_back(r);
            }
        }
    }
    if (rows.empty()) throw UsageError("--method", "empty sweep: no instance produced a value");
    std::sort(rows.begin(), rows.end(), [](const RunRecord& a, const RunRecord& b) { return a.key() < b.key(); });
    std::optional<FitRow> fr;
    if (fit) {
        std::sort(points.begin(), points.end());
        try {
            fr = FitRow{qrange.empty() ? "site" : "n_qubits", points.size(), closed::fit_power_law(points)};
        } catch (const std::invalid_argument& e) {
            throw UsageError("--fit", e.what());
        }
    }
    emit(f, rows, fr, out);
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gradient variance of qMPS / qTTN / qMERA circuits"};
    app.name("plateau");
    app.require_subcommand(1);

    CommonFlags vf, sf;
    auto* variance = app.add_subcommand("variance", "variance of one gradient component");
    add_common(variance, vf, false);

    auto* scan = app.add_subcommand("scan", "sweep qubits, sites or parameters");
    add_common(scan, sf, true);
    std::string qrange, srange;
    bool all_params = false, fit = false;
    scan->add_option("--qubits-range", qrange, "a..b or a,b,c");
    scan->add_option("--site-range", srange, "a..b or a,b,c; substituted for i in --observable");
    scan->add_flag("--all-params", all_params, "every parameter of the circuit");
    scan->add_flag("--fit", fit, "append a power-law fit over the swept axis");

    auto* verify = app.add_subcommand("verify", "cross-method agreement checks");
    std::string level;
    verify->add_option("--level", level, "fast | full")->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (variance->parsed()) return cmd_variance(vf, out);
        if (scan->parsed()) return cmd_scan(sf, qrange, srange, all_params, fit, out, err);
        if (level != "fast" && level != "full") throw UsageError("--level", "expected fast|full, got '" + level + "'");
        return run_verify(level == "full", out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace plateau::cli
