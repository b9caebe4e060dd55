#include "plateau/observable.hpp"

#include <charconv>
#include <stdexcept>

namespace plateau {

Observable Observable::pauli(char p, int site) {
    PauliWeights w{0.0, 0.0, 0.0, 0.0};
    switch (p) {
        case 'X': w.k1 = 1.0; break;
        case 'Y': w.k2 = 1.0; break;
        case 'Z': w.k3 = 1.0; break;
        case 'I': w.k0 = 1.0; break;
        default: throw std::invalid_argument(std::string("unknown Pauli '") + p + "'");
    }
    Observable o;
    if (p != 'I') o.sites_[site] = w;
    return o;
}

Observable Observable::X_on(const std::vector<int>& sites) {
    Observable o;
    for (int s : sites) o = o.times(X(s));
    return o;
}

Observable& Observable::set(int site, PauliWeights w) {
    if (w.is_identity())
        sites_.erase(site);
    else
        sites_[site] = w;
    return *this;
}

Observable Observable::times(const Observable& o) const {
    Observable r = *this;
    for (const auto& [s, w] : o.sites_) {
        if (r.sites_.count(s)) throw std::invalid_argument("observable factors overlap on register " + std::to_string(s));
        r.sites_[s] = w;
    }
    return r;
}

std::vector<int> Observable::support() const {
    std::vector<int> s;
    for (const auto& [i, w] : sites_) s.push_back(i);
    return s;
}

int Observable::max_site() const { return sites_.empty() ? 0 : sites_.rbegin()->first; }

bool Observable::is_trivial() const { return sites_.empty(); }

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view s, std::string_view what) {
    s = trim(s);
    // std::from_chars for double is not available in every libstdc++ this builds with.
    std::string t(s);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (t.empty() || used != t.size()) throw std::invalid_argument("bad number '" + t + "' in " + std::string(what));
    return v;
}

}  // namespace

Observable parse_product(std::string_view s, int n_qubits) {
    Observable o;
    s = trim(s);
    if (s.empty()) throw std::invalid_argument("empty observable");
    while (true) {
        auto star = s.find('*');
        std::string_view f = trim(s.substr(0, star));
        if (f.size() < 3 || f[1] != ':') throw std::invalid_argument("bad observable factor '" + std::string(f) + "'");
        char p = f[0];
        if (p != 'X' && p != 'Y' && p != 'Z')
            throw std::invalid_argument("bad Pauli '" + std::string(1, p) + "' in observable");
        int site = 0;
        auto digits = f.substr(2);
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), site);
        if (ec != std::errc() || ptr != digits.data() + digits.size())
            throw std::invalid_argument("bad register '" + std::string(digits) + "' in observable");
        if (site < 1 || site > n_qubits)
            throw std::invalid_argument("observable register " + std::to_string(site) + " outside 1.." +
                                        std::to_string(n_qubits));
        o = o.times(Observable::pauli(p, site));
        if (star == std::string_view::npos) break;
        s = s.substr(star + 1);
    }
    return o;
}

std::vector<WeightedTerm> ising_terms(int n, double J, double h) {
    std::vector<WeightedTerm> t;
    for (int i = 1; i < n; ++i) t.push_back({-J, Observable::Z(i).times(Observable::Z(i + 1))});
    for (int i = 1; i <= n; ++i) t.push_back({-h, Observable::X(i)});
    return t;
}

std::vector<WeightedTerm> heisenberg_terms(int n) {
    std::vector<WeightedTerm> t;
    for (int i = 1; i < n; ++i)
        for (char p : {'X', 'Y', 'Z'}) t.push_back({0.25, Observable::pauli(p, i).times(Observable::pauli(p, i + 1))});
    return t;
}

std::vector<WeightedTerm> parse_observable(std::string_view s, int n_qubits) {
    s = trim(s);
    if (s.rfind("ising:", 0) == 0) {
        auto args = s.substr(6);
        auto comma = args.find(',');
        if (comma == std::string_view::npos) throw std::invalid_argument("ising preset needs 'ising:J,h'");
        double J = parse_double(args.substr(0, comma), "ising:J,h");
        double h = parse_double(args.substr(comma + 1), "ising:J,h");
        return ising_terms(n_qubits, J, h);
    }
    if (s == "heisenberg") return heisenberg_terms(n_qubits);
    return {WeightedTerm{1.0, parse_product(s, n_qubits)}};
}

std::string canonical(const Observable& o) {
    std::string out;
    for (const auto& [site, w] : o.sites()) {
        char p = 0;
        if (w == PauliWeights{0, 1, 0, 0})
            p = 'X';
        else if (w == PauliWeights{0, 0, 1, 0})
            p = 'Y';
        else if (w == PauliWeights{0, 0, 0, 1})
            p = 'Z';
        else
            throw std::invalid_argument("canonical: register " + std::to_string(site) + " is not a single Pauli");
        if (!out.empty()) out += '*';
        out += p;
        out += ':';
        out += std::to_string(site);
    }
    return out.empty() ? "I" : out;
}

}  // namespace plateau
