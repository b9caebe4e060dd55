#include "plateau/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include "json.hpp"

namespace plateau {

std::string family_name(Family f) {
    switch (f) {
        case Family::qMPS: return "qMPS";
        case Family::qTTN: return "qTTN";
        case Family::qMERA: return "qMERA";
        case Family::custom: return "custom";
    }
    return "custom";
}

Family parse_family(std::string_view s) {
    std::string t(s);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (t == "qmps") return Family::qMPS;
    if (t == "qttn") return Family::qTTN;
    if (t == "qmera") return Family::qMERA;
    if (t == "custom") return Family::custom;
    throw std::invalid_argument("unknown ansatz family '" + std::string(s) + "'");
}

std::string to_string(ParamId p) { return std::to_string(p.j) + "," + std::to_string(p.k); }

bool is_power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

int log2_exact(int n) {
    if (!is_power_of_two(n)) throw std::invalid_argument("not a power of two: " + std::to_string(n));
    int l = 0;
    while ((1 << l) < n) ++l;
    return l;
}

Circuit::Circuit(Family family, int n_qubits, std::vector<Gate> gates)
    : family_(family), n_(n_qubits), gates_(std::move(gates)) {
    if (n_ < 1) throw std::invalid_argument("circuit needs at least one register");
    std::vector<int> seen(static_cast<std::size_t>(n_) + 1, 0);
    auto check = [&](int w) {
        if (w < 1 || w > n_) throw std::invalid_argument("gate register " + std::to_string(w) + " out of range");
    };
    for (std::size_t g = 0; g < gates_.size(); ++g) {
        Gate& gate = gates_[g];
        check(gate.wire);
        if (gate.kind == GateKind::CNOT) {
            check(gate.target);
            if (gate.target == gate.wire) throw std::invalid_argument("CNOT control equals target");
        } else {
            gate.target = 0;
        }
        if (gate.is_rotation()) {
            gate.param = {gate.wire, ++seen[static_cast<std::size_t>(gate.wire)]};
            params_.push_back(gate.param);
            param_gate_.push_back(g);
        } else {
            gate.param = {};
        }
    }
}

std::optional<std::size_t> Circuit::param_index(ParamId p) const {
    // params_ is ordered by circuit position, not by (j,k), so search linearly.
    for (std::size_t i = 0; i < params_.size(); ++i)
        if (params_[i] == p) return i;
    return std::nullopt;
}

std::optional<std::size_t> Circuit::gate_of(ParamId p) const {
    auto i = param_index(p);
    if (!i) return std::nullopt;
    return param_gate_[*i];
}

std::size_t Circuit::cnot_count() const {
    return static_cast<std::size_t>(
        std::count_if(gates_.begin(), gates_.end(), [](const Gate& g) { return g.kind == GateKind::CNOT; }));
}

bool Circuit::operator==(const Circuit& o) const {
    if (family_ != o.family_ || n_ != o.n_ || gates_.size() != o.gates_.size()) return false;
    for (std::size_t i = 0; i < gates_.size(); ++i) {
        const Gate& a = gates_[i];
        const Gate& b = o.gates_[i];
        if (a.kind != b.kind || a.wire != b.wire || a.target != b.target || a.param != b.param || a.layer != b.layer)
            return false;
    }
    return true;
}

namespace {

Gate rot(GateKind k, int w, int layer) { return Gate{k, w, 0, {}, layer}; }
Gate cx(int c, int t, int layer) { return Gate{GateKind::CNOT, c, t, {}, layer}; }

// R_X pair, R_Z pair, CNOT with control on the upper register.
void entangler(std::vector<Gate>& g, int a, int b, int layer) {
    g.push_back(rot(GateKind::RX, a, layer));
    g.push_back(rot(GateKind::RX, b, layer));
    g.push_back(rot(GateKind::RZ, a, layer));
    g.push_back(rot(GateKind::RZ, b, layer));
    g.push_back(cx(a, b, layer));
}

void trailing(std::vector<Gate>& g, int w, int layer) {
    g.push_back(rot(GateKind::RX, w, layer));
    g.push_back(rot(GateKind::RZ, w, layer));
}

std::vector<Gate> build_qmps(int N) {
    std::vector<Gate> g;
    for (int j = 1; j < N; ++j) {
        entangler(g, j, j + 1, j);
        trailing(g, j, j);
        if (j == N - 1) trailing(g, N, j);
    }
    return g;
}

void ttn_rec(std::vector<Gate>& g, int first, int size, int level) {
    if (size == 2) {
        entangler(g, first, first + 1, level);
        trailing(g, first, level);
        trailing(g, first + 1, level);
        return;
    }
    int half = size / 2;
    entangler(g, first, first + half, level);
    ttn_rec(g, first, half, level + 1);
    ttn_rec(g, first + half, half, level + 1);
}

// Disentangler pairs of layer m (2 <= m <= n): control offset+1 + q*4*offset,
// target two offsets further down, offset = 2^{n-m}.
std::vector<std::pair<int, int>> mera_disentanglers(int N, int n, int m) {
    std::vector<std::pair<int, int>> out;
    const int off = 1 << (n - m);
    for (int c = off + 1; c + 2 * off <= N; c += 4 * off) out.emplace_back(c, c + 2 * off);
    return out;
}

std::vector<Gate> build_qmera(int N) {
    const int n = log2_exact(N);
    std::vector<Gate> g;
    for (int l = 1; l <= n; ++l) {
        const int G = 1 << (n - l + 1);
        for (int q = 0; q < (1 << (l - 1)); ++q) entangler(g, q * G + 1, q * G + G / 2 + 1, l);
        if (l >= 2)
            for (auto [a, b] : mera_disentanglers(N, n, l)) entangler(g, a, b, l);
    }
    for (int w = 1; w <= N; ++w) trailing(g, w, n + 1);
    return g;
}

}  // namespace

Circuit build_ansatz(Family family, int n_qubits) {
    if (n_qubits < 2) throw std::invalid_argument("ansatz needs at least 2 qubits, got " + std::to_string(n_qubits));
    switch (family) {
        case Family::qMPS: return Circuit(family, n_qubits, build_qmps(n_qubits));
        case Family::qTTN:
            if (!is_power_of_two(n_qubits))
                throw std::invalid_argument("qTTN needs a power-of-two qubit count, got " + std::to_string(n_qubits));
            {
                std::vector<Gate> g;
                ttn_rec(g, 1, n_qubits, 1);
                return Circuit(family, n_qubits, std::move(g));
            }
        case Family::qMERA:
            if (!is_power_of_two(n_qubits))
                throw std::invalid_argument("qMERA needs a power-of-two qubit count, got " + std::to_string(n_qubits));
            return Circuit(family, n_qubits, build_qmera(n_qubits));
        case Family::custom: break;
    }
    throw std::invalid_argument("build_ansatz: custom circuits have no builder");
}

std::size_t expected_param_count(Family family, int N) {
    switch (family) {
        case Family::qMPS: return static_cast<std::size_t>(6 * (N - 2) + 8);
        case Family::qTTN: {
            // T(1) = 8, T(n) = 4 + 2 T(n-1)
            std::size_t t = 8;
            for (int l = 2; l <= log2_exact(N); ++l) t = 4 + 2 * t;
            return t;
        }
        case Family::qMERA: {
            // N-1 coarse-graining blocks, 2^{m-2} disentanglers in layer m, closing R_X R_Z layer
            const int n = log2_exact(N);
            std::size_t blocks = static_cast<std::size_t>(N - 1);
            for (int m = 2; m <= n; ++m) blocks += static_cast<std::size_t>(1) << (m - 2);
            return 4 * blocks + 2 * static_cast<std::size_t>(N);
        }
        case Family::custom: break;
    }
    throw std::invalid_argument("expected_param_count: custom family");
}

std::string to_json(const Circuit& c) {
    nlohmann::ordered_json j;
    j["family"] = family_name(c.family());
    j["n_qubits"] = c.n_qubits();
    auto gates = nlohmann::ordered_json::array();
    for (const Gate& g : c.gates()) {
        nlohmann::ordered_json e;
        switch (g.kind) {
            case GateKind::RX: e["kind"] = "RX"; break;
            case GateKind::RZ: e["kind"] = "RZ"; break;
            case GateKind::CNOT: e["kind"] = "CNOT"; break;
            case GateKind::H: e["kind"] = "H"; break;
        }
        e["targets"] = g.kind == GateKind::CNOT ? std::vector<int>{g.wire, g.target} : std::vector<int>{g.wire};
        if (g.is_rotation())
            e["param"] = {g.param.j, g.param.k};
        else
            e["param"] = nullptr;
        gates.push_back(std::move(e));
    }
    j["gates"] = std::move(gates);
    return j.dump();
}

}  // namespace plateau
