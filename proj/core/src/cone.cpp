#include "plateau/cone.hpp"

#include <algorithm>
#include <map>

namespace plateau {

std::size_t CausalCone::gate_count() const {
    return static_cast<std::size_t>(std::count(in_cone.begin(), in_cone.end(), true));
}

namespace {

// Bits for the non-identity Paulis that may appear on a register.
constexpr unsigned kX = 1, kY = 2, kZ = 4;

unsigned site_mask(const PauliWeights& w) {
    unsigned m = 0;
    if (w.k1 != 0.0) m |= kX;
    if (w.k2 != 0.0) m |= kY;
    if (w.k3 != 0.0) m |= kZ;
    return m;
}

// Pauli <-> symplectic bits (x, z); index 0 is the identity.
constexpr int kXs[4] = {0, 1, 1, 0};
constexpr int kZs[4] = {0, 0, 1, 1};

int from_bits(int x, int z) { return x ? (z ? 2 : 1) : (z ? 3 : 0); }
unsigned bit_of(int p) { return p == 0 ? 0u : (1u << (p - 1)); }

}  // namespace

CausalCone causal_cone(const Circuit& c, const Observable& obs) {
    CausalCone cone;
    const auto& gates = c.gates();
    cone.in_cone.assign(gates.size(), false);
    std::vector<unsigned> mask(static_cast<std::size_t>(c.n_qubits()) + 1, 0);
    for (const auto& [s, w] : obs.sites()) {
        mask[static_cast<std::size_t>(s)] = site_mask(w);
        if (mask[static_cast<std::size_t>(s)]) cone.registers.insert(s);
    }
    for (std::size_t gi = gates.size(); gi-- > 0;) {
        const Gate& g = gates[gi];
        unsigned& m = mask[static_cast<std::size_t>(g.wire)];
        switch (g.kind) {
            case GateKind::RZ:
                if (m & (kX | kY)) {
                    cone.in_cone[gi] = true;
                    m = (m & kZ) | kX | kY;
                }
                break;
            case GateKind::RX:
                if (m & (kY | kZ)) {
                    cone.in_cone[gi] = true;
                    m = (m & kX) | kY | kZ;
                }
                break;
            case GateKind::H:
                if (m) {
                    cone.in_cone[gi] = true;
                    m = (m & kY) | ((m & kX) ? kZ : 0u) | ((m & kZ) ? kX : 0u);
                }
                break;
            case GateKind::CNOT: {
                unsigned& mt = mask[static_cast<std::size_t>(g.target)];
                unsigned nc = 0, nt = 0;
                bool moved = false;
                for (int a = 0; a < 4; ++a) {
                    if (a && !(m & bit_of(a))) continue;
                    for (int b = 0; b < 4; ++b) {
                        if (b && !(mt & bit_of(b))) continue;
                        // CNOT conjugation: x_t ^= x_c, z_c ^= z_t
                        int xc = kXs[a], zc = kZs[a] ^ kZs[b];
                        int xt = kXs[b] ^ kXs[a], zt = kZs[b];
                        int a2 = from_bits(xc, zc), b2 = from_bits(xt, zt);
                        if (a2 != a || b2 != b) moved = true;
                        nc |= bit_of(a2);
                        nt |= bit_of(b2);
                    }
                }
                if (moved) cone.in_cone[gi] = true;
                m = nc;
                mt = nt;
                if (nc) cone.registers.insert(g.wire);
                if (nt) cone.registers.insert(g.target);
                break;
            }
        }
    }
    return cone;
}

CausalCone light_cone(const Circuit& c, const Observable& obs) {
    CausalCone cone;
    const auto& gates = c.gates();
    cone.in_cone.assign(gates.size(), false);
    for (int s : obs.support()) cone.registers.insert(s);
    for (std::size_t gi = gates.size(); gi-- > 0;) {
        const Gate& g = gates[gi];
        if (g.kind == GateKind::CNOT) {
            if (cone.registers.count(g.wire) || cone.registers.count(g.target)) {
                cone.in_cone[gi] = true;
                cone.registers.insert(g.wire);
                cone.registers.insert(g.target);
            }
        } else if (cone.registers.count(g.wire)) {
            cone.in_cone[gi] = true;
        }
    }
    return cone;
}

bool variance_is_zero(const Circuit& c, const Observable& obs, ParamId p) {
    auto g = c.gate_of(p);
    if (!g) throw std::invalid_argument("parameter (" + to_string(p) + ") not in circuit");
    return !causal_cone(c, obs).contains_gate(*g);
}

bool variance_is_zero(Family family, int n_qubits, const Observable& obs, ParamId p) {
    return variance_is_zero(build_ansatz(family, n_qubits), obs, p);
}

Restriction restrict_to_light_cone(const Circuit& c, const Observable& obs, bool cone_gates_only) {
    const CausalCone cone = light_cone(c, obs);
    Restriction r;
    r.registers.assign(cone.registers.begin(), cone.registers.end());
    std::map<int, int> relabel;
    for (std::size_t i = 0; i < r.registers.size(); ++i) relabel[r.registers[i]] = static_cast<int>(i) + 1;

    std::vector<Gate> kept;
    const auto& gates = c.gates();
    for (std::size_t gi = 0; gi < gates.size(); ++gi) {
        const Gate& g = gates[gi];
        if (!relabel.count(g.wire)) continue;
        if (cone_gates_only && !cone.contains_gate(gi)) continue;
        if (g.kind == GateKind::CNOT && !relabel.count(g.target)) continue;
        Gate ng = g;
        ng.wire = relabel[g.wire];
        if (g.kind == GateKind::CNOT) ng.target = relabel[g.target];
        kept.push_back(ng);
        r.kept_gates.push_back(gi);
        if (g.is_rotation()) r.original_params.push_back(g.param);
    }
    const int w = static_cast<int>(r.registers.size());
    r.circuit = Circuit(c.family(), std::max(w, 1), std::move(kept));
    for (const auto& [s, pw] : obs.sites()) r.observable.set(relabel.at(s), pw);
    return r;
}

}  // namespace plateau
