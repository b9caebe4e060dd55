#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace plateau {

enum class Family { qMPS, qTTN, qMERA, custom };

std::string family_name(Family f);
// Accepts "qmps", "qMPS", "qttn", ... Throws std::invalid_argument.
Family parse_family(std::string_view s);

// (register j, k-th rotation on that register in circuit order), both 1-based.
struct ParamId {
    int j = 0;
    int k = 0;
    auto operator<=>(const ParamId&) const = default;
};

std::string to_string(ParamId p);

enum class GateKind { RX, RZ, CNOT, H };

struct Gate {
    GateKind kind = GateKind::H;
    int wire = 0;    // rotation / H register, or CNOT control
    int target = 0;  // CNOT target, 0 otherwise
    ParamId param{}; // rotations only
    int layer = 0;   // block index (qMPS) or layer index (qTTN/qMERA)

    bool is_rotation() const { return kind == GateKind::RX || kind == GateKind::RZ; }
    bool touches(int w) const { return wire == w || (kind == GateKind::CNOT && target == w); }
};

class Circuit {
public:
    Circuit() = default;
    // Validates register indices and assigns ParamIds to rotations in order.
    Circuit(Family family, int n_qubits, std::vector<Gate> gates);

    Family family() const { return family_; }
    int n_qubits() const { return n_; }
    const std::vector<Gate>& gates() const { return gates_; }

    // Rotation parameters in circuit order; position = index into a theta vector.
    const std::vector<ParamId>& params() const { return params_; }
    std::size_t param_count() const { return params_.size(); }
    std::optional<std::size_t> param_index(ParamId p) const;
    // Gate index of the rotation carrying p.
    std::optional<std::size_t> gate_of(ParamId p) const;
    std::size_t cnot_count() const;

    bool operator==(const Circuit& o) const;

private:
    Family family_ = Family::custom;
    int n_ = 0;
    std::vector<Gate> gates_;
    std::vector<ParamId> params_;
    std::vector<std::size_t> param_gate_;
};

// qMPS: N >= 2. qTTN, qMERA: N = 2^n, n >= 1. Throws std::invalid_argument.
Circuit build_ansatz(Family family, int n_qubits);

// Parameter count from the recursive definitions, computed without building a circuit.
std::size_t expected_param_count(Family family, int n_qubits);

bool is_power_of_two(int n);
int log2_exact(int n);

// {family, n_qubits, gates:[{kind, targets, param:[j,k]}]}
std::string to_json(const Circuit& c);

}  // namespace plateau
