#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "plateau/circuit.hpp"
#include "plateau/observable.hpp"

namespace plateau {

struct CausalCone {
    std::set<int> registers;
    std::vector<bool> in_cone;  // per gate index

    bool contains_gate(std::size_t g) const { return g < in_cone.size() && in_cone[g]; }
    std::size_t gate_count() const;
};

// Backward traversal tracking, per register, which Pauli components of the
// Heisenberg-evolved observable can be present. A rotation is in the cone only
// if its generator fails to commute with one of them, so for example an R_Z
// feeding a CNOT control whose register is later discarded is excluded.
CausalCone causal_cone(const Circuit& c, const Observable& obs);

// Plain light cone: any gate touching a register that is already in the cone
// joins it, and a CNOT pulls in both registers.
CausalCone light_cone(const Circuit& c, const Observable& obs);

bool variance_is_zero(const Circuit& c, const Observable& obs, ParamId p);
bool variance_is_zero(Family family, int n_qubits, const Observable& obs, ParamId p);

// Sub-circuit on the light-cone registers (relabelled 1..w in increasing order).
// By default every gate whose registers all survive is kept, so each register
// still ends on its own rotations; with cone_gates_only the gates after a
// register leaves the cone are dropped too. Either way the expectation of obs
// is unchanged as a function of the surviving parameters.
struct Restriction {
    Circuit circuit;
    Observable observable;
    std::vector<int> registers;            // new index r-1 -> original register
    std::vector<std::size_t> kept_gates;   // new gate index -> original gate index
    // Original ParamId of every parameter of the restricted circuit, in order.
    std::vector<ParamId> original_params;
};

Restriction restrict_to_light_cone(const Circuit& c, const Observable& obs, bool cone_gates_only = false);

}  // namespace plateau
