#pragma once

#include <Eigen/Core>
#include <map>

#include "plateau/circuit.hpp"
#include "plateau/observable.hpp"

namespace plateau::zx {

// Coefficients over v13 = [1,0,1], v2 = [0,1,0], v13m = [1,0,-1].
struct RegisterVector {
    double c13 = 0.0;
    double c2 = 0.0;
    double c13m = 0.0;

    static RegisterVector v13() { return {1.0, 0.0, 0.0}; }
    static RegisterVector v2() { return {0.0, 1.0, 0.0}; }
    static RegisterVector v13m() { return {0.0, 0.0, 1.0}; }

    static RegisterVector from_standard(const Eigen::Vector3d& s);
    Eigen::Vector3d to_standard() const;
    Eigen::Vector3d coeffs() const { return {c13, c2, c13m}; }
    static RegisterVector from_coeffs(const Eigen::Vector3d& c) { return {c[0], c[1], c[2]}; }

    RegisterVector operator+(const RegisterVector& o) const { return {c13 + o.c13, c2 + o.c2, c13m + o.c13m}; }
    RegisterVector operator*(double s) const { return {s * c13, s * c2, s * c13m}; }
    bool operator==(const RegisterVector&) const = default;
};

using TransferMap = Eigen::Matrix3d;
using BlockMap = Eigen::Matrix<double, 9, 9>;
// Pair of register vectors in the standard basis, P(a, b).
using PairTensor = Eigen::Matrix3d;

// 1/4 [[1,1,1],[1,1,-1],[1,-1,1]]
const Eigen::Matrix3d& m_matrix();
const TransferMap& m_up();
const TransferMap& m_down();

// 2M in the v-basis.
RegisterVector apply_m_edge(const RegisterVector& v);
RegisterVector transfer_up(const RegisterVector& v);
RegisterVector transfer_down(const RegisterVector& v);

// CNOT gadget pulled back through its two Hadamard legs: P -> (2M x 2M)(4M o P),
// flattened as index 3a+b. Built once by contracting the primitive tensors and
// checked against the pair identities; throws std::logic_error if they fail.
const BlockMap& block_map();
PairTensor apply_block(const PairTensor& p);
PairTensor outer(const RegisterVector& top, const RegisterVector& bottom);

// M_Up / M_Down rebuilt from block_map(): the partner register enters as v13
// and its output is closed with (3,1,1)/4 for up (vector crosses to the other
// leg) or (2,1,2)/4 for down (vector stays on its leg).
TransferMap transfer_from_block(bool up);

// Boundary vector of a measured register. hadamard_frame is true when the
// register's last spider sits behind an odd number of Hadamards.
Eigen::Vector3d observable_vector(const PauliWeights& w, bool hadamard_frame);
// 2 k0^2 v13 + 2 (k1^2 + k3^2) v2 + 2 k2^2 v13m, the textbook form. Not used by
// the contraction; kept for comparison tests.
Eigen::Vector3d textbook_observable_vector(const PauliWeights& w);

// Global scalar applied to every contraction, fixed so that the two-qubit
// block with X_1 and parameter (1,1) gives 11/64.
double calibration();

struct NetworkInfo {
    int width = 0;        // registers in the contracted light cone
    int spiders = 0;
    int hadamard_edges = 0;
    int cnots = 0;
};

// Exact Var[d_{j,k} <obs>] over uniform angles for a product observable.
double contract_variance_tn(const Circuit& c, const Observable& obs, ParamId p);
double contract_variance_tn(Family family, int n_qubits, const Observable& obs, ParamId p);

// One forward and one backward sweep shared by all parameters. Parameters
// outside the light cone map to 0.
std::map<ParamId, double> contract_variance_all_params(const Circuit& c, const Observable& obs);
std::map<ParamId, double> contract_variance_all_params(Family family, int n_qubits, const Observable& obs);

NetworkInfo network_info(const Circuit& c, const Observable& obs);

// Dense contraction is refused above this many registers.
inline constexpr int kMaxWidth = 14;

}  // namespace plateau::zx
