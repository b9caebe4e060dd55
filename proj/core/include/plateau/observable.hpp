#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace plateau {

// sigma = k0 I + k1 X + k2 Y + k3 Z
struct PauliWeights {
    double k0 = 1.0;
    double k1 = 0.0;
    double k2 = 0.0;
    double k3 = 0.0;
    bool operator==(const PauliWeights&) const = default;
    bool is_identity() const { return k1 == 0.0 && k2 == 0.0 && k3 == 0.0 && k0 == 1.0; }
};

// Tensor product of per-site operators; absent registers are identity.
class Observable {
public:
    Observable() = default;

    static Observable pauli(char p, int site);
    static Observable X(int i) { return pauli('X', i); }
    static Observable Y(int i) { return pauli('Y', i); }
    static Observable Z(int i) { return pauli('Z', i); }
    static Observable XX(int i) { return X(i).times(X(i + 1)); }
    // X on every listed register.
    static Observable X_on(const std::vector<int>& sites);

    Observable& set(int site, PauliWeights w);
    // Product with another observable on disjoint sites. Throws on overlap.
    Observable times(const Observable& o) const;

    const std::map<int, PauliWeights>& sites() const { return sites_; }
    std::vector<int> support() const;
    int max_site() const;
    bool is_trivial() const;
    bool operator==(const Observable&) const = default;

private:
    std::map<int, PauliWeights> sites_;
};

struct WeightedTerm {
    double coeff = 1.0;
    Observable term;
};

// "X:3", "X:2*Z:5". Sites must lie in [1, n_qubits]. Throws std::invalid_argument.
Observable parse_product(std::string_view s, int n_qubits);
// Product grammar plus presets "ising:J,h" and "heisenberg" (open chain).
std::vector<WeightedTerm> parse_observable(std::string_view s, int n_qubits);
// Inverse of parse_product for single-Pauli sites; sorted by register.
std::string canonical(const Observable& o);

std::vector<WeightedTerm> ising_terms(int n_qubits, double J, double h);
std::vector<WeightedTerm> heisenberg_terms(int n_qubits);

}  // namespace plateau
