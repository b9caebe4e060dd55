#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "plateau/circuit.hpp"
#include "plateau/observable.hpp"

namespace plateau::oracle {

using cplx = std::complex<double>;

inline constexpr int kMaxQubits = 20;
inline constexpr std::size_t kMaxGridParams = 14;
// Registers allowed for the four-copy propagation used past the grid cap.
inline constexpr int kMaxMomentQubits = 6;

class StateVector {
public:
    explicit StateVector(int n_qubits);  // |0...0>

    int n_qubits() const { return n_; }
    const std::vector<cplx>& amplitudes() const { return amp_; }
    std::vector<cplx>& amplitudes() { return amp_; }

    void rx(int wire, double theta);
    void rz(int wire, double theta);
    void h(int wire);
    void cnot(int control, int target);
    void apply(const Gate& g, double theta);
    // 2x2 matrix on one register, row-major {a00, a01, a10, a11}.
    void apply_1q(int wire, const cplx (&u)[4]);

    double norm() const;
    // <psi| prod_s sigma_s |psi>
    double expectation(const Observable& obs) const;

private:
    int n_;
    std::vector<cplx> amp_;
};

// Runs the whole circuit on |0...0>.
StateVector simulate(const Circuit& c, const std::vector<double>& theta);
double expectation(const Circuit& c, const Observable& obs, const std::vector<double>& theta);
double expectation(const Circuit& c, const std::vector<WeightedTerm>& h, const std::vector<double>& theta);

// (<H>(theta + pi/2 e_p) - <H>(theta - pi/2 e_p)) / 2
double param_shift_grad(const Circuit& c, const Observable& obs, const std::vector<double>& theta, ParamId p);

enum class Method { mc, grid };

struct VarianceEstimate {
    double value = 0.0;
    double std_error = 0.0;
    double mean = 0.0;
    double mean_stderr = 0.0;
    Method method = Method::grid;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

// Uniform angle in [-pi, pi) for sample `index`, slot `slot`; a pure function
// of its arguments so sample order and threading never change results.
double sample_angle(std::uint64_t seed, std::uint64_t index, std::size_t slot);

// Unbiased sample variance of the parameter-shift gradient over
// theta ~ U[-pi, pi]^M. Simulation is restricted to the light cone.
VarianceEstimate mc_variance(const Circuit& c, const Observable& obs, ParamId p, std::uint64_t samples,
                             std::uint64_t seed);

// Exact uniform average using nodes {-2pi/3, 0, 2pi/3} per angle. Enumerates the
// grid when the light cone holds at most kMaxGridParams parameters; above that
// the same quadrature is evaluated gate by gate on four copies of the state,
// which needs the cone to span at most kMaxMomentQubits registers. Throws
// std::length_error when neither applies.
VarianceEstimate grid_variance(const Circuit& c, const Observable& obs, ParamId p);
// Force one evaluation strategy (for cross-checks).
VarianceEstimate grid_variance_enumerated(const Circuit& c, const Observable& obs, ParamId p);
VarianceEstimate grid_variance_propagated(const Circuit& c, const Observable& obs, ParamId p);
// True when grid_variance can handle the instance.
bool grid_feasible(const Circuit& c, const Observable& obs);

std::string method_name(Method m);

}  // namespace plateau::oracle
