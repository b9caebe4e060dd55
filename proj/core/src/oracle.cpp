#include "plateau/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "plateau/cone.hpp"

namespace plateau::oracle {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNodes[3] = {-2.0 * kPi / 3.0, 0.0, 2.0 * kPi / 3.0};

void sigma_matrix(const PauliWeights& w, cplx (&m)[4]) {
    const cplx i(0.0, 1.0);
    m[0] = w.k0 + w.k3;
    m[1] = w.k1 - i * w.k2;
    m[2] = w.k1 + i * w.k2;
    m[3] = w.k0 - w.k3;
}

void rotation_matrix(GateKind k, double theta, cplx (&m)[4]) {
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    if (k == GateKind::RX) {
        m[0] = c;
        m[1] = cplx(0.0, -s);
        m[2] = cplx(0.0, -s);
        m[3] = c;
    } else {
        m[0] = cplx(c, -s);
        m[1] = 0.0;
        m[2] = 0.0;
        m[3] = cplx(c, s);
    }
}

// Apply a 2x2 matrix to bit `b` of a flat amplitude array.
void apply_bit(std::vector<cplx>& a, int b, const cplx (&u)[4]) {
    const std::size_t stride = std::size_t{1} << b;
    for (std::size_t base = 0; base < a.size(); base += 2 * stride)
        for (std::size_t i = base; i < base + stride; ++i) {
            const cplx x0 = a[i], x1 = a[i + stride];
            a[i] = u[0] * x0 + u[1] * x1;
            a[i + stride] = u[2] * x0 + u[3] * x1;
        }
}

void cnot_bits(std::vector<cplx>& a, int cb, int tb) {
    const std::size_t cm = std::size_t{1} << cb, tm = std::size_t{1} << tb;
    for (std::size_t i = 0; i < a.size(); ++i)
        if ((i & cm) && !(i & tm)) std::swap(a[i], a[i | tm]);
}

double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

}  // namespace

StateVector::StateVector(int n_qubits) : n_(n_qubits) {
    if (n_ < 1 || n_ > kMaxQubits)
        throw std::length_error("statevector supports 1.." + std::to_string(kMaxQubits) + " qubits");
    amp_.assign(std::size_t{1} << n_, cplx(0.0));
    amp_[0] = 1.0;
}

void StateVector::apply_1q(int wire, const cplx (&u)[4]) { apply_bit(amp_, wire - 1, u); }

void StateVector::rx(int wire, double theta) {
    cplx u[4];
    rotation_matrix(GateKind::RX, theta, u);
    apply_1q(wire, u);
}

void StateVector::rz(int wire, double theta) {
    cplx u[4];
    rotation_matrix(GateKind::RZ, theta, u);
    apply_1q(wire, u);
}

void StateVector::h(int wire) {
    const double r = 1.0 / std::sqrt(2.0);
    const cplx u[4] = {r, r, r, -r};
    apply_1q(wire, u);
}

void StateVector::cnot(int control, int target) { cnot_bits(amp_, control - 1, target - 1); }

void StateVector::apply(const Gate& g, double theta) {
    switch (g.kind) {
        case GateKind::RX: rx(g.wire, theta); break;
        case GateKind::RZ: rz(g.wire, theta); break;
        case GateKind::H: h(g.wire); break;
        case GateKind::CNOT: cnot(g.wire, g.target); break;
    }
}

double StateVector::norm() const {
    double s = 0.0;
    for (const cplx& a : amp_) s += std::norm(a);
    return std::sqrt(s);
}

double StateVector::expectation(const Observable& obs) const {
    std::vector<cplx> phi = amp_;
    for (const auto& [site, w] : obs.sites()) {
        if (site < 1 || site > n_) throw std::invalid_argument("observable register out of range");
        cplx m[4];
        sigma_matrix(w, m);
        apply_bit(phi, site - 1, m);
    }
    cplx s = 0.0;
    for (std::size_t i = 0; i < amp_.size(); ++i) s += std::conj(amp_[i]) * phi[i];
    return s.real();
}

StateVector simulate(const Circuit& c, const std::vector<double>& theta) {
    if (theta.size() != c.param_count())
        throw std::invalid_argument("theta has " + std::to_string(theta.size()) + " entries, circuit has " +
                                    std::to_string(c.param_count()) + " parameters");
    StateVector psi(c.n_qubits());
    std::size_t k = 0;
    for (const Gate& g : c.gates()) psi.apply(g, g.is_rotation() ? theta[k++] : 0.0);
    return psi;
}

double expectation(const Circuit& c, const Observable& obs, const std::vector<double>& theta) {
    return simulate(c, theta).expectation(obs);
}

double expectation(const Circuit& c, const std::vector<WeightedTerm>& h, const std::vector<double>& theta) {
    const StateVector psi = simulate(c, theta);
    double s = 0.0;
    for (const auto& t : h) s += t.coeff * psi.expectation(t.term);
    return s;
}

double param_shift_grad(const Circuit& c, const Observable& obs, const std::vector<double>& theta, ParamId p) {
    const auto idx = c.param_index(p);
    if (!idx) throw std::invalid_argument("parameter (" + to_string(p) + ") not in circuit");
    std::vector<double> tp = theta, tm = theta;
    tp.at(*idx) += kPi / 2.0;
    tm.at(*idx) -= kPi / 2.0;
    return 0.5 * (expectation(c, obs, tp) - expectation(c, obs, tm));
}

std::string method_name(Method m) { return m == Method::mc ? "mc" : "grid"; }

namespace {

// Light-cone sub-circuit used by the sampling and quadrature paths.
struct Reduced {
    Restriction r;
    std::optional<std::size_t> local;          // index of p among the reduced parameters
    std::vector<std::size_t> original_index;   // reduced param -> index in the full theta
};

Reduced reduce(const Circuit& c, const Observable& obs, ParamId p) {
    if (!c.gate_of(p)) throw std::invalid_argument("parameter (" + to_string(p) + ") not in circuit");
    for (int s : obs.support())
        if (s < 1 || s > c.n_qubits()) throw std::invalid_argument("observable register out of range");
    Reduced red{restrict_to_light_cone(c, obs, true), std::nullopt, {}};
    for (std::size_t i = 0; i < red.r.original_params.size(); ++i) {
        if (red.r.original_params[i] == p) red.local = i;
        red.original_index.push_back(*c.param_index(red.r.original_params[i]));
    }
    return red;
}

// Gradient at theta (reduced ordering) sharing the prefix before the shifted gate.
double shifted_gradient(const Circuit& c, const Observable& obs, const std::vector<double>& theta, std::size_t local) {
    const auto& gates = c.gates();
    StateVector psi(c.n_qubits());
    std::size_t k = 0, gi = 0;
    for (; gi < gates.size(); ++gi) {
        const Gate& g = gates[gi];
        if (g.is_rotation() && k == local) break;
        psi.apply(g, g.is_rotation() ? theta[k++] : 0.0);
    }
    StateVector plus = psi, minus = psi;
    plus.apply(gates[gi], theta[k] + kPi / 2.0);
    minus.apply(gates[gi], theta[k] - kPi / 2.0);
    ++k;
    for (++gi; gi < gates.size(); ++gi) {
        const Gate& g = gates[gi];
        const double t = g.is_rotation() ? theta[k++] : 0.0;
        plus.apply(g, t);
        minus.apply(g, t);
    }
    return 0.5 * (plus.expectation(obs) - minus.expectation(obs));
}

double to_unit(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

std::mt19937_64 sample_engine(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

VarianceEstimate zero_estimate(Method m, std::uint64_t samples, std::uint64_t seed) {
    VarianceEstimate e;
    e.method = m;
    e.samples = samples;
    e.seed = seed;
    return e;
}

}  // namespace

double sample_angle(std::uint64_t seed, std::uint64_t index, std::size_t slot) {
    auto eng = sample_engine(seed, index);
    eng.discard(slot);
    return -kPi + 2.0 * kPi * to_unit(eng());
}

VarianceEstimate mc_variance(const Circuit& c, const Observable& obs, ParamId p, std::uint64_t samples,
                             std::uint64_t seed) {
    if (samples < 2) throw std::invalid_argument("mc_variance needs at least 2 samples");
    const Reduced red = reduce(c, obs, p);
    if (!red.local) return zero_estimate(Method::mc, samples, seed);

    const std::size_t full_m = c.param_count();
    std::vector<double> grads(samples);
    auto work = [&](std::uint64_t begin, std::uint64_t end) {
        std::vector<double> full(full_m), theta(red.original_index.size());
        for (std::uint64_t s = begin; s < end; ++s) {
            auto eng = sample_engine(seed, s);
            for (double& t : full) t = -kPi + 2.0 * kPi * to_unit(eng());
            for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = full[red.original_index[i]];
            grads[s] = shifted_gradient(red.r.circuit, red.r.observable, theta, *red.local);
        }
    };
    const std::uint64_t threads =
        std::min<std::uint64_t>(std::max(1u, std::thread::hardware_concurrency()), samples / 1024 + 1);
    std::vector<std::thread> pool;
    for (std::uint64_t t = 0; t < threads; ++t)
        pool.emplace_back(work, samples * t / threads, samples * (t + 1) / threads);
    for (auto& th : pool) th.join();

    const double n = static_cast<double>(samples);
    const double mean = pairwise_sum(grads.data(), grads.size()) / n;
    std::vector<double> d2(samples), d4(samples);
    for (std::size_t i = 0; i < grads.size(); ++i) {
        const double d = grads[i] - mean;
        d2[i] = d * d;
        d4[i] = d2[i] * d2[i];
    }
    const double m2 = pairwise_sum(d2.data(), d2.size()) / n;
    const double m4 = pairwise_sum(d4.data(), d4.size()) / n;
    VarianceEstimate e = zero_estimate(Method::mc, samples, seed);
    e.value = m2 * n / (n - 1.0);
    // Large-sample standard error of the sample variance.
    e.std_error = std::sqrt(std::max(0.0, (m4 - m2 * m2 * (n - 3.0) / (n - 1.0)) / n));
    e.mean = mean;
    e.mean_stderr = std::sqrt(e.value / n);
    return e;
}

namespace {

struct GridAccumulator {
    double sum = 0.0;
    double sum_sq = 0.0;
};

// Depth-first walk of the product grid; a single state before the shifted gate,
// the (+, -) pair after it.
class GridWalker {
public:
    GridWalker(const Circuit& c, const Observable& obs, std::size_t local)
        : gates_(c.gates()), obs_(obs), local_(local) {}

    GridAccumulator run(int n) {
        StateVector psi(n);
        single(0, 0, psi);
        return acc_;
    }

private:
    void single(std::size_t gi, std::size_t k, StateVector& psi) {
        for (; gi < gates_.size(); ++gi) {
            const Gate& g = gates_[gi];
            if (!g.is_rotation()) {
                psi.apply(g, 0.0);
                continue;
            }
            for (double t : kNodes) {
                if (k == local_) {
                    StateVector plus = psi, minus = psi;
                    plus.apply(g, t + kPi / 2.0);
                    minus.apply(g, t - kPi / 2.0);
                    pair(gi + 1, plus, minus);
                } else {
                    StateVector next = psi;
                    next.apply(g, t);
                    single(gi + 1, k + 1, next);
                }
            }
            return;
        }
    }

    void pair(std::size_t gi, StateVector& plus, StateVector& minus) {
        for (; gi < gates_.size(); ++gi) {
            const Gate& g = gates_[gi];
            if (!g.is_rotation()) {
                plus.apply(g, 0.0);
                minus.apply(g, 0.0);
                continue;
            }
            for (double t : kNodes) {
                StateVector p = plus, m = minus;
                p.apply(g, t);
                m.apply(g, t);
                pair(gi + 1, p, m);
            }
            return;
        }
        const double d = 0.5 * (plus.expectation(obs_) - minus.expectation(obs_));
        acc_.sum += d;
        acc_.sum_sq += d * d;
    }

    const std::vector<Gate>& gates_;
    const Observable& obs_;
    std::size_t local_;
    GridAccumulator acc_;
};

// `copies` stacked statevector copies; even copies are kets, odd copies bras.
class CopyState {
public:
    CopyState(int n, int copies) : n_(n), copies_(copies), a_(std::size_t{1} << (n * copies), cplx(0.0)) {
        a_[0] = 1.0;
    }

    void one_qubit(int copy, int wire, const cplx (&u)[4]) {
        if (copy % 2 == 0) {
            apply_bit(a_, copy * n_ + wire - 1, u);
        } else {
            const cplx v[4] = {std::conj(u[0]), std::conj(u[1]), std::conj(u[2]), std::conj(u[3])};
            apply_bit(a_, copy * n_ + wire - 1, v);
        }
    }

    void cnot(int control, int target) {
        for (int c = 0; c < copies_; ++c) cnot_bits(a_, c * n_ + control - 1, c * n_ + target - 1);
    }

    void hadamard(int wire) {
        const double r = 1.0 / std::sqrt(2.0);
        const cplx u[4] = {r, r, r, -r};
        for (int c = 0; c < copies_; ++c) one_qubit(c, wire, u);
    }

    // Multiply by factor[pattern], pattern bit c being the register's bit in
    // copy c. With x_frame the register is first rotated by H in every copy and
    // rotated back afterwards, all in one pass.
    void diagonal(int wire, const std::vector<cplx>& factor, bool x_frame) {
        const std::size_t d = std::size_t{1} << copies_;
        std::vector<std::size_t> off(d, 0);
        for (std::size_t pat = 0; pat < d; ++pat)
            for (int c = 0; c < copies_; ++c)
                if ((pat >> c) & 1u) off[pat] |= std::size_t{1} << (c * n_ + wire - 1);
        const std::size_t mask = off[d - 1];
        const double norm = std::pow(0.5, copies_);
        std::vector<cplx> v(d);
        auto wht = [&] {
            for (std::size_t h = 1; h < d; h <<= 1)
                for (std::size_t q = 0; q < d; q += 2 * h)
                    for (std::size_t r = q; r < q + h; ++r) {
                        const cplx x = v[r], y = v[r + h];
                        v[r] = x + y;
                        v[r + h] = x - y;
                    }
        };
        for (std::size_t base = 0; base < a_.size(); ++base) {
            if (base & mask) continue;
            for (std::size_t q = 0; q < d; ++q) v[q] = a_[base + off[q]];
            if (x_frame) wht();
            for (std::size_t q = 0; q < d; ++q) v[q] *= factor[q];
            if (x_frame) {
                wht();
                for (std::size_t q = 0; q < d; ++q) v[q] *= norm;
            }
            for (std::size_t q = 0; q < d; ++q) a_[base + off[q]] = v[q];
        }
    }

    // Apply obs on each ket copy and trace every (ket, bra) pair.
    double trace(const Observable& obs) {
        for (int c = 0; c < copies_; c += 2)
            for (const auto& [site, w] : obs.sites()) {
                cplx m[4];
                sigma_matrix(w, m);
                apply_bit(a_, c * n_ + site - 1, m);
            }
        const std::size_t dim = std::size_t{1} << n_;
        const int pairs = copies_ / 2;
        cplx s = 0.0;
        // Index with equal ket and bra registers in every pair.
        std::vector<std::size_t> digit(static_cast<std::size_t>(pairs), 0);
        while (true) {
            std::size_t idx = 0;
            for (int p = 0; p < pairs; ++p) {
                const std::size_t d = digit[static_cast<std::size_t>(p)];
                idx |= d << ((2 * p) * n_);
                idx |= d << ((2 * p + 1) * n_);
            }
            s += a_[idx];
            int p = 0;
            while (p < pairs && ++digit[static_cast<std::size_t>(p)] == dim) digit[static_cast<std::size_t>(p++)] = 0;
            if (p == pairs) break;
        }
        return s.real();
    }

private:
    int n_;
    int copies_;
    std::vector<cplx> a_;
};

// Node average of the rotation exp(-i t P/2) acting on every copy, written in
// the eigenbasis of P (bit 0 -> +1). Bra copies carry the conjugate phase. For
// the differentiated slot each (ket, bra) pair gets the shift difference.
std::vector<cplx> averaged_phases(int copies, bool shifted) {
    const cplx i(0.0, 1.0);
    std::vector<cplx> f(std::size_t{1} << copies, cplx(0.0));
    for (std::size_t pat = 0; pat < f.size(); ++pat) {
        for (double t : kNodes) {
            cplx v = 1.0;
            for (int pr = 0; pr < copies / 2; ++pr) {
                const double sk = (pat >> (2 * pr)) & 1u ? -1.0 : 1.0;
                const double sb = (pat >> (2 * pr + 1)) & 1u ? -1.0 : 1.0;
                const double m = 0.5 * (sk - sb);
                if (shifted)
                    v *= 0.5 * (std::exp(-i * (t + kPi / 2.0) * m) - std::exp(-i * (t - kPi / 2.0) * m));
                else
                    v *= std::exp(-i * t * m);
            }
            f[pat] += v / 3.0;
        }
    }
    return f;
}

// Node-averaged propagation of `copies` = 2 (mean) or 4 (second moment).
double propagate(const Circuit& c, const Observable& obs, std::size_t local, int copies) {
    CopyState state(c.n_qubits(), copies);
    const std::vector<cplx> plain = averaged_phases(copies, false), diff = averaged_phases(copies, true);
    std::size_t k = 0;
    for (const Gate& g : c.gates()) {
        switch (g.kind) {
            case GateKind::CNOT: state.cnot(g.wire, g.target); break;
            case GateKind::H: state.hadamard(g.wire); break;
            case GateKind::RZ: state.diagonal(g.wire, k++ == local ? diff : plain, false); break;
            case GateKind::RX: state.diagonal(g.wire, k++ == local ? diff : plain, true); break;
        }
    }
    return state.trace(obs);
}

}  // namespace

VarianceEstimate grid_variance_enumerated(const Circuit& c, const Observable& obs, ParamId p) {
    const Reduced red = reduce(c, obs, p);
    const std::size_t m = red.r.circuit.param_count();
    VarianceEstimate e = zero_estimate(Method::grid, 0, 0);
    if (!red.local) return e;
    if (m > kMaxGridParams)
        throw std::length_error("grid enumeration over 3^" + std::to_string(m) + " points exceeds the 3^" +
                                std::to_string(kMaxGridParams) + " cap");
    GridWalker walker(red.r.circuit, red.r.observable, *red.local);
    const GridAccumulator a = walker.run(red.r.circuit.n_qubits());
    const double points = std::pow(3.0, static_cast<double>(m));
    e.samples = static_cast<std::uint64_t>(points);
    e.mean = a.sum / points;
    e.value = a.sum_sq / points - e.mean * e.mean;
    return e;
}

VarianceEstimate grid_variance_propagated(const Circuit& c, const Observable& obs, ParamId p) {
    const Reduced red = reduce(c, obs, p);
    VarianceEstimate e = zero_estimate(Method::grid, 0, 0);
    if (!red.local) return e;
    const int w = red.r.circuit.n_qubits();
    if (w > kMaxMomentQubits)
        throw std::length_error("four-copy propagation over " + std::to_string(w) + " registers exceeds the " +
                                std::to_string(kMaxMomentQubits) + "-register cap");
    e.samples = static_cast<std::uint64_t>(std::pow(3.0, static_cast<double>(red.r.circuit.param_count())));
    e.mean = propagate(red.r.circuit, red.r.observable, *red.local, 2);
    e.value = propagate(red.r.circuit, red.r.observable, *red.local, 4) - e.mean * e.mean;
    return e;
}

bool grid_feasible(const Circuit& c, const Observable& obs) {
    const Restriction r = restrict_to_light_cone(c, obs, true);
    return r.circuit.param_count() <= kMaxGridParams || r.circuit.n_qubits() <= kMaxMomentQubits;
}

VarianceEstimate grid_variance(const Circuit& c, const Observable& obs, ParamId p) {
    const Reduced red = reduce(c, obs, p);
    const std::size_t m = red.r.circuit.param_count();
    const int w = red.r.circuit.n_qubits();
    // 3^M full simulations against 3 passes of a 2^(4w) tensor per gate
    if (m <= 8 || (m <= kMaxGridParams && w > 4)) return grid_variance_enumerated(c, obs, p);
    if (w <= kMaxMomentQubits) return grid_variance_propagated(c, obs, p);
    if (m <= kMaxGridParams) return grid_variance_enumerated(c, obs, p);
    throw std::length_error("grid quadrature infeasible: " + std::to_string(red.r.circuit.param_count()) +
                            " parameters over " + std::to_string(red.r.circuit.n_qubits()) + " registers in the light cone");
}

}  // namespace plateau::oracle
