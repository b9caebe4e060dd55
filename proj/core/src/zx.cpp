#include "plateau/zx.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "plateau/cone.hpp"

namespace plateau::zx {

RegisterVector RegisterVector::from_standard(const Eigen::Vector3d& s) {
    return {(s[0] + s[2]) / 2.0, s[1], (s[0] - s[2]) / 2.0};
}

Eigen::Vector3d RegisterVector::to_standard() const { return {c13 + c13m, c2, c13 - c13m}; }

const Eigen::Matrix3d& m_matrix() {
    static const Eigen::Matrix3d m = [] {
        Eigen::Matrix3d r;
        r << 1, 1, 1, 1, 1, -1, 1, -1, 1;
        return Eigen::Matrix3d(r * 0.25);
    }();
    return m;
}

const TransferMap& m_up() {
    static const TransferMap m = [] {
        TransferMap r;
        r << 1, 0, 0.25, 0, 0.375, 0, 0, 0, 0;
        return r;
    }();
    return m;
}

const TransferMap& m_down() {
    static const TransferMap m = [] {
        TransferMap r;
        r << 1, 0, 0, 0, 0.125, 1, 0, 0.125, 0;
#ifdef PLATEAU_TAMPER_M_DOWN
        r(1, 1) = 0.25;
#endif
        return r;
    }();
    return m;
}

RegisterVector apply_m_edge(const RegisterVector& v) {
    return RegisterVector::from_standard(2.0 * m_matrix() * v.to_standard());
}

RegisterVector transfer_up(const RegisterVector& v) { return RegisterVector::from_coeffs(m_up() * v.coeffs()); }
RegisterVector transfer_down(const RegisterVector& v) { return RegisterVector::from_coeffs(m_down() * v.coeffs()); }

PairTensor outer(const RegisterVector& top, const RegisterVector& bottom) {
    return top.to_standard() * bottom.to_standard().transpose();
}

namespace {

PairTensor gadget(const PairTensor& p) {
    const Eigen::Matrix3d two_m = 2.0 * m_matrix();
    const Eigen::Matrix3d four_m = 4.0 * m_matrix();
    return two_m * p.cwiseProduct(four_m) * two_m.transpose();
}

void check_identity(const BlockMap& b, const RegisterVector& top, const RegisterVector& bottom,
                    const PairTensor& expect) {
    const PairTensor in = outer(top, bottom);
    Eigen::Matrix<double, 9, 1> v;
    for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 3; ++c) v[3 * a + c] = in(a, c);
    Eigen::Matrix<double, 9, 1> out = b * v;
    for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 3; ++c)
            if (std::abs(out[3 * a + c] - expect(a, c)) > 1e-12)
                throw std::logic_error("block map violates a pair identity; network mis-assembled");
}

}  // namespace

const BlockMap& block_map() {
    static const BlockMap b = [] {
        BlockMap r;
        for (int a = 0; a < 3; ++a)
            for (int c = 0; c < 3; ++c) {
                PairTensor e = PairTensor::Zero();
                e(a, c) = 1.0;
                const PairTensor o = gadget(e);
                for (int x = 0; x < 3; ++x)
                    for (int y = 0; y < 3; ++y) r(3 * x + y, 3 * a + c) = o(x, y);
            }
        using RV = RegisterVector;
        check_identity(r, RV::v13(), RV::v13(), outer(RV::v13(), RV::v13()));
        check_identity(r, RV::v13(), RV::v2(), 0.5 * outer(RV::v2(), RV::v2() + RV::v13m()));
        check_identity(r, RV::v13(), RV::v13m(), outer(RV::v13(), RV::v2()));
        check_identity(r, RV::v2(), RV::v2(), 0.25 * outer(RV::v2() + RV::v13m(), RV::v2() + RV::v13m()));
        check_identity(r, RV::v13m(), RV::v13m(), outer(RV::v2(), RV::v2()));
        return r;
    }();
    return b;
}

PairTensor apply_block(const PairTensor& p) {
    Eigen::Matrix<double, 9, 1> v;
    for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 3; ++c) v[3 * a + c] = p(a, c);
    Eigen::Matrix<double, 9, 1> o = block_map() * v;
    PairTensor r;
    for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 3; ++c) r(a, c) = o[3 * a + c];
    return r;
}

TransferMap transfer_from_block(bool up) {
    const RegisterVector partner = RegisterVector::v13();
    const Eigen::Vector3d close = up ? Eigen::Vector3d(0.75, 0.25, 0.25) : Eigen::Vector3d(0.5, 0.25, 0.5);
    TransferMap t;
    const RegisterVector basis[3] = {RegisterVector::v13(), RegisterVector::v2(), RegisterVector::v13m()};
    for (int k = 0; k < 3; ++k) {
        // input on the top leg; up reads the bottom output, down the top one
        const PairTensor out = apply_block(outer(basis[k], partner));
        const Eigen::Vector3d y = up ? Eigen::Vector3d(out.transpose() * close) : Eigen::Vector3d(out * close);
        t.col(k) = RegisterVector::from_standard(y).coeffs();
    }
    return t;
}

namespace {

using cplx = std::complex<double>;
using Mat2 = std::array<cplx, 4>;  // row-major

Mat2 sigma(const PauliWeights& w) {
    const cplx i(0.0, 1.0);
    return {w.k0 + w.k3, w.k1 - i * w.k2, w.k1 + i * w.k2, w.k0 - w.k3};
}

// Four-copy index strings (s0 s1 s2 s3) of each type.
constexpr int kPairs[3][2][4] = {
    {{0, 0, 0, 0}, {1, 1, 1, 1}},
    {{1, 0, 0, 1}, {0, 1, 1, 0}},
    {{1, 1, 0, 0}, {0, 0, 1, 1}},
};

}  // namespace

Eigen::Vector3d observable_vector(const PauliWeights& w, bool hadamard_frame) {
    const Mat2 P = sigma(w);
    auto at = [&](int r, int c) { return P[static_cast<std::size_t>(2 * r + c)]; };
    const double h = 1.0 / std::sqrt(2.0);
    Eigen::Vector3d u = Eigen::Vector3d::Zero();
    for (int t = 0; t < 3; ++t) {
        for (const auto& s : kPairs[t]) {
            cplx tot = 0.0;
            if (!hadamard_frame) {
                tot = at(s[1], s[0]) * at(s[3], s[2]);
            } else {
                for (int x = 0; x < 16; ++x) {
                    int xb[4] = {x & 1, (x >> 1) & 1, (x >> 2) & 1, (x >> 3) & 1};
                    double amp = 1.0;
                    for (int k = 0; k < 4; ++k) amp *= (s[k] && xb[k]) ? -h : h;
                    tot += amp * at(xb[1], xb[0]) * at(xb[3], xb[2]);
                }
            }
            u[t] += tot.real();
        }
    }
    return u;
}

Eigen::Vector3d textbook_observable_vector(const PauliWeights& w) {
    using RV = RegisterVector;
    return (RV::v13() * (2 * w.k0 * w.k0) + RV::v2() * (2 * (w.k1 * w.k1 + w.k3 * w.k3)) +
            RV::v13m() * (2 * w.k2 * w.k2))
        .to_standard();
}

namespace {

struct Spider {
    int wire = 0;
    std::vector<std::size_t> params;  // indices into the restricted circuit's parameter list
    bool output = false;
    bool hadamard_frame = false;
};

enum class OpKind { Weight, Edge, Pair };

struct Op {
    OpKind kind;
    int a = 0;  // register (0-based)
    int b = 0;  // second register for Pair
    int spider = -1;
};

// Spider graph of the variance network laid out as a sweep over the registers.
// Each register carries one open spider; a Hadamard edge closes it and opens the
// next, and a CNOT adds an edge between the two open spiders.
struct Network {
    int width = 0;
    int cnots = 0;
    int edges = 0;
    std::vector<Spider> spiders;
    std::vector<Op> ops;
    std::vector<Eigen::Vector3d> output_vec;  // per spider, valid for outputs
    std::vector<int> spider_of_param;
};

Network compile(const Circuit& c, const Observable& obs) {
    Network net;
    const int w = c.n_qubits();
    net.width = w;
    std::vector<int> cur(static_cast<std::size_t>(w));
    std::vector<int> pend(static_cast<std::size_t>(w), 1);
    auto new_spider = [&](int wire) {
        net.spiders.push_back(Spider{wire, {}, false, false});
        return static_cast<int>(net.spiders.size()) - 1;
    };
    for (int q = 0; q < w; ++q) cur[static_cast<std::size_t>(q)] = new_spider(q);
    net.spider_of_param.assign(c.param_count(), -1);

    auto zop = [&](int q, std::optional<std::size_t> param) {
        auto qi = static_cast<std::size_t>(q);
        if (pend[qi]) {
            const int s = new_spider(q);
            net.ops.push_back({OpKind::Weight, q, 0, cur[qi]});
            net.ops.push_back({OpKind::Edge, q, 0, s});
            ++net.edges;
            cur[qi] = s;
            pend[qi] = 0;
        }
        if (param) {
            net.spiders[static_cast<std::size_t>(cur[qi])].params.push_back(*param);
            net.spider_of_param[*param] = cur[qi];
        }
        return cur[qi];
    };

    std::size_t pi = 0;
    for (const Gate& g : c.gates()) {
        const int q = g.wire - 1;
        switch (g.kind) {
            case GateKind::RZ: zop(q, pi++); break;
            case GateKind::RX:
                pend[static_cast<std::size_t>(q)] ^= 1;
                zop(q, pi++);
                pend[static_cast<std::size_t>(q)] ^= 1;
                break;
            case GateKind::H: pend[static_cast<std::size_t>(q)] ^= 1; break;
            case GateKind::CNOT: {
                const int t = g.target - 1;
                zop(q, std::nullopt);
                pend[static_cast<std::size_t>(t)] ^= 1;
                zop(t, std::nullopt);
                pend[static_cast<std::size_t>(t)] ^= 1;
                net.ops.push_back({OpKind::Pair, q, t, -1});
                ++net.cnots;
                ++net.edges;
                break;
            }
        }
    }
    net.output_vec.assign(net.spiders.size(), Eigen::Vector3d::Zero());
    for (int q = 0; q < w; ++q) {
        Spider& s = net.spiders[static_cast<std::size_t>(cur[static_cast<std::size_t>(q)])];
        s.output = true;
        s.hadamard_frame = pend[static_cast<std::size_t>(q)] != 0;
        PauliWeights pw;
        auto it = obs.sites().find(q + 1);
        if (it != obs.sites().end()) pw = it->second;
        net.output_vec[static_cast<std::size_t>(cur[static_cast<std::size_t>(q)])] =
            observable_vector(pw, s.hadamard_frame);
        net.ops.push_back({OpKind::Weight, q, 0, cur[static_cast<std::size_t>(q)]});
    }
    for (const Spider& s : net.spiders)
        if (s.params.empty())
            throw std::logic_error("variance network has a spider without a parameter on register " +
                                   std::to_string(s.wire + 1) + "; only rotation-dressed circuits are supported");
    return net;
}

// Diagonal weight of a spider: [2,2,2] if averaged, [0,2,0] if it carries the
// differentiated angle; output spiders are scaled by u/2.
Eigen::Vector3d weight(const Network& net, int spider, bool derivative) {
    Eigen::Vector3d v = derivative ? Eigen::Vector3d(0, 2, 0) : Eigen::Vector3d(2, 2, 2);
    const Spider& s = net.spiders[static_cast<std::size_t>(spider)];
    if (s.output) v = v.cwiseProduct(net.output_vec[static_cast<std::size_t>(spider)]) / 2.0;
    return v;
}

class Tensor {
public:
    explicit Tensor(int width) : data_(pow3(width), 1.0) {}

    static std::size_t pow3(int k) {
        std::size_t r = 1;
        for (int i = 0; i < k; ++i) r *= 3;
        return r;
    }

    void scale_axis(int q, const Eigen::Vector3d& w) {
        const std::size_t stride = pow3(q);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] *= w[static_cast<int>((i / stride) % 3)];
    }

    void matrix_axis(int q, const Eigen::Matrix3d& m) {
        const std::size_t stride = pow3(q);
        const std::size_t block = 3 * stride;
        for (std::size_t base = 0; base < data_.size(); base += block)
            for (std::size_t off = 0; off < stride; ++off) {
                double* p = &data_[base + off];
                const double x0 = p[0], x1 = p[stride], x2 = p[2 * stride];
                p[0] = m(0, 0) * x0 + m(0, 1) * x1 + m(0, 2) * x2;
                p[stride] = m(1, 0) * x0 + m(1, 1) * x1 + m(1, 2) * x2;
                p[2 * stride] = m(2, 0) * x0 + m(2, 1) * x1 + m(2, 2) * x2;
            }
    }

    void pair(int a, int b, const Eigen::Matrix3d& m) {
        const std::size_t sa = pow3(a), sb = pow3(b);
        for (std::size_t i = 0; i < data_.size(); ++i)
            data_[i] *= m(static_cast<int>((i / sa) % 3), static_cast<int>((i / sb) % 3));
    }

    double sum() const {
        double s = 0.0;
        for (double x : data_) s += x;
        return s;
    }

    // sum_i this[i] * other[i] * w[digit_q(i)]
    double dot_weighted(const Tensor& other, int q, const Eigen::Vector3d& w) const {
        const std::size_t stride = pow3(q);
        double s = 0.0;
        for (std::size_t i = 0; i < data_.size(); ++i)
            s += data_[i] * other.data_[i] * w[static_cast<int>((i / stride) % 3)];
        return s;
    }

private:
    std::vector<double> data_;
};

void apply(Tensor& t, const Network& net, const Op& op, int derivative_spider) {
    switch (op.kind) {
        case OpKind::Weight: t.scale_axis(op.a, weight(net, op.spider, op.spider == derivative_spider)); break;
        case OpKind::Edge: t.matrix_axis(op.a, m_matrix()); break;
        case OpKind::Pair: t.pair(op.a, op.b, m_matrix()); break;
    }
}

double bookkeeping_scalar(const Network& net) { return std::pow(0.25, net.width) * std::pow(4.0, net.cnots); }

double contract_raw(const Network& net, int derivative_spider) {
    Tensor t(net.width);
    for (const Op& op : net.ops) apply(t, net, op, derivative_spider);
    return bookkeeping_scalar(net) * t.sum();
}

void check_width(int w) {
    if (w > kMaxWidth)
        throw std::length_error("light cone spans " + std::to_string(w) + " registers; dense contraction limit is " +
                                std::to_string(kMaxWidth));
}

}  // namespace

double calibration() {
    static const double c = [] {
        const Circuit block = build_ansatz(Family::qMPS, 2);
        const Network net = compile(block, Observable::X(1));
        const auto idx = block.param_index({1, 1});
        const double raw = contract_raw(net, net.spider_of_param[*idx]);
        return (11.0 / 64.0) / raw;
    }();
    return c;
}

double contract_variance_tn(const Circuit& c, const Observable& obs, ParamId p) {
    const auto gate = c.gate_of(p);
    if (!gate) throw std::invalid_argument("parameter (" + to_string(p) + ") not in circuit");
    for (int s : obs.support())
        if (s < 1 || s > c.n_qubits()) throw std::invalid_argument("observable register out of range");
    if (obs.is_trivial()) return 0.0;
    const Restriction r = restrict_to_light_cone(c, obs);
    std::optional<std::size_t> local;
    for (std::size_t i = 0; i < r.original_params.size(); ++i)
        if (r.original_params[i] == p) local = i;
    if (!local) return 0.0;
    check_width(r.circuit.n_qubits());
    const Network net = compile(r.circuit, r.observable);
    return calibration() * contract_raw(net, net.spider_of_param[*local]);
}

double contract_variance_tn(Family family, int n_qubits, const Observable& obs, ParamId p) {
    return contract_variance_tn(build_ansatz(family, n_qubits), obs, p);
}

std::map<ParamId, double> contract_variance_all_params(const Circuit& c, const Observable& obs) {
    std::map<ParamId, double> out;
    for (const ParamId& p : c.params()) out[p] = 0.0;
    for (int s : obs.support())
        if (s < 1 || s > c.n_qubits()) throw std::invalid_argument("observable register out of range");
    if (obs.is_trivial()) return out;
    const Restriction r = restrict_to_light_cone(c, obs);
    check_width(r.circuit.n_qubits());
    const Network net = compile(r.circuit, r.observable);

    // Forward states just before each parameter spider's weight is applied.
    std::vector<int> op_of_spider(net.spiders.size(), -1);
    for (std::size_t k = 0; k < net.ops.size(); ++k)
        if (net.ops[k].kind == OpKind::Weight) op_of_spider[static_cast<std::size_t>(net.ops[k].spider)] = static_cast<int>(k);
    std::map<int, Tensor> before;
    Tensor t(net.width);
    for (std::size_t k = 0; k < net.ops.size(); ++k) {
        const Op& op = net.ops[k];
        if (op.kind == OpKind::Weight && !net.spiders[static_cast<std::size_t>(op.spider)].params.empty())
            before.emplace(op.spider, t);
        apply(t, net, op, -1);
    }
    // Every op is symmetric, so the environment is the same sweep run backwards.
    std::map<int, double> value;
    Tensor env(net.width);
    for (std::size_t k = net.ops.size(); k-- > 0;) {
        const Op& op = net.ops[k];
        if (op.kind == OpKind::Weight) {
            auto it = before.find(op.spider);
            if (it != before.end()) value[op.spider] = it->second.dot_weighted(env, op.a, weight(net, op.spider, true));
        }
        apply(env, net, op, -1);
    }
    const double scale = calibration() * bookkeeping_scalar(net);
    for (std::size_t i = 0; i < r.original_params.size(); ++i)
        out[r.original_params[i]] = scale * value.at(net.spider_of_param[i]);
    return out;
}

std::map<ParamId, double> contract_variance_all_params(Family family, int n_qubits, const Observable& obs) {
    return contract_variance_all_params(build_ansatz(family, n_qubits), obs);
}

NetworkInfo network_info(const Circuit& c, const Observable& obs) {
    const Restriction r = restrict_to_light_cone(c, obs);
    const Network net = compile(r.circuit, r.observable);
    return {net.width, static_cast<int>(net.spiders.size()), net.edges, net.cnots};
}

}  // namespace plateau::zx
