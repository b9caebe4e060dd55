#include "plateau/closed_form.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <string>

namespace plateau::closed {

namespace {

constexpr double r38 = 3.0 / 8.0;

int qmps_params_on(int N, int j) { return (j == 1 || j == N) ? 4 : 6; }

void check_qmps(int N, int i, ParamId p) {
    if (N < 2) throw std::out_of_range("qMPS needs N >= 2");
    if (i < 1 || i > N) throw std::out_of_range("observable site " + std::to_string(i) + " outside 1.." + std::to_string(N));
    if (p.j < 1 || p.j > N || p.k < 1 || p.k > qmps_params_on(N, p.j))
        throw std::out_of_range("parameter (" + to_string(p) + ") not in qMPS(" + std::to_string(N) + ")");
}

}  // namespace

bool qmps_listed_zero(int N, int i, ParamId p) {
    check_qmps(N, i, p);
    if (p.j > i + 1) return true;
    if (p.j == i + 1 && p.k > 2) return true;
    if (p.j < i && (p.k > 4 || (p.j == 1 && p.k > 2))) return true;
    return false;
}

std::optional<double> var_qmps(int N, int i, ParamId p) {
    if (qmps_listed_zero(N, i, p)) return 0.0;
    if (p.k != 1) return std::nullopt;
    const int j = p.j;
    if (i == N) {
        if (j < N) return 0.25 * std::pow(r38, N - 1);
        return 0.25 * (1.0 + std::pow(r38, N - 1));
    }
    if (j < i || (j == 1 && i == 1)) return 11.0 / 64.0 * std::pow(r38, i - 1);
    if (j == i) return 3.0 / 64.0 * (1.0 + 11.0 / 8.0 * std::pow(r38, i - 2));
    return 3.0 / 64.0 * (1.0 + std::pow(r38, i - 1));  // j == i + 1
}

double qmps_xx_coefficient(int N, int i) {
    if (N < 2 || i < 1 || i > N - 1) throw std::out_of_range("X_i X_{i+1} needs 1 <= i <= N-1");
    if (i == 1) return 0.25 * (r38 * r38 + 13.0 / 16.0);
    if (i == N - 1) return 37.0 / (3.0 * 64.0);
    return 0.25 * (37.0 / (2.0 * 64.0) + 3.0 / 16.0);
}

double var_qmps_xx(int N, int i) { return qmps_xx_coefficient(N, i) * std::pow(r38, i); }

Eigen::Vector2d QttnTransfer::coefficients(int k) const {
    Eigen::Vector2d u = u0;
    for (int s = 0; s < k; ++s) u = M * u;
    return u;
}

const QttnTransfer& qttn_transfer() {
    static const QttnTransfer t = [] {
        QttnTransfer q;
        q.M << 3, 8, 1, 8;
        q.M *= 0.25;
        q.u0 << 0.75, 0.25;
        Eigen::EigenSolver<Eigen::Matrix2d> es(q.M);
        Eigen::Vector2d ev = es.eigenvalues().real();
        Eigen::Matrix2d vecs = es.eigenvectors().real();
        int lo = ev[0] <= ev[1] ? 0 : 1;
        q.lambda1 = ev[lo];
        q.lambda2 = ev[1 - lo];
        q.w1 = vecs.col(lo).normalized();
        q.w2 = vecs.col(1 - lo).normalized();
        return q;
    }();
    return t;
}

double var_qttn_xn(int n) {
    if (n < 1) throw std::out_of_range("n >= 1");
    return 0.25 * std::pow(r38, n);
}

namespace {

// The diagram bookkeeping gives four times the two-qubit block value at n = 1.
constexpr double kQttnX1Calibration = 0.25;

double x1_from(const Eigen::Vector2d& u, int n) {
    const double alpha = 4.0 * u[0], beta = 4.0 * u[1];
    return kQttnX1Calibration * (alpha + 8.0 * beta) / std::pow(4.0, n + 1);
}

}  // namespace

double var_qttn_x1(int n) {
    if (n < 1) throw std::out_of_range("n >= 1");
    return x1_from(qttn_transfer().coefficients(n - 1), n);
}

double var_qttn_x1_asymptotic(int n) {
    if (n < 1) throw std::out_of_range("n >= 1");
    const QttnTransfer& q = qttn_transfer();
    Eigen::Matrix2d W;
    W << q.w1, q.w2;
    const Eigen::Vector2d a = W.colPivHouseholderQr().solve(q.u0);
    const Eigen::Vector2d u = a[1] * std::pow(q.lambda2, n - 1) * q.w2;
    return x1_from(u, n);
}

double var_qmera_lower(int n) {
    if (n < 1) throw std::out_of_range("n >= 1");
    return 0.25 * std::pow(r38, 2 * n);
}

std::pair<double, double> qmera_reference(int N) {
    switch (N) {
        case 2: return {0.09375, 0.1719};
        case 4: return {0.02477, 0.05242};
        case 8: return {0.004109, 0.02304};
        case 16: return {0.000622, 0.00882};
        default: break;
    }
    throw std::out_of_range("no tabulated qMERA value for N = " + std::to_string(N));
}

std::optional<double> klocal_lower_bound(Family family, int N, int k) {
    if (k < 1) throw std::out_of_range("k >= 1");
    const int n = log2_exact(N);
    switch (family) {
        case Family::qTTN: return 0.25 * std::pow(r38, k * n);
        case Family::qMERA: return 0.25 * std::pow(r38, 2 * k * n);
        default: return std::nullopt;
    }
}

double chebyshev_tail(double variance, double kappa) {
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    if (variance < 0.0) throw std::invalid_argument("variance must be non-negative");
    return std::min(1.0, variance / (kappa * kappa));
}

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw std::invalid_argument("power-law fit needs at least two points");
    const double m = static_cast<double>(points.size());
    double sx = 0, sy = 0;
    for (auto [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0)) throw std::invalid_argument("power-law fit needs positive data");
        sx += std::log(x);
        sy += std::log(y);
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0, syy = 0;
    for (auto [x, y] : points) {
        const double dx = std::log(x) - mx, dy = std::log(y) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw std::invalid_argument("power-law fit needs at least two distinct N");
    PowerLawFit f;
    f.exponent = sxy / sxx;
    f.prefactor = std::exp(my - f.exponent * mx);
    double ss_res = 0;
    for (auto [x, y] : points) {
        const double r = std::log(y) - (my + f.exponent * (std::log(x) - mx));
        ss_res += r * r;
    }
    f.r2 = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
    return f;
}

}  // namespace plateau::closed
