#pragma once

#include <Eigen/Core>
#include <optional>
#include <utility>
#include <vector>

#include "plateau/circuit.hpp"

namespace plateau::closed {

// Var[d_{j,k} <X_i>] on qMPS(N). Returns nullopt for (j,k) not covered by a
// closed form (k > 1 outside the zero cases). Throws std::out_of_range for
// indices outside the circuit.
std::optional<double> var_qmps(int N, int i, ParamId p);

// Zero cases for X_i on qMPS: j > i+1; j = i+1 and k > 2; j < i and k > 4
// (k > 2 for j = 1).
bool qmps_listed_zero(int N, int i, ParamId p);

// Var[d_{1,1} <X_i X_{i+1}>] = c_i (3/8)^i on qMPS(N), 1 <= i <= N-1.
double var_qmps_xx(int N, int i);
double qmps_xx_coefficient(int N, int i);

struct QttnTransfer {
    Eigen::Matrix2d M;        // 1/4 [[3,8],[1,8]]
    double lambda1 = 0.0;     // smaller eigenvalue
    double lambda2 = 0.0;
    Eigen::Vector2d w1, w2;   // unit eigenvectors
    Eigen::Vector2d u0;       // 1/4 [3,1]

    // (alpha_k, beta_k)/4 after k applications.
    Eigen::Vector2d coefficients(int k) const;
};

const QttnTransfer& qttn_transfer();

// 1/4 (3/8)^n
double var_qttn_xn(int n);
// (alpha_{n-1} + 8 beta_{n-1}) / 4^{n+1}, divided by the calibration factor 4.
double var_qttn_x1(int n);
// Leading eigen-component only: the lambda1 term of the spectral expansion dropped.
double var_qttn_x1_asymptotic(int n);

// 1/4 (3/8)^{2n}
double var_qmera_lower(int n);
// Tabulated (lower cone X_N, upper cone X_1) for N in {2,4,8,16}.
std::pair<double, double> qmera_reference(int N);

// qTTN: 1/4 (3/8)^{k log N}; qMERA: 1/4 (3/8)^{2k log N}; nullopt for qMPS.
std::optional<double> klocal_lower_bound(Family family, int N, int k);

// min(1, variance / kappa^2)
double chebyshev_tail(double variance, double kappa);

struct PowerLawFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    double r2 = 0.0;
};

// Ordinary least squares of log(var) on log(N).
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points);

}  // namespace plateau::closed
