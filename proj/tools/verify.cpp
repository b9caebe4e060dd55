#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "plateau/closed_form.hpp"
#include "plateau/cone.hpp"
#include "plateau/oracle.hpp"
#include "plateau/zx.hpp"

namespace plateau::cli {

namespace {

enum class Verdict { pass, fail, xfail, xpass };

const char* verdict_str(Verdict v) {
    switch (v) {
        case Verdict::pass: return "PASS";
        case Verdict::fail: return "FAIL";
        case Verdict::xfail: return "XFAIL";
        case Verdict::xpass: return "XPASS";
    }
    return "?";
}

struct Report {
    std::ostream& os;
    int counts[4] = {0, 0, 0, 0};

    // known_gap: the reference formula is expected to disagree with the exact
    // value here; agreement is then reported as XPASS and counts as a failure.
    void check(const std::string& name, double value, double ref, double tol, bool known_gap = false,
               bool relative = false) {
        const double err = relative ? std::abs(value - ref) / std::abs(ref) : std::abs(value - ref);
        const bool ok = err <= tol;
        Verdict v = ok ? (known_gap ? Verdict::xpass : Verdict::pass) : (known_gap ? Verdict::xfail : Verdict::fail);
        ++counts[static_cast<int>(v)];
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.3g%s,%s\n", name.c_str(), value, ref, tol,
                      relative ? "rel" : "", verdict_str(v));
        os << buf;
    }

    void fail(const std::string& name, const std::string& why) {
        ++counts[static_cast<int>(Verdict::fail)];
        os << name << ",,," << ",FAIL " << why << '\n';
    }

    bool ok() const { return counts[1] == 0 && counts[3] == 0; }
};

std::string pid(ParamId p) { return "j" + std::to_string(p.j) + "k" + std::to_string(p.k); }

double max_abs_diff(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Branches of the qMPS single-site forms with an additive constant; the exact
// contraction has 1/2 where these have 1.
bool qmps_constant_branch(int i, ParamId p) { return p.k == 1 && ((p.j == i && i > 1) || p.j == i + 1); }

// End cases of the X_i X_{i+1} coefficient (i = 1 is off by 1/2, i = N-1 by 2).
bool qmps_xx_end(int N, int i) { return i == 1 || i == N - 1; }

void fast_checks(Report& r) {
    r.check("zx/calibration", zx::calibration(), 1.0, 1e-12);
    try {
        (void)zx::block_map();
        r.check("zx/block_identities", 0.0, 0.0, 0.0);
    } catch (const std::exception& e) {
        r.fail("zx/block_identities", e.what());
    }
    r.check("zx/m_up_from_block", max_abs_diff(zx::m_up(), zx::transfer_from_block(true)), 0.0, 1e-12);
    r.check("zx/m_down_from_block", max_abs_diff(zx::m_down(), zx::transfer_from_block(false)), 0.0, 1e-12);

    const auto& q = closed::qttn_transfer();
    r.check("qttn/lambda1", q.lambda1, 0.4313, 5e-5);
    r.check("qttn/lambda2", q.lambda2, 2.3187, 5e-5);

    for (int N = 2; N <= 6; ++N) {
        const Circuit c = build_ansatz(Family::qMPS, N);
        for (int i = 1; i <= N; ++i) {
            const auto tn = zx::contract_variance_all_params(c, Observable::X(i));
            for (const auto& [p, v] : tn) {
                const std::string base = "qmps/N" + std::to_string(N) + "/X" + std::to_string(i) + "/" + pid(p);
                if (closed::qmps_listed_zero(N, i, p)) {
                    r.check(base + "/listed_zero_tn", v, 0.0, 0.0);
                    r.check(base + "/listed_zero_cone", variance_is_zero(c, Observable::X(i), p) ? 0.0 : 1.0, 0.0, 0.0);
                    continue;
                }
                if (auto cf = closed::var_qmps(N, i, p))
                    r.check(base + "/closed", v, *cf, 1e-10, qmps_constant_branch(i, p));
            }
        }
        for (int i = 1; i < N; ++i)
            r.check("qmps/N" + std::to_string(N) + "/XX" + std::to_string(i) + "/closed",
                    zx::contract_variance_tn(c, Observable::XX(i), {1, 1}), closed::var_qmps_xx(N, i), 1e-10,
                    qmps_xx_end(N, i));
    }

    for (int n = 1; n <= 3; ++n) {
        const int N = 1 << n;
        const Circuit c = build_ansatz(Family::qTTN, N);
        r.check("qttn/N" + std::to_string(N) + "/XN", zx::contract_variance_tn(c, Observable::X(N), {1, 1}),
                closed::var_qttn_xn(n), 1e-10);
        r.check("qttn/N" + std::to_string(N) + "/X1", zx::contract_variance_tn(c, Observable::X(1), {1, 1}),
                closed::var_qttn_x1(n), 1e-10);
    }
}

void full_checks(Report& r) {
    struct Inst {
        Family f;
        int N;
    };
    const Inst insts[] = {{Family::qMPS, 2}, {Family::qMPS, 3}, {Family::qMPS, 4}, {Family::qTTN, 2},
                          {Family::qTTN, 4}, {Family::qMERA, 2}, {Family::qMERA, 4}};
    for (const auto& [f, N] : insts) {
        const Circuit c = build_ansatz(f, N);
        for (int i = 1; i <= N; ++i) {
            const Observable o = Observable::X(i);
            const auto tn = zx::contract_variance_all_params(c, o);
            for (const auto& [p, v] : tn) {
                if (variance_is_zero(c, o, p)) continue;
                const auto g = oracle::grid_variance(c, o, p);
                const std::string base =
                    family_name(f) + "/N" + std::to_string(N) + "/X" + std::to_string(i) + "/" + pid(p);
                r.check(base + "/grid_vs_tn", g.value, v, 1e-10);
                r.check(base + "/grid_mean", g.mean, 0.0, 1e-12);
            }
        }
    }

    struct Spot {
        Family f;
        int N;
        Observable o;
    };
    const Spot spots[] = {{Family::qMPS, 6, Observable::X(6)},
                          {Family::qTTN, 8, Observable::X(1)},
                          {Family::qMERA, 8, Observable::X(8)},
                          {Family::qMPS, 5, Observable::XX(2)}};
    for (const auto& s : spots) {
        const Circuit c = build_ansatz(s.f, s.N);
        const double tn = zx::contract_variance_tn(c, s.o, {1, 1});
        const auto e = oracle::mc_variance(c, s.o, {1, 1}, 20000, 12345);
        const std::string base = family_name(s.f) + "/N" + std::to_string(s.N) + "/" + canonical(s.o) + "/j1k1";
        r.check(base + "/mc_vs_tn_4se", e.value, tn, 4.0 * e.std_error);
        r.check(base + "/mc_mean_4se", e.mean, 0.0, 4.0 * e.mean_stderr);
    }
}

}  // namespace

int run_verify(bool full, std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    out << "check,value,reference,tolerance,verdict\n";
    Report r{out};
    try {
        fast_checks(r);
        if (full) full_checks(r);
    } catch (const std::exception& e) {
        r.fail("verify/exception", e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out << "# level=" << (full ? "full" : "fast") << " pass=" << r.counts[0] << " fail=" << r.counts[1]
        << " xfail=" << r.counts[2] << " xpass=" << r.counts[3] << " seconds=" << s << '\n';
    return r.ok() ? 0 : 1;
}

}  // namespace plateau::cli
