#include "carlift/carleman.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace carlift {

namespace {
constexpr double kSectionRtol = 1e-10;
constexpr double kSectionAtol = 1e-12;
}  // namespace

CarlemanSection build_carleman_section(const MaclaurinSeries& c, int N) {
    if (N < 1) throw PreconditionError("build_carleman_section: N must be >= 1");
    if (c.n_max() < N)
        throw InsufficientCoefficients(
            "build_carleman_section: need Maclaurin coefficients up to order N");
    CarlemanSection sec;
    sec.N = N;
    sec.A = ComplexMatrix(static_cast<std::size_t>(N), static_cast<std::size_t>(N));
    sec.a.assign(static_cast<std::size_t>(N), CScalar(0.0, 0.0));
    sec.a[0] = c.c(0);
    sec.source = c;
    for (int k = 1; k <= N; ++k) {
        for (int kp = std::max(1, k - 1); kp <= N; ++kp) {
            sec.A(static_cast<std::size_t>(k - 1), static_cast<std::size_t>(kp - 1)) =
                static_cast<double>(k) * c.c(kp - k + 1);
        }
    }
    return sec;
}

Trajectory solve_finite_section(const CarlemanSection& sec, CScalar x0,
                                const TimeGrid& grid) {
    const std::size_t n = static_cast<std::size_t>(sec.N);
    CVector y0(n);
    // Powers by repeated multiplication; exp/log would pick branches.
    CScalar p = x0;
    for (std::size_t k = 0; k < n; ++k) {
        y0[k] = p;
        p *= x0;
    }
    if (sec.is_upper_triangular())
        return solve_upper_triangular_linear(sec.A, sec.a, y0, grid);

    const auto field = [&sec, n](const CVector& y, CVector& dydt) {
        for (std::size_t i = 0; i < n; ++i) {
            CScalar s = sec.a[i];
            for (std::size_t j = i == 0 ? 0 : i - 1; j < n; ++j)
                s += sec.A(i, j) * y[j];
            dydt[i] = s;
        }
    };
    return rk45(field, y0, grid, kSectionRtol, kSectionAtol);
}

CarlemanBoundReport make_carleman_bound_report(double C0, double R0, CScalar x0) {
    if (!(C0 >= 0.0) || !(R0 > 0.0))
        throw PreconditionError("carleman bound: require C0 >= 0 and R0 > 0");
    CarlemanBoundReport rep;
    rep.C0 = C0;
    rep.R0 = R0;
    rep.x0 = x0;
    const double ax0 = std::abs(x0);
    const double e = std::numbers::e;
    rep.tilde_R0 = std::max(1.0, R0 * ax0 * e * e);
    if (C0 == 0.0) {
        rep.T_star = std::numeric_limits<double>::infinity();
    } else {
        const double log_term =
            ax0 == 0.0 ? std::numeric_limits<double>::infinity()
                       : std::log(rep.tilde_R0 / (e * R0 * ax0));
        rep.T_star = rep.tilde_R0 /
                     (C0 * (rep.tilde_R0 + 1.0) * std::exp(rep.tilde_R0)) *
                     std::min(log_term, 2.0);
    }
    return rep;
}

double CarlemanBoundReport::bound(int N, double t) const {
    if (N < 1) throw PreconditionError("carleman bound: N must be >= 1");
    if (!(t >= 0.0)) throw PreconditionError("carleman bound: t must be >= 0");
    if (t > T_star * (1.0 + 1e-12))
        throw OutOfTimeRange("carleman bound: t exceeds T_star");
    const double e = std::numbers::e;
    const double prefactor =
        tilde_R0 * std::exp(tilde_R0) / (std::sqrt(2.0 * std::numbers::pi) * R0);
    const double base = (R0 * std::abs(x0) * e / tilde_R0) *
                        std::exp(C0 * (1.0 + 1.0 / tilde_R0) * std::exp(tilde_R0) * t);
    return prefactor * std::pow(static_cast<double>(N), -1.5) *
           std::pow(base, static_cast<double>(N));
}

double carleman_bound(double C0, double R0, CScalar x0, int N, double t) {
    return make_carleman_bound_report(C0, R0, x0).bound(N, t);
}

double local_state_bound(double C0, double R0, CScalar x0, double M0) {
    const double ax0 = std::abs(x0);
    if (!(M0 > ax0) || !(ax0 > 0.0))
        throw InvalidBound("local_state_bound: require M0 > |x0| > 0");
    if (!(C0 > 0.0) || !(R0 > 0.0))
        throw InvalidBound("local_state_bound: require C0 > 0 and R0 > 0");
    return M0 * R0 / (C0 * (std::exp(R0 * M0) - 1.0)) * std::log(M0 / ax0);
}

}  // namespace carlift
