#include "carlift/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "carlift/exppoly.hpp"

namespace carlift {

TimeGrid::TimeGrid(double t0, double t1, std::size_t n_steps)
    : t0_(t0), t1_(t1), n_steps_(n_steps) {
    if (!(t0 >= 0.0) || !(t1 > t0) || n_steps == 0)
        throw PreconditionError("TimeGrid: require 0 <= t0 < t1 and n_steps >= 1");
}

double TimeGrid::operator[](std::size_t i) const {
    if (i == 0) return t0_;
    if (i == n_steps_) return t1_;
    return t0_ + (t1_ - t0_) * static_cast<double>(i) / static_cast<double>(n_steps_);
}

std::vector<double> TimeGrid::times() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)[i];
    return out;
}

std::vector<CScalar> Trajectory::component(std::size_t c) const {
    std::vector<CScalar> out(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) out[i] = states[i][c];
    return out;
}

Trajectory Trajectory::extract_component(std::size_t c) const {
    Trajectory out;
    out.times = times;
    out.states.reserve(states.size());
    for (const auto& s : states) out.states.push_back({s[c]});
    out.valid_count = valid_count;
    return out;
}

CScalar principal_log(CScalar z) {
    if (z == CScalar(0.0, 0.0))
        throw DomainError("principal_log: argument is zero");
    CScalar w = std::log(z);
    // std::log lands on -pi for negative reals approached from below; the
    // branch here is (-pi, pi].
    if (w.imag() == -std::numbers::pi) w = CScalar(w.real(), std::numbers::pi);
    return w;
}

namespace {

CScalar simpson_slice(const std::function<CScalar(double)>& f, double a, double b,
                      CScalar fa, CScalar fm, CScalar fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

CScalar simpson_recurse(const std::function<CScalar(double)>& f, double a, double b,
                        CScalar fa, CScalar fm, CScalar fb, CScalar whole, double tol,
                        int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const CScalar flm = f(lm);
    const CScalar frm = f(rm);
    const CScalar left = simpson_slice(f, a, m, fa, flm, fm);
    const CScalar right = simpson_slice(f, m, b, fm, frm, fb);
    const CScalar delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol || depth >= 48)
        return left + right + delta / 15.0;
    return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

CScalar adaptive_simpson(const std::function<CScalar(double)>& f, double a, double b,
                         double abs_tol) {
    if (!(abs_tol > 0.0)) throw PreconditionError("adaptive_simpson: abs_tol must be positive");
    if (a == b) return CScalar(0.0, 0.0);
    const CScalar fa = f(a);
    const CScalar fm = f(0.5 * (a + b));
    const CScalar fb = f(b);
    const CScalar whole = simpson_slice(f, a, b, fa, fm, fb);
    return simpson_recurse(f, a, b, fa, fm, fb, whole, abs_tol, 0);
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                 kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                 kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

double sup_norm(const CVector& y) {
    double m = 0.0;
    for (const auto& v : y) m = std::max(m, std::abs(v));
    return m;
}

bool all_finite(const CVector& y) {
    for (const auto& v : y)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

}  // namespace

Trajectory rk45(const VectorField& f, const CVector& y0, const TimeGrid& grid,
                double rtol, double atol) {
    if (!(rtol > 0.0) || !(atol > 0.0))
        throw PreconditionError("rk45: tolerances must be positive");
    const std::size_t n = y0.size();
    const double span = grid.t1() - grid.t0();
    const double h_min = 1e-14 * span;

    Trajectory out;
    out.times = grid.times();
    out.states.reserve(grid.size());
    out.states.push_back(y0);

    CVector y = y0;
    CVector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), y5(n);
    double t = grid.t0();
    f(y, k1);
    double h = span / 100.0;

    auto fill_invalid = [&](std::size_t first_invalid) {
        out.valid_count = first_invalid;
        while (out.states.size() < grid.size()) out.states.push_back(y);
    };

    if (sup_norm(y) > kOverflowGuard || !all_finite(y)) {
        fill_invalid(1);
        return out;
    }

    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double t_target = grid[i];
        while (t_target - t > 0.5 * h_min) {
            h = std::min(h, t_target - t);
            if (h < h_min)
                throw StepSizeUnderflow("rk45: adaptive step underflow", t);

            for (std::size_t j = 0; j < n; ++j) ytmp[j] = y[j] + h * kA21 * k1[j];
            f(ytmp, k2);
            for (std::size_t j = 0; j < n; ++j)
                ytmp[j] = y[j] + h * (kA31 * k1[j] + kA32 * k2[j]);
            f(ytmp, k3);
            for (std::size_t j = 0; j < n; ++j)
                ytmp[j] = y[j] + h * (kA41 * k1[j] + kA42 * k2[j] + kA43 * k3[j]);
            f(ytmp, k4);
            for (std::size_t j = 0; j < n; ++j)
                ytmp[j] = y[j] + h * (kA51 * k1[j] + kA52 * k2[j] + kA53 * k3[j] +
                                      kA54 * k4[j]);
            f(ytmp, k5);
            for (std::size_t j = 0; j < n; ++j)
                ytmp[j] = y[j] + h * (kA61 * k1[j] + kA62 * k2[j] + kA63 * k3[j] +
                                      kA64 * k4[j] + kA65 * k5[j]);
            f(ytmp, k6);
            for (std::size_t j = 0; j < n; ++j)
                y5[j] = y[j] + h * (kB1 * k1[j] + kB3 * k3[j] + kB4 * k4[j] +
                                    kB5 * k5[j] + kB6 * k6[j]);
            f(y5, k7);

            double err_sq = 0.0;
            bool finite = true;
            for (std::size_t j = 0; j < n; ++j) {
                const CScalar e = h * (kE1 * k1[j] + kE3 * k3[j] + kE4 * k4[j] +
                                       kE5 * k5[j] + kE6 * k6[j] + kE7 * k7[j]);
                const double sc =
                    atol + rtol * std::max(std::abs(y[j]), std::abs(y5[j]));
                const double r = std::abs(e) / sc;
                if (!std::isfinite(r)) finite = false;
                err_sq += r * r;
            }
            const double err = finite ? std::sqrt(err_sq / static_cast<double>(n))
                                      : 2.0;

            if (err <= 1.0) {
                t += h;
                y = y5;
                std::swap(k1, k7);
                if (sup_norm(y) > kOverflowGuard || !all_finite(y)) {
                    fill_invalid(i);
                    return out;
                }
            }
            const double factor =
                err == 0.0 ? 5.0
                           : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            h *= factor;
        }
        out.states.push_back(y);
    }
    out.valid_count = grid.size();
    return out;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
}

Trajectory solve_upper_triangular_linear(const ComplexMatrix& A, const CVector& b,
                                         const CVector& y0, const TimeGrid& grid) {
    const std::size_t n = A.rows();
    if (A.cols() != n || b.size() != n || y0.size() != n)
        throw PreconditionError("solve_upper_triangular_linear: dimension mismatch");

    const double scale = A.max_abs();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(A(i, j)) > 1e-15 * scale)
                throw NotUpperTriangular(
                    "solve_upper_triangular_linear: nonzero subdiagonal entry");

    const auto closed = solve_upper_triangular_closed_form(A, b, y0, grid.t1());

    Trajectory out;
    out.times = grid.times();
    out.states.assign(grid.size(), CVector(n));
    out.valid_count = grid.size();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = out.times[i];
        bool finite = true;
        for (std::size_t c = 0; c < n; ++c) {
            const CScalar v = closed[c].eval(t);
            out.states[i][c] = v;
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) finite = false;
        }
        if (!finite && out.valid_count == grid.size()) out.valid_count = i;
    }
    return out;
}

}  // namespace carlift
