#include "carlift/exppoly.hpp"

#include <algorithm>
#include <cmath>

namespace carlift {

namespace {

bool near_equal(CScalar a, CScalar b) {
    return std::abs(a - b) <=
           1e-13 * std::max({1.0, std::abs(a), std::abs(b)});
}

std::vector<CScalar> antiderivative(const std::vector<CScalar>& p) {
    std::vector<CScalar> out(p.size() + 1, CScalar(0.0, 0.0));
    for (std::size_t j = 0; j < p.size(); ++j)
        out[j + 1] = p[j] / static_cast<double>(j + 1);
    return out;
}

void trim(std::vector<CScalar>& p) {
    while (p.size() > 1 && p.back() == CScalar(0.0, 0.0)) p.pop_back();
}

// max_j |p_j| t^j, a crude sup-norm proxy used for branch selection.
double poly_scale(const std::vector<CScalar>& p, double t) {
    double scale = 0.0;
    double t_pow = 1.0;
    for (const auto& c : p) {
        scale = std::max(scale, std::abs(c) * t_pow);
        t_pow *= t;
    }
    return scale;
}

// integral over [0, t] of p(s) e^{delta s} ds as a polynomial factor of
// e^{0 s}: the exponential is expanded in powers of delta. Stable whenever
// |delta| t stays moderate; the truncation is relative to the polynomial's
// own scale.
std::vector<CScalar> series_integral(const std::vector<CScalar>& p, CScalar delta,
                                     double t_max) {
    const double gap = std::abs(delta);
    double p_scale = poly_scale(p, t_max) * t_max;
    if (p_scale == 0.0) p_scale = 1.0;
    std::vector<CScalar> acc;
    CScalar delta_factor(1.0, 0.0);
    double row_scale = p_scale;
    for (int m = 0; m <= 256; ++m) {
        for (std::size_t j = 0; j < p.size(); ++j) {
            const std::size_t deg = j + static_cast<std::size_t>(m) + 1;
            if (acc.size() < deg + 1) acc.resize(deg + 1, CScalar(0.0, 0.0));
            acc[deg] += delta_factor * p[j] / static_cast<double>(deg);
        }
        delta_factor *= delta / static_cast<double>(m + 1);
        row_scale *= gap * t_max / static_cast<double>(m + 1);
        if (m >= 1 && row_scale <= 1e-18 * p_scale) break;
    }
    return acc;
}

}  // namespace

ExpPoly ExpPoly::constant(CScalar c) {
    ExpPoly out;
    out.add(CScalar(0.0, 0.0), {c});
    return out;
}

void ExpPoly::add(CScalar lambda, std::vector<CScalar> poly) {
    trim(poly);
    if (poly.size() == 1 && poly[0] == CScalar(0.0, 0.0)) return;
    for (auto& term : terms_) {
        if (near_equal(term.lambda, lambda)) {
            if (term.poly.size() < poly.size()) term.poly.resize(poly.size());
            for (std::size_t j = 0; j < poly.size(); ++j) term.poly[j] += poly[j];
            return;
        }
    }
    terms_.push_back({lambda, std::move(poly)});
}

void ExpPoly::add_scaled(const ExpPoly& other, CScalar weight) {
    if (weight == CScalar(0.0, 0.0)) return;
    for (const auto& term : other.terms_) {
        std::vector<CScalar> p = term.poly;
        for (auto& c : p) c *= weight;
        add(term.lambda, std::move(p));
    }
}

ExpPoly ExpPoly::convolve_exp(CScalar lambda_out, double t_max) const {
    ExpPoly out;
    for (const auto& term : terms_) {
        const CScalar delta = term.lambda - lambda_out;
        const double gap = std::abs(delta);
        const double res_tol =
            1e-14 * std::max({1.0, std::abs(lambda_out), std::abs(term.lambda)});

        if (gap <= res_tol) {
            // Resonant: integral of p against a matching exponential.
            out.add(lambda_out, antiderivative(term.poly));
            continue;
        }

        if (gap * t_max >= 0.7) {
            // Closed form by repeated integration by parts:
            //   integral = q(t) e^{mu t} - q(0) e^{lambda_out t},
            //   q = p/delta - p'/delta^2 + p''/delta^3 - ...
            // Unstable once the polynomial degree outgrows |delta| t; the
            // magnitude check below falls back to the series form then.
            std::vector<CScalar> derivative = term.poly;
            std::vector<CScalar> q(term.poly.size(), CScalar(0.0, 0.0));
            CScalar inv_pow = 1.0 / delta;
            double sign = 1.0;
            while (true) {
                for (std::size_t j = 0; j < derivative.size(); ++j)
                    q[j] += sign * derivative[j] * inv_pow;
                if (derivative.size() == 1) break;
                std::vector<CScalar> next(derivative.size() - 1);
                for (std::size_t j = 1; j < derivative.size(); ++j)
                    next[j - 1] = derivative[j] * static_cast<double>(j);
                derivative = std::move(next);
                inv_pow /= delta;
                sign = -sign;
            }
            const double amplification =
                poly_scale(q, t_max) /
                std::max(poly_scale(term.poly, t_max), 1e-300);
            if (amplification <= 1e4) {
                const CScalar q0 = q[0];
                out.add(term.lambda, std::move(q));
                out.add(lambda_out, {-q0});
                continue;
            }
        }

        out.add(lambda_out, series_integral(term.poly, delta, t_max));
    }
    return out;
}

CScalar ExpPoly::eval(double t) const {
    CScalar sum(0.0, 0.0);
    for (const auto& term : terms_) {
        CScalar p(0.0, 0.0);
        for (std::size_t j = term.poly.size(); j-- > 0;) p = p * t + term.poly[j];
        sum += p * std::exp(term.lambda * t);
    }
    return sum;
}

std::vector<ExpPoly> solve_upper_triangular_closed_form(const ComplexMatrix& A,
                                                        const CVector& b,
                                                        const CVector& y0,
                                                        double t_max) {
    const std::size_t n = A.rows();
    std::vector<ExpPoly> solution(n);
    for (std::size_t k = n; k-- > 0;) {
        ExpPoly forcing;
        if (b[k] != CScalar(0.0, 0.0)) forcing.add(CScalar(0.0, 0.0), {b[k]});
        for (std::size_t j = k + 1; j < n; ++j)
            if (A(k, j) != CScalar(0.0, 0.0))
                forcing.add_scaled(solution[j], A(k, j));
        ExpPoly yk = forcing.convolve_exp(A(k, k), t_max);
        yk.add(A(k, k), {y0[k]});
        solution[k] = std::move(yk);
    }
    return solution;
}

}  // namespace carlift
