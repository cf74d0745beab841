#include "carlift/casestudy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace carlift {

namespace {

constexpr double kBlowUpTol = 1e-10;
constexpr double kWalkStep = 1e-3;
constexpr double kPi = std::numbers::pi;

// Log argument w(t) = 1 + (e^{iat} - 1) e^{ix0}.
CScalar log_argument(const CaseParams& p, double t) {
    const CScalar eiat = std::exp(CScalar(0.0, 1.0) * p.a * t);
    const CScalar eix0 = std::exp(CScalar(0.0, 1.0) * p.x0);
    return 1.0 + (eiat - 1.0) * eix0;
}

// Walks the log-argument path from t = 0 keeping the argument's angle
// continuous. Steps are capped at kWalkStep and refined wherever the path
// turns fast, so per-step angle increments stay well inside (-pi, pi).
class BranchWalker {
public:
    explicit BranchWalker(const CaseParams& p) : p_(p) {}

    // Advances to time t (non-decreasing across calls). Returns false once a
    // blow-up was hit; blowup_time() then holds the crossing time.
    bool advance(double t) {
        if (blown_) return false;
        while (t - s_ > 1e-15 * std::max(1.0, t)) {
            double h = std::min(kWalkStep, t - s_);
            CScalar w_next;
            for (;;) {
                w_next = log_argument(p_, s_ + h);
                if (std::abs(w_next) <= kBlowUpTol) {
                    blown_ = true;
                    blowup_time_ = s_ + h;
                    return false;
                }
                if (std::abs(w_next - w_) <=
                    0.3 * std::max(std::abs(w_), std::abs(w_next)))
                    break;
                if (h <= 1e-13) {
                    // Splitting exhausted: the path is grazing the origin.
                    blown_ = true;
                    blowup_time_ = s_ + h;
                    return false;
                }
                h *= 0.5;
            }
            angle_ += std::arg(w_next / w_);
            w_ = w_next;
            s_ += h;
        }
        s_ = t;
        return true;
    }

    // x(t) at the current walk position.
    CScalar value() const {
        const CScalar log_w(std::log(std::abs(w_)), angle_);
        return p_.a * s_ + p_.x0 + CScalar(0.0, 1.0) * log_w;
    }

    double blowup_time() const { return blowup_time_; }

private:
    CaseParams p_;
    double s_ = 0.0;
    CScalar w_{1.0, 0.0};
    double angle_ = 0.0;
    bool blown_ = false;
    double blowup_time_ = 0.0;
};

}  // namespace

TrigPoly case_study_g(CScalar a, CScalar b) {
    return TrigPoly(1, {CScalar(0.0, 0.0), a, -a * b});
}

CaseParams::CaseParams(CScalar a_in, CScalar x0_in) : a(a_in), x0(x0_in) {
    if (std::abs(std::abs(a) - 1.0) > 1e-12)
        throw PreconditionError("CaseParams: |a| must equal 1");
    phi = std::arg(a);
    if (std::abs(phi) > kPi / 2.0 + 1e-12)
        throw PreconditionError("CaseParams: phase of a must lie in [-pi/2, pi/2]");
}

CaseParams::CaseParams(double phi_in, CScalar x0_in)
    : a(std::exp(CScalar(0.0, phi_in))), x0(x0_in), phi(phi_in) {
    if (std::abs(phi_in) > kPi / 2.0 + 1e-12)
        throw PreconditionError("CaseParams: phi must lie in [-pi/2, pi/2]");
}

CScalar exact_solution(const CaseParams& p, double t) {
    if (!(t >= 0.0)) throw PreconditionError("exact_solution: t must be >= 0");
    BranchWalker walker(p);
    if (!walker.advance(t))
        throw BlowUpReached("exact_solution: logarithm argument crossed zero",
                            walker.blowup_time());
    return walker.value();
}

Trajectory exact_trajectory(const CaseParams& p, const TimeGrid& grid) {
    Trajectory out;
    out.times = grid.times();
    out.states.reserve(grid.size());
    BranchWalker walker(p);
    CScalar last(0.0, 0.0);
    std::size_t valid = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (walker.advance(out.times[i])) {
            last = walker.value();
            out.states.push_back({last});
            valid = i + 1;
        } else {
            out.states.push_back({last});
        }
    }
    out.valid_count = valid;
    return out;
}

std::optional<double> detect_blowup(const CaseParams& p, double horizon) {
    if (!(horizon > 0.0))
        throw PreconditionError("detect_blowup: horizon must be positive");

    const double dt = std::max(kWalkStep, horizon / 2e6);
    const std::size_t n = static_cast<std::size_t>(std::ceil(horizon / dt));
    std::vector<double> mod(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        const double t = std::min(horizon, static_cast<double>(j) * dt);
        mod[j] = std::abs(log_argument(p, t));
    }

    // Golden-section refinement of |w| around a sampled dip.
    const auto refine = [&](double lo, double hi) {
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = hi - gr * (hi - lo);
        double d = lo + gr * (hi - lo);
        double fc = std::abs(log_argument(p, c));
        double fd = std::abs(log_argument(p, d));
        for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
            if (fc < fd) {
                hi = d;
                d = c;
                fd = fc;
                c = hi - gr * (hi - lo);
                fc = std::abs(log_argument(p, c));
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + gr * (hi - lo);
                fd = std::abs(log_argument(p, d));
            }
        }
        const double t = 0.5 * (lo + hi);
        return std::pair<double, double>(t, std::abs(log_argument(p, t)));
    };

    for (std::size_t j = 1; j <= n; ++j) {
        const bool local_min =
            mod[j] <= mod[j - 1] && (j == n || mod[j] <= mod[j + 1]);
        if (!local_min) continue;
        const double lo = static_cast<double>(j - 1) * dt;
        const double hi = std::min(horizon, static_cast<double>(j + 1) * dt);
        const auto [t_min, m_min] = refine(lo, hi);
        if (!(m_min <= 1e-6) || !(t_min > 0.0) || t_min > horizon) continue;
        // Transversality: a root is a V-shaped dip, while an asymptotic
        // approach to zero (the positive-rotation equilibria) stays flat.
        const double before =
            t_min > dt ? std::abs(log_argument(p, t_min - dt)) : 1.0;
        const double after = std::abs(log_argument(p, t_min + dt));
        if (before > 3.0 * m_min && after > 3.0 * m_min) return t_min;
    }
    return std::nullopt;
}

TrajectoryClass classify_trajectory(const CaseParams& p) {
    const double s = std::sin(p.phi);
    double horizon;
    if (std::abs(s) <= 1e-9) {
        // The log-argument path is 2 pi periodic; one period decides.
        horizon = 2.0 * kPi + 0.1;
    } else {
        horizon = std::min(
            1000.0, std::max(2.0 * kPi + 0.1,
                             (std::abs(p.x0.imag()) + 20.0) / std::abs(s)));
    }
    if (const auto t0 = detect_blowup(p, horizon))
        return {TrajectoryTag::BlowUp, t0};

    if (std::abs(p.a.imag()) <= 1e-12) {
        const double d = std::abs(std::exp(CScalar(0.0, -1.0) * p.x0) - 1.0);
        // |d - 1| <= 1e-12 is in practice shadowed by the blow-up branch
        // (the unit circle is the blow-up set for real a); kept as an
        // explicit result for detector misses.
        if (std::abs(d - 1.0) <= 1e-12) return {TrajectoryTag::Unclassified, {}};
        if (d < 1.0) return {TrajectoryTag::LimitCycle, {}};
        return {TrajectoryTag::Diverges, {}};
    }
    if (p.a.imag() < 0.0) return {TrajectoryTag::Converges, {}};
    const double re_mod =
        p.x0.real() - 2.0 * kPi * std::round(p.x0.real() / (2.0 * kPi));
    if (std::abs(p.x0.imag()) <= 1e-12 && std::abs(re_mod) <= 1e-12)
        return {TrajectoryTag::Equilibrium, {}};
    return {TrajectoryTag::Diverges, {}};
}

CScalar exact_z(const CaseParams& p, int k, int N, double t) {
    if (k < 1 || k > N) throw PreconditionError("exact_z: require 1 <= k <= N");
    const CScalar eix0 = std::exp(CScalar(0.0, 1.0) * p.x0);
    const CScalar eiat = std::exp(CScalar(0.0, 1.0) * p.a * t);
    const CScalar u = -eix0 * (eiat - 1.0);
    const CScalar phase =
        std::exp(CScalar(0.0, static_cast<double>(k)) * (p.a * t + p.x0));
    CScalar sum(0.0, 0.0);
    CScalar term(1.0, 0.0);  // C(k+l-1, l) u^l by running update
    for (int l = 0; l <= N - k; ++l) {
        if (l > 0) term *= u * static_cast<double>(k + l - 1) / static_cast<double>(l);
        sum += term;
    }
    return phase * sum;
}

double exact_error(const CaseParams& p, int N, double t) {
    if (N < 1) throw PreconditionError("exact_error: N must be >= 1");
    const double q = std::abs(std::exp(CScalar(0.0, 1.0) * p.x0) *
                              (std::exp(CScalar(0.0, 1.0) * p.a * t) - 1.0));
    return std::pow(q, static_cast<double>(N));
}

double h_phi(double phi, double t) {
    if (std::abs(phi) > kPi / 2.0 + 1e-12)
        throw PreconditionError("h_phi: phi must lie in [-pi/2, pi/2]");
    if (!(t >= 0.0)) throw PreconditionError("h_phi: t must be >= 0");
    const double s = std::sin(phi);
    const double c = std::cos(phi);
    return std::exp(-2.0 * t * s) - 2.0 * std::exp(-t * s) * std::cos(t * c) + 1.0;
}

namespace {

// First t in (0, cap] with h(phi, t) >= threshold, refined by bisection.
std::optional<double> first_h_crossing(double phi, double threshold, double cap) {
    const double step = std::max(1e-3, cap / 5e6);
    double prev_t = 0.0;
    double prev_h = h_phi(phi, 0.0);
    for (double t = step; t <= cap + 0.5 * step; t += step) {
        const double tt = std::min(t, cap);
        const double h = h_phi(phi, tt);
        if (h >= threshold) {
            double lo = prev_t, hi = tt;
            for (int it = 0; it < 80 && hi - lo > 1e-9; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (h_phi(phi, mid) >= threshold)
                    hi = mid;
                else
                    lo = mid;
            }
            return hi;
        }
        prev_t = tt;
        prev_h = h;
    }
    (void)prev_h;
    return std::nullopt;
}

}  // namespace

double actual_time_range(double phi, double im_x0) {
    if (std::abs(phi) > kPi / 2.0 + 1e-12)
        throw PreconditionError("actual_time_range: phi must lie in [-pi/2, pi/2]");
    const double inf = std::numeric_limits<double>::infinity();

    if (std::abs(phi) <= 1e-12) {
        // h(0, t) = 2 - 2 cos t crosses e^{2 Im x0} iff e^{Im x0}/2 <= 1.
        if (im_x0 > std::numbers::ln2) return inf;
        return 2.0 * std::asin(std::exp(im_x0) / 2.0);
    }

    const double threshold = std::exp(2.0 * im_x0);
    const double s = std::sin(phi);
    const double c = std::cos(phi);

    if (phi < 0.0) {
        // h >= (e^{t|s|} - 1)^2, so the crossing happens no later than
        // ln(1 + e^{Im x0}) / |s|.
        const double cap = std::log(1.0 + std::exp(im_x0)) / -s + 1.0;
        const auto hit = first_h_crossing(phi, threshold, cap);
        return hit ? *hit : inf;
    }

    // phi > 0: h <= (1 + e^{-ts})^2 < 4 and h -> 1.
    if (c <= 1e-9) {
        // h = (1 - e^{-ts})^2, monotone increasing to 1.
        if (threshold >= 1.0) return inf;
        return -std::log(1.0 - std::sqrt(threshold)) / s;
    }
    if (threshold >= 4.0) return inf;
    double cap;
    if (threshold > 1.0) {
        // The envelope (1 + e^{-ts})^2 drops below the threshold past
        // t = ln(1/(sqrt(threshold)-1))/s; beyond one more period there is
        // nothing left to cross.
        const double amp = std::sqrt(threshold) - 1.0;
        cap = std::max(0.0, std::log(1.0 / amp) / s) + 2.0 * (2.0 * kPi / c);
    } else {
        cap = 2.0 * kPi / c + 1.0;
    }
    const auto hit = first_h_crossing(phi, threshold, cap);
    return hit ? *hit : inf;
}

double cf_guaranteed_time_range(double im_x0) {
    const double e = std::numbers::e;
    return (e - 1.0) / (2.0 * e - 1.0) * std::exp(-std::abs(im_x0) - 2.0);
}

bool global_window_holds(double phi, double im_x0) {
    if (!(phi > 0.0) || phi > kPi / 2.0 + 1e-12)
        throw PreconditionError("global_window_holds: phi must lie in (0, pi/2]");
    double sup = 1.0;  // h -> 1 as t -> infinity for phi > 0
    for (double t = 0.0; t <= 100.0; t += 1e-3)
        sup = std::max(sup, h_phi(phi, t));
    return im_x0 > 0.5 * std::log(sup);
}

}  // namespace carlift
