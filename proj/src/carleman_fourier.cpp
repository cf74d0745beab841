#include "carlift/carleman_fourier.hpp"

#include <cmath>
#include <numbers>

namespace carlift {

std::vector<MultiIndex> block_multi_indices(int k) {
    std::vector<MultiIndex> out;
    out.reserve(static_cast<std::size_t>(k) + 1);
    for (int j = 0; j <= k; ++j) out.push_back({k - j, j});
    return out;
}

std::size_t cf_dimension(int N) {
    return static_cast<std::size_t>(N) * (static_cast<std::size_t>(N) + 3) / 2;
}

std::size_t cf_row(const MultiIndex& alpha) {
    const int k = alpha.order();
    const std::size_t offset =
        static_cast<std::size_t>(k - 1) * (static_cast<std::size_t>(k) + 2) / 2;
    return offset + static_cast<std::size_t>(k - alpha.alpha1);
}

CScalar h_gamma(const TrigPoly& g, int gamma1, int gamma2) {
    if (gamma2 == 0 && gamma1 >= 0 && gamma1 <= g.degree()) return g.coeff(gamma1);
    if (gamma1 == 0 && gamma2 >= 1 && gamma2 <= g.degree()) return g.coeff(-gamma2);
    return CScalar(0.0, 0.0);
}

CFSection build_cf_section(const TrigPoly& g, int N) {
    if (N < 1) throw PreconditionError("build_cf_section: N must be >= 1");
    CFSection sec;
    sec.N = N;
    sec.M = g.degree();
    const std::size_t dim = cf_dimension(N);
    sec.B = ComplexMatrix(dim, dim);
    for (int k = 1; k <= N; ++k) {
        for (const auto& alpha : block_multi_indices(k)) {
            const double factor = static_cast<double>(alpha.alpha1 - alpha.alpha2);
            if (factor == 0.0) continue;
            const int l_hi = std::min(k + g.degree(), N);
            for (int l = k; l <= l_hi; ++l) {
                for (const auto& beta : block_multi_indices(l)) {
                    const CScalar h =
                        h_gamma(g, beta.alpha1 - alpha.alpha1, beta.alpha2 - alpha.alpha2);
                    if (h == CScalar(0.0, 0.0)) continue;
                    sec.B(cf_row(alpha), cf_row(beta)) = CScalar(0.0, factor) * h;
                }
            }
        }
    }
    return sec;
}

ComplexMatrix CFSection::block(int k, int l) const {
    const auto rows = block_multi_indices(k);
    const auto cols = block_multi_indices(l);
    ComplexMatrix out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            out(i, j) = B(cf_row(rows[i]), cf_row(cols[j]));
    return out;
}

CVector CFSection::initial_state(CScalar x0) const {
    // e^{i(k-2j) x0} assembled from repeated products of e^{+-i x0}.
    const CScalar p = std::exp(CScalar(0.0, 1.0) * x0);
    const CScalar q = std::exp(CScalar(0.0, -1.0) * x0);
    std::vector<CScalar> p_pow(static_cast<std::size_t>(N) + 1, CScalar(1.0, 0.0));
    std::vector<CScalar> q_pow(static_cast<std::size_t>(N) + 1, CScalar(1.0, 0.0));
    for (int j = 1; j <= N; ++j) {
        p_pow[static_cast<std::size_t>(j)] = p_pow[static_cast<std::size_t>(j - 1)] * p;
        q_pow[static_cast<std::size_t>(j)] = q_pow[static_cast<std::size_t>(j - 1)] * q;
    }
    CVector y0(cf_dimension(N));
    for (int k = 1; k <= N; ++k)
        for (const auto& alpha : block_multi_indices(k))
            y0[cf_row(alpha)] = p_pow[static_cast<std::size_t>(alpha.alpha1)] *
                                q_pow[static_cast<std::size_t>(alpha.alpha2)];
    return y0;
}

Trajectory solve_cf_section(const CFSection& sec, CScalar x0, const TimeGrid& grid) {
    const CVector b(cf_dimension(sec.N), CScalar(0.0, 0.0));
    return solve_upper_triangular_linear(sec.B, b, sec.initial_state(x0), grid);
}

ConciseCFSection build_concise_cf(const TrigPoly& g, int N) {
    if (N < 1) throw PreconditionError("build_concise_cf: N must be >= 1");
    if (!g.has_nonnegative_frequencies_only())
        throw NegativeFrequencyPresent(
            "build_concise_cf: governing function has a negative frequency");
    ConciseCFSection sec;
    sec.N = N;
    sec.M = g.degree();
    sec.G = ComplexMatrix(static_cast<std::size_t>(N), static_cast<std::size_t>(N));
    for (int k = 1; k <= N; ++k)
        for (int l = k; l <= std::min(N, k + g.degree()); ++l)
            sec.G(static_cast<std::size_t>(k - 1), static_cast<std::size_t>(l - 1)) =
                CScalar(0.0, static_cast<double>(k)) * g.coeff(l - k);
    return sec;
}

CVector ConciseCFSection::initial_state(CScalar x0) const {
    CVector z0(static_cast<std::size_t>(N));
    const CScalar p = std::exp(CScalar(0.0, 1.0) * x0);
    CScalar v = p;
    for (int k = 0; k < N; ++k) {
        z0[static_cast<std::size_t>(k)] = v;
        v *= p;
    }
    return z0;
}

Trajectory solve_concise_cf(const ConciseCFSection& sec, CScalar x0,
                            const TimeGrid& grid) {
    const CVector b(static_cast<std::size_t>(sec.N), CScalar(0.0, 0.0));
    return solve_upper_triangular_linear(sec.G, b, sec.initial_state(x0), grid);
}

double d0_theorem(const TrigPoly& g, double R) {
    double m0 = std::abs(g.coeff(0));
    double best = m0;
    double r_pow = 1.0;
    for (int m = 1; m <= g.degree(); ++m) {
        r_pow *= R;
        best = std::max(best, (std::abs(g.coeff(m)) + std::abs(g.coeff(-m))) * r_pow);
    }
    return 2.0 * best;
}

double d0_remark(const TrigPoly& g, double R) {
    double best = std::abs(g.coeff(0));
    double r_pow = 1.0;
    for (int m = 1; m <= g.degree(); ++m) {
        r_pow *= R;
        best = std::max(best, std::abs(g.coeff(m)) * r_pow);
    }
    return best;
}

namespace {

constexpr double kEuler = std::numbers::e;

CFBoundReport make_cf_report(double im_x0, double R, double D0) {
    const double abs_im = std::abs(im_x0);
    if (!(abs_im < std::log(R) - 1.0))
        throw InitialOutOfStrip(
            "cf_bound: require |Im x0| < ln R - 1 (and hence R > e)");
    CFBoundReport rep;
    rep.R = R;
    rep.D0 = D0;
    rep.im_x0 = im_x0;
    rep.C0 = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * (kEuler - 1.0)) *
             std::exp((3.0 * kEuler - 1.0) / (2.0 * kEuler - 1.0) * abs_im +
                      (3.0 * kEuler - 1.0) / (2.0 * kEuler - 1.0) * std::log(R) -
                      kEuler / (2.0 * kEuler - 1.0));
    rep.T_cf_star = (kEuler - 1.0) / ((2.0 * kEuler - 1.0) * D0) *
                    std::log(R / std::exp(abs_im + 1.0));
    return rep;
}

}  // namespace

double CFBoundReport::bound(int N, double t) const {
    if (N < 1) throw PreconditionError("cf_bound: N must be >= 1");
    if (!(t >= 0.0)) throw PreconditionError("cf_bound: t must be >= 0");
    if (t > T_cf_star * (1.0 + 1e-12))
        throw OutOfTimeRange("cf_bound: t exceeds T_cf_star");
    const double ratio = std::exp(std::abs(im_x0) + 1.0) / R;
    const double exponent =
        (kEuler - 1.0) / (2.0 * kEuler - 1.0) * static_cast<double>(N);
    return C0 * std::pow(static_cast<double>(N), -1.5) *
           std::exp(D0 * static_cast<double>(N) * t) * std::pow(ratio, exponent);
}

CFBoundReport cf_bound_report(const TrigPoly& g, CScalar x0, double R) {
    return make_cf_report(x0.imag(), R, d0_theorem(g, R));
}

CFBoundReport cf_bound_report_case_study(CScalar x0, double R) {
    return make_cf_report(x0.imag(), R, R);
}

double cf_bound(const TrigPoly& g, CScalar x0, double R, int N, double t) {
    return cf_bound_report(g, x0, R).bound(N, t);
}

double cf_bound_case_study(CScalar x0, double R, int N, double t) {
    return cf_bound_report_case_study(x0, R).bound(N, t);
}

double optimal_R(CScalar x0) { return std::exp(std::abs(x0.imag()) + 2.0); }

Trajectory recover_state(const Trajectory& y1_traj, CScalar x0, int sign,
                         const std::optional<std::vector<CScalar>>& reference) {
    if (sign != 1 && sign != -1)
        throw PreconditionError("recover_state: sign must be +1 or -1");
    if (y1_traj.dimension() < 1)
        throw PreconditionError("recover_state: empty trajectory");
    if (reference && reference->size() < y1_traj.valid_count)
        throw PreconditionError("recover_state: reference shorter than trajectory");

    const double two_pi = 2.0 * std::numbers::pi;
    Trajectory out;
    out.times = y1_traj.times;
    out.states.assign(y1_traj.size(), CVector{CScalar(0.0, 0.0)});
    out.valid_count = y1_traj.valid_count;

    CScalar prev = static_cast<double>(sign) * x0;
    for (std::size_t i = 0; i < y1_traj.valid_count; ++i) {
        const CScalar y = y1_traj.at(i, 0);
        if (reference) {
            const CScalar gate =
                y * std::exp(CScalar(0.0, -static_cast<double>(sign)) * (*reference)[i]) -
                CScalar(1.0, 0.0);
            if (!(std::abs(gate) <= 0.5 + 1e-12))
                throw GateFailed("recover_state: |y e^{-+ix} - 1| exceeds 1/2");
        }
        CScalar xi;
        if (i == 0) {
            xi = prev;  // pinned exactly to sign * x0
        } else {
            const CScalar raw = CScalar(0.0, -1.0) * principal_log(y);
            const double shift =
                std::round((prev.real() - raw.real()) / two_pi) * two_pi;
            xi = CScalar(raw.real() + shift, raw.imag());
            if (std::abs(xi - prev) > std::numbers::pi)
                throw BranchJump(
                    "recover_state: consecutive samples differ by more than pi");
        }
        out.states[i][0] = xi;
        prev = xi;
    }
    for (std::size_t i = y1_traj.valid_count; i < y1_traj.size(); ++i)
        out.states[i][0] = prev;
    return out;
}

GlobalRateParams global_rate(const TrigPoly& g, CScalar x0, double R) {
    const double mu0 = g.coeff(0).imag();
    if (!(mu0 > 0.0))
        throw AssumptionViolated("global_rate: clause mu0 = Im g_0 > 0 failed");
    if (!(R > std::exp(std::abs(x0.imag()) + 1.0)))
        throw AssumptionViolated("global_rate: clause R > e^{|Im x0|+1} failed");
    const double D0 = d0_remark(g, R);
    if (!(std::exp(-x0.imag()) < mu0 * R / (D0 + mu0)))
        throw AssumptionViolated(
            "global_rate: clause e^{-Im x0} < mu0 R / (D0 + mu0) failed");
    const double norm =
        std::sqrt(std::exp(-2.0 * x0.imag()) + std::exp(2.0 * x0.imag()));
    return {mu0, R, (D0 + mu0) * norm / (mu0 * R)};
}

}  // namespace carlift
