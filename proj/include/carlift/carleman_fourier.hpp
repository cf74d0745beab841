#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "carlift/numerics.hpp"
#include "carlift/trigpoly.hpp"

namespace carlift {

/// Nonzero pair of nonnegative integers indexing one lifted exponential
/// e^{i(alpha1 x - alpha2 x)}.
struct MultiIndex {
    int alpha1;
    int alpha2;

    int order() const { return alpha1 + alpha2; }
    bool operator==(const MultiIndex&) const = default;
};

/// Indices of order k in their block order: [k,0], [k-1,1], ..., [0,k].
std::vector<MultiIndex> block_multi_indices(int k);

/// Total dimension of the order-N section: sum of (k+1) for k = 1..N.
std::size_t cf_dimension(int N);

/// Row of a multi-index in the assembled section matrix.
std::size_t cf_row(const MultiIndex& alpha);

/// Axis-supported coupling coefficients: h_(m,0) = g_m for 0 <= m <= M,
/// h_(0,m) = g_{-m} for 1 <= m <= M, zero elsewhere.
CScalar h_gamma(const TrigPoly& g, int gamma1, int gamma2);

/// Block-upper-triangular section of the Carleman-Fourier lift over the
/// multi-indices of order 1..N, assembled as one upper-triangular matrix.
/// Entry (alpha, beta) = i (alpha1 - alpha2) h_{beta - alpha}.
struct CFSection {
    int N;
    int M;
    ComplexMatrix B;

    /// Block B_{kl} as a (k+1) x (l+1) matrix.
    ComplexMatrix block(int k, int l) const;

    /// Lifted initial state: block k holds e^{i(k-2j) x0}, j = 0..k.
    CVector initial_state(CScalar x0) const;
};

CFSection build_cf_section(const TrigPoly& g, int N);

/// Exact solve of the section (it is upper triangular; blocks resolve from
/// k = N down to 1). Components with alpha1 = alpha2 stay constant.
Trajectory solve_cf_section(const CFSection& sec, CScalar x0, const TimeGrid& grid);

/// Single-chain section available when g has nonnegative frequencies only:
/// G(k, l) = i k g_{l-k} for l >= k, bandwidth M above the diagonal.
struct ConciseCFSection {
    int N;
    int M;
    ComplexMatrix G;

    CVector initial_state(CScalar x0) const;
};

/// Throws NegativeFrequencyPresent unless g has nonnegative frequencies only.
ConciseCFSection build_concise_cf(const TrigPoly& g, int N);

Trajectory solve_concise_cf(const ConciseCFSection& sec, CScalar x0,
                            const TimeGrid& grid);

/// Growth constant 2 max(|g_0|, (|g_1|+|g_{-1}|) R, ..., (|g_M|+|g_{-M}|) R^M).
double d0_theorem(const TrigPoly& g, double R);

/// One-sided variant max(|g_0|, |g_1| R, ..., |g_M| R^M) used by the global
/// convergence rate. Never mixed with d0_theorem.
double d0_remark(const TrigPoly& g, double R);

/// Convergence guarantee for the first section block:
///
///   |y_{1,N}^{+-}(t) e^{-+ i x(t)} - 1| <= C0 N^{-3/2} e^{D0 N t}
///                                          (e^{|Im x0| + 1} / R)^{(e-1)N/(2e-1)}
///
/// on [0, T_cf_star], requiring |Im x0| < ln R - 1.
struct CFBoundReport {
    double R;
    double D0;
    double C0;
    double T_cf_star;
    double im_x0;

    double bound(int N, double t) const;
};

/// Theorem-grade report for an arbitrary trig-poly g.
CFBoundReport cf_bound_report(const TrigPoly& g, CScalar x0, double R);

/// Single-frequency specialization with D0 replaced by R (requires R >= 1,
/// implied by the strip condition).
CFBoundReport cf_bound_report_case_study(CScalar x0, double R);

double cf_bound(const TrigPoly& g, CScalar x0, double R, int N, double t);
double cf_bound_case_study(CScalar x0, double R, int N, double t);

/// Radius maximizing the case-study guaranteed time range: e^{|Im x0| + 2}.
double optimal_R(CScalar x0);

/// Recovers the state from a first-block component trajectory by the branch-
/// continuous logarithm: xi(0) = sign * x0 exactly, later samples unwrapped
/// to the nearest 2 pi multiple of the previous sample. If reference values
/// x(t) are supplied, the gate |y e^{-+ix} - 1| <= 1/2 is checked per sample
/// (GateFailed); otherwise the caller is responsible for the gate. Throws
/// BranchJump when consecutive samples move by more than pi.
Trajectory recover_state(const Trajectory& y1_traj, CScalar x0, int sign,
                         const std::optional<std::vector<CScalar>>& reference =
                             std::nullopt);

/// Parameters of the full-time-range convergence rate
/// rate = (D0 + mu0) ||[e^{ix0}, e^{-ix0}]||_2 / (mu0 R), valid under
/// mu0 = Im g_0 > 0, R > e^{|Im x0| + 1}, e^{-Im x0} < mu0 R / (D0 + mu0).
struct GlobalRateParams {
    double mu0;
    double R;
    double rate;
};

/// Throws AssumptionViolated naming the first failed clause.
GlobalRateParams global_rate(const TrigPoly& g, CScalar x0, double R);

}  // namespace carlift
