#pragma once

#include <optional>

#include "carlift/numerics.hpp"
#include "carlift/trigpoly.hpp"

namespace carlift {

/// g(x) = a (1 - b e^{ix}) as a trig polynomial: g_0 = a, g_1 = -a b.
TrigPoly case_study_g(CScalar a, CScalar b = CScalar(1.0, 0.0));

/// Parameters of the single-frequency system dx/dt = a (1 - e^{ix}) with
/// |a| = 1, a = e^{i phi}, phi in [-pi/2, pi/2].
struct CaseParams {
    CScalar a;
    CScalar x0;
    double phi;

    CaseParams(CScalar a, CScalar x0);
    CaseParams(double phi, CScalar x0);
};

/// Closed-form solution x(t) = a t + x0 + i ln(1 + (e^{iat} - 1) e^{ix0})
/// with the logarithm branch tracked continuously from t = 0. Throws
/// BlowUpReached when the logarithm argument crosses zero before t.
CScalar exact_solution(const CaseParams& p, double t);

/// Closed-form solution sampled on a grid; a blow-up before t1 marks the
/// remaining samples invalid instead of throwing.
Trajectory exact_trajectory(const CaseParams& p, const TimeGrid& grid);

/// Earliest root of 1 + (e^{iat} - 1) e^{ix0} in (0, horizon], located by a
/// dip scan of the modulus followed by local refinement.
std::optional<double> detect_blowup(const CaseParams& p, double horizon);

enum class TrajectoryTag {
    BlowUp,
    LimitCycle,
    Converges,
    Diverges,
    Equilibrium,
    Unclassified,
};

struct TrajectoryClass {
    TrajectoryTag tag;
    std::optional<double> blowup_time;
};

/// Classification rules, in order: a finite-time root of the logarithm
/// argument wins; for Im a = 0 the circle |e^{-ix0} - 1| = 1 separates
/// closed orbits (inside) from drifting ones (outside); Im a < 0 converges;
/// Im a > 0 diverges except at the equilibria x0 in 2 pi Z.
TrajectoryClass classify_trajectory(const CaseParams& p);

/// Closed-form section component
/// z_{k,N}(t) = e^{ik(at + x0)} sum_{l=0}^{N-k} C(k+l-1, l)
///              (-e^{ix0} (e^{iat} - 1))^l.
CScalar exact_z(const CaseParams& p, int k, int N, double t);

/// Closed-form first-component error |z_{1,N}(t) e^{-ix(t)} - 1|
/// = |e^{ix0} (e^{iat} - 1)|^N.
double exact_error(const CaseParams& p, int N, double t);

/// h(phi, t) = |e^{iat} - 1|^2
///           = e^{-2t sin phi} - 2 e^{-t sin phi} cos(t cos phi) + 1.
double h_phi(double phi, double t);

/// First time h(phi, .) reaches e^{2 Im x0}; +infinity when the threshold is
/// never met. phi = 0 has the closed form 2 arcsin(e^{Im x0}/2) for
/// Im x0 <= ln 2.
double actual_time_range(double phi, double im_x0);

/// Guaranteed convergence window of the single-chain section,
/// (e-1)/(2e-1) e^{-|Im x0| - 2}; independent of phi and Re x0.
double cf_guaranteed_time_range(double im_x0);

/// True iff Im x0 > (1/2) ln sup_t h(phi, t) for phi in (0, pi/2], i.e. the
/// section converges on the whole half line.
bool global_window_holds(double phi, double im_x0);

}  // namespace carlift
