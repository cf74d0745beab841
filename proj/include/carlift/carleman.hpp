#pragma once

#include "carlift/numerics.hpp"
#include "carlift/trigpoly.hpp"

namespace carlift {

/// Order-N truncation of the Carleman lift of dx/dt = sum c_n x^n: the
/// leading N x N principal submatrix with entry (k, k') = k c_{k'-k+1}
/// (1-based, zero when k' < k - 1) plus the affine term [c_0, 0, ..., 0].
struct CarlemanSection {
    int N;
    ComplexMatrix A;
    CVector a;
    MaclaurinSeries source;

    /// The matrix is upper triangular exactly when the expansion point is an
    /// equilibrium, c_0 = 0.
    bool is_upper_triangular() const { return source.c(0) == CScalar(0.0, 0.0); }
};

CarlemanSection build_carleman_section(const MaclaurinSeries& c, int N);

/// Solves the section with initial state [x0, x0^2, ..., x0^N]. Dispatches to
/// the exact triangular solver when c_0 = 0, otherwise integrates with rk45.
Trajectory solve_finite_section(const CarlemanSection& sec, CScalar x0,
                                const TimeGrid& grid);

/// Convergence guarantee for the first section component under the
/// analyticity envelope |c_n| <= C0 R0^{n-1} / n!:
///
///   |x_{1,N}(t) - x(t)| <= (tilde_R0 e^{tilde_R0} / (sqrt(2 pi) R0)) N^{-3/2}
///                          * ((R0 |x0| e / tilde_R0) e^{C0 (1 + 1/tilde_R0)
///                             e^{tilde_R0} t})^N
///
/// valid on [0, T_star].
struct CarlemanBoundReport {
    double C0;
    double R0;
    CScalar x0;
    double tilde_R0;
    double T_star;

    /// Bound value at (N, t); throws OutOfTimeRange for t > T_star.
    double bound(int N, double t) const;
};

CarlemanBoundReport make_carleman_bound_report(double C0, double R0, CScalar x0);

double carleman_bound(double C0, double R0, CScalar x0, int N, double t);

/// Guaranteed containment time: |x(t)| <= M0 for all
/// t <= M0 R0 / (C0 (e^{R0 M0} - 1)) * ln(M0 / |x0|).
/// Throws InvalidBound unless M0 > |x0| > 0.
double local_state_bound(double C0, double R0, CScalar x0, double M0);

}  // namespace carlift
