#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "carlift/errors.hpp"

namespace carlift {

using CScalar = std::complex<double>;
using CVector = std::vector<CScalar>;

/// Trajectories whose sup-norm exceeds this are declared numerically blown up.
inline constexpr double kOverflowGuard = 1e12;

/// Uniform sampling of [t0, t1] with n_steps intervals (n_steps + 1 samples).
class TimeGrid {
public:
    TimeGrid(double t0, double t1, std::size_t n_steps);

    double t0() const { return t0_; }
    double t1() const { return t1_; }
    std::size_t n_steps() const { return n_steps_; }
    std::size_t size() const { return n_steps_ + 1; }

    /// i-th sample; endpoints are exact.
    double operator[](std::size_t i) const;

    std::vector<double> times() const;

private:
    double t0_;
    double t1_;
    std::size_t n_steps_;
};

/// Sampled solution of a (lifted) system: one complex vector per grid time.
/// Samples at indices >= valid_count are placeholders past a numeric
/// blow-up or overflow and must not be consumed.
struct Trajectory {
    std::vector<double> times;
    std::vector<CVector> states;
    std::size_t valid_count = 0;

    std::size_t size() const { return times.size(); }
    std::size_t dimension() const { return states.empty() ? 0 : states.front().size(); }
    bool fully_valid() const { return valid_count == times.size(); }

    const CScalar& at(std::size_t sample, std::size_t component) const {
        return states[sample][component];
    }

    /// One component across all samples.
    std::vector<CScalar> component(std::size_t c) const;

    /// Single-component trajectory holding component c of this one.
    Trajectory extract_component(std::size_t c) const;
};

/// Principal-branch complex logarithm: ln|z| + i.Arg(z), Arg(z) in (-pi, pi].
/// Throws DomainError on z = 0.
CScalar principal_log(CScalar z);

/// Adaptive Simpson quadrature of a complex-valued integrand over [a, b]
/// to the given absolute tolerance.
CScalar adaptive_simpson(const std::function<CScalar(double)>& f, double a, double b,
                         double abs_tol);

/// Autonomous vector field: writes dy/dt into dydt (same dimension as y).
using VectorField = std::function<void(const CVector& y, CVector& dydt)>;

/// Adaptive embedded Runge-Kutta 4(5) with Dormand-Prince coefficients,
/// sampled onto the grid. Marks the trajectory invalid past any accepted
/// step whose sup-norm exceeds kOverflowGuard. Throws StepSizeUnderflow
/// when the step falls below 1e-14 * (t1 - t0).
Trajectory rk45(const VectorField& f, const CVector& y0, const TimeGrid& grid,
                double rtol, double atol);

/// Dense row-major complex matrix.
class ComplexMatrix {
public:
    ComplexMatrix() : rows_(0), cols_(0) {}
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    CScalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const CScalar& operator()(std::size_t i, std::size_t j) const {
        return data_[i * cols_ + j];
    }

    double max_abs() const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<CScalar> data_;
};

/// Exact solution of dy/dt = A y + b for upper-triangular A: the last
/// component in closed form, the others by variation of constants, evaluated
/// on the grid. Throws NotUpperTriangular if a subdiagonal entry exceeds
/// 1e-15 relative to the largest entry.
Trajectory solve_upper_triangular_linear(const ComplexMatrix& A, const CVector& b,
                                         const CVector& y0, const TimeGrid& grid);

}  // namespace carlift
