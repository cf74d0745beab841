#pragma once

#include <vector>

#include "carlift/numerics.hpp"

namespace carlift {

/// One term p(t) * e^{lambda t} with polynomial coefficients in ascending
/// powers of t.
struct ExpTerm {
    CScalar lambda;
    std::vector<CScalar> poly;
};

/// Finite sum of polynomial-times-exponential terms. Closed under the
/// operations needed to solve triangular linear ODE chains exactly:
/// scaled addition and convolution against e^{lambda t}.
class ExpPoly {
public:
    ExpPoly() = default;

    static ExpPoly constant(CScalar c);

    /// Adds p(t) e^{lambda t}, merging with an existing term of (nearly)
    /// equal exponent.
    void add(CScalar lambda, std::vector<CScalar> poly);

    void add_scaled(const ExpPoly& other, CScalar weight);

    /// Variation-of-constants kernel: returns t -> integral over [0, t] of
    /// e^{lambda_out (t - s)} * this(s) ds. t_max bounds the times the result
    /// will be evaluated at; it selects a series expansion for exponent gaps
    /// too small for the closed form to be evaluated stably.
    ExpPoly convolve_exp(CScalar lambda_out, double t_max) const;

    CScalar eval(double t) const;

    const std::vector<ExpTerm>& terms() const { return terms_; }

private:
    std::vector<ExpTerm> terms_;
};

/// Per-component closed forms for dy/dt = A y + b with upper-triangular A.
/// Components are solved from the last row upward; A's subdiagonal part is
/// ignored (callers validate triangularity).
std::vector<ExpPoly> solve_upper_triangular_closed_form(const ComplexMatrix& A,
                                                        const CVector& b,
                                                        const CVector& y0,
                                                        double t_max);

}  // namespace carlift
