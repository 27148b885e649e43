#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace sfcapm {

struct GaussNewtonOptions {
    int max_iter = 100;
    double step_tol = 1e-13; // stop when the damped step is this small
    double damping = 1.0;    // scales every step before backtracking
    double sv_tol = 1e-12;   // singular values below sv_tol * largest are truncated
};

struct GaussNewtonOutcome {
    Eigen::VectorXd x;
    double sse = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Damped Gauss-Newton with a minimum-norm step. The step solves
// min ||J d + r|| through the SVD pseudo-inverse, truncating singular values
// below sv_tol relative to the largest; on rank-deficient Jacobians that picks
// the smallest step among the minimizers, so the iterate drifts as little as
// possible along null directions. Backtracking halves the step while it does
// not reduce the sum of squares.
template <typename ResidualFn, typename JacobianFn>
GaussNewtonOutcome gauss_newton_minimum_norm(ResidualFn&& residual, JacobianFn&& jacobian,
                                             Eigen::VectorXd x,
                                             const GaussNewtonOptions& opts = {}) {
    GaussNewtonOutcome out;
    Eigen::VectorXd r = residual(x);
    double sse = r.squaredNorm();

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        Eigen::MatrixXd jac = jacobian(x);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        const double cutoff = opts.sv_tol * (sv.size() > 0 ? sv(0) : 0.0);

        Eigen::VectorXd ur = svd.matrixU().transpose() * r;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            ur(i) = sv(i) > cutoff ? ur(i) / sv(i) : 0.0;
        Eigen::VectorXd step = -opts.damping * (svd.matrixV() * ur);

        // backtrack until the sum of squares does not increase
        double scale = 1.0;
        Eigen::VectorXd x_next;
        Eigen::VectorXd r_next;
        double sse_next = sse;
        for (int k = 0; k < 30; ++k) {
            x_next = x + scale * step;
            r_next = residual(x_next);
            sse_next = r_next.squaredNorm();
            if (sse_next <= sse) break;
            scale *= 0.5;
        }
        if (sse_next > sse) {
            // no productive step remains
            out.x = std::move(x);
            out.sse = sse;
            out.iterations = iter;
            out.converged = true;
            return out;
        }

        const double step_norm = (scale * step).lpNorm<Eigen::Infinity>();
        x = std::move(x_next);
        r = std::move(r_next);
        sse = sse_next;
        out.iterations = iter + 1;

        if (step_norm < opts.step_tol * (1.0 + x.lpNorm<Eigen::Infinity>())) {
            out.x = std::move(x);
            out.sse = sse;
            out.converged = true;
            return out;
        }
    }

    out.x = std::move(x);
    out.sse = sse;
    out.converged = false;
    return out;
}

} // namespace sfcapm
