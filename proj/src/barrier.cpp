#include "barrier.hpp"

#include <cmath>
#include <limits>

namespace newsmech::detail {

namespace {

double objective(const SeparableConcaveProblem& p, const Eigen::VectorXd& x) {
    double v = p.lin.dot(x);
    for (int j = 0; j < p.n_sep; ++j) {
        double h, dh, d2h;
        p.sep(j, x[j], h, dh, d2h);
        v -= h;
    }
    return v;
}

// Barrier function value; +inf outside the strict interior.
double phi(const SeparableConcaveProblem& p, const Eigen::VectorXd& x, double t) {
    Eigen::VectorXd g = p.A * x;
    double s = 0.0;
    for (int i = 0; i < g.size(); ++i) {
        if (!(g[i] < 0.0)) return -std::numeric_limits<double>::infinity();
        s += std::log(-g[i]);
    }
    return t * objective(p, x) + s;
}

}  // namespace

BarrierResult barrier_maximize(const SeparableConcaveProblem& p, Eigen::VectorXd x, double gap_tol, int max_newton) {
    const int n = static_cast<int>(x.size());
    const int m = static_cast<int>(p.A.rows());
    BarrierResult res;
    double scale = std::max(1.0, std::abs(objective(p, x)));
    double t = m / (1e-2 * scale);
    const double growth = 20.0;
    Eigen::MatrixXd B(m, n);
    Eigen::MatrixXd H(n, n);
    Eigen::VectorXd grad(n);
    while (true) {
        // Newton centering for the current t.
        for (int inner = 0;; ++inner) {
            if (res.newton_steps >= max_newton) {
                res.x = x;
                res.objective = objective(p, x);
                res.gap = m / t;
                return res;
            }
            Eigen::VectorXd g = p.A * x;
            Eigen::VectorXd inv = (-g).cwiseInverse();
            grad = t * p.lin - p.A.transpose() * inv;
            B = inv.asDiagonal() * p.A;
            H.setZero();
            H.selfadjointView<Eigen::Lower>().rankUpdate(B.transpose());
            for (int j = 0; j < p.n_sep; ++j) {
                double h, dh, d2h;
                p.sep(j, x[j], h, dh, d2h);
                grad[j] -= t * dh;
                H(j, j) += t * d2h;
            }
            // Tiny ridge keeps the factorization alive when a coordinate is unconstrained locally.
            for (int j = 0; j < n; ++j) H(j, j) += 1e-14 * (1.0 + H(j, j));
            Eigen::LLT<Eigen::MatrixXd> llt(H.selfadjointView<Eigen::Lower>());
            Eigen::VectorXd dx = llt.solve(grad);
            double decrement = grad.dot(dx);
            ++res.newton_steps;
            if (!(decrement >= 0.0) || !dx.allFinite()) break;
            if (decrement < 1e-7) break;
            double f0 = phi(p, x, t);
            double step = 1.0;
            bool moved = false;
            while (step > 1e-14) {
                Eigen::VectorXd xn = x + step * dx;
                double f1 = phi(p, xn, t);
                if (std::isfinite(f1) && f1 >= f0 + 0.25 * step * decrement) {
                    x = xn;
                    // Progress below rounding level of the barrier value: centered as well as we can.
                    moved = f1 - f0 > 1e-13 * std::abs(f0);
                    break;
                }
                step *= 0.5;
            }
            if (!moved) break;
        }
        res.gap = m / t;
        if (res.gap < gap_tol * std::max(1.0, std::abs(objective(p, x)))) break;
        t *= growth;
    }
    res.x = x;
    res.objective = objective(p, x);
    res.converged = true;
    return res;
}

}  // namespace newsmech::detail
