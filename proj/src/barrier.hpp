#pragma once

#include <Eigen/Dense>
#include <functional>

namespace newsmech::detail {

// maximize  c'x - sum_j h_j(x_j)  subject to  A x < 0  (strictly, via log barrier),
// where h_j is convex and separable. Only the first n_sep coordinates carry h.
struct SeparableConcaveProblem {
    Eigen::VectorXd lin;
    Eigen::MatrixXd A;
    // value, first and second derivative of h_j at x_j
    std::function<void(int j, double x, double& h, double& dh, double& d2h)> sep;
    int n_sep = 0;
};

struct BarrierResult {
    Eigen::VectorXd x;
    double objective = 0.0;
    double gap = 0.0;
    int newton_steps = 0;
    bool converged = false;
};

BarrierResult barrier_maximize(const SeparableConcaveProblem& p, Eigen::VectorXd x0, double gap_tol, int max_newton);

}  // namespace newsmech::detail
