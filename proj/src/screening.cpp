#include "newsmech/screening.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "barrier.hpp"
#include "newsmech/errors.hpp"
#include "newsmech/parallel.hpp"

namespace newsmech {

const char* to_string(Timeline t) {
    switch (t) {
        case Timeline::A: return "A";
        case Timeline::B: return "B";
        case Timeline::C: return "C";
        case Timeline::D: return "D";
    }
    return "?";
}

Timeline timeline_from_string(const std::string& s) {
    if (s == "A") return Timeline::A;
    if (s == "B") return Timeline::B;
    if (s == "C") return Timeline::C;
    if (s == "D") return Timeline::D;
    throw DomainError("unknown timeline '" + s + "'");
}

ScreeningEnv::ScreeningEnv(DiscreteDistribution F_, DensityGrid G_, double alpha_, double c_)
    : F(std::move(F_)), G(std::move(G_)), alpha(alpha_), c(c_) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0,1) so that v(q)=q^alpha is concave");
    if (!(c > 0.0)) throw ValidationError("marginal cost must be positive");
    if (F.min() < 0.0) throw ValidationError("intrinsic values must be nonnegative");
    m = F.mean();
    M = positive_gap_mean(F);
    if (!(m > 0.0)) throw ValidationError("m = E[theta] must be positive (screening assumption: positive mean value)");
    if (!(M < m)) throw ValidationError("M must be smaller than m");
    if (std::abs(G.lo() - 1.0) > 1e-12) throw ValidationError("loss-aversion support must start at 1");
    if (!(G.hi() > 1.0 && G.hi() <= 2.0 + 1e-12))
        throw ValidationError("lambda_bar must lie in (1, 2] (screening assumption: bounded loss aversion)");
    for (double g : G.pdf())
        if (!(g > 1e-9)) throw ValidationError("loss-aversion density must stay positive on the grid");
}

double ScreeningEnv::v(double q) const { return q <= 0.0 ? 0.0 : std::pow(q, alpha); }
double ScreeningEnv::v_inverse(double w) const { return w <= 0.0 ? 0.0 : std::pow(w, 1.0 / alpha); }

double virtual_type(Timeline tl, double lambda, const ScreeningEnv& env) {
    if (lambda < 1.0 - 1e-12 || lambda > env.lambda_bar() + 1e-12)
        throw DomainError("loss-aversion type outside [1, lambda_bar]");
    switch (tl) {
        case Timeline::A: return 2.0 * env.m / (1.0 + lambda);
        case Timeline::B: return (2.0 * env.m + (1.0 - lambda) * env.M) / (1.0 + lambda);
        case Timeline::C:
        case Timeline::D: return env.m + (1.0 - lambda) * env.M;
    }
    throw DomainError("unknown timeline");
}

double virtual_valuation(Timeline tl, int k, const ScreeningEnv& env) {
    double s = env.G.x()[k];
    double Gs = env.G.cdf()[k];
    double gs = env.G.pdf()[k];
    double hazard = Gs / ((1.0 + s) * (1.0 + s) * gs);
    switch (tl) {
        case Timeline::A: return virtual_type(tl, s, env) - 2.0 * env.m * hazard;
        case Timeline::B: return virtual_type(tl, s, env) - 2.0 * (env.m + env.M) * hazard;
        default: throw DomainError("virtual valuation is defined for timelines A and B");
    }
}

std::vector<double> virtual_valuation_grid(Timeline tl, const ScreeningEnv& env) {
    std::vector<double> out(env.G.size());
    for (int k = 0; k < env.G.size(); ++k) out[k] = virtual_valuation(tl, k, env);
    return out;
}

RegularityReport check_regularity(Timeline tl, const ScreeningEnv& env) {
    if (tl != Timeline::A && tl != Timeline::B) throw DomainError("regularity is checked for timelines A and B");
    RegularityReport r;
    for (int k = 0; k < env.G.size(); ++k) {
        double lam = env.G.x()[k];
        double g = env.G.pdf()[k];
        double rhs = env.G.cdf()[k] / g * (2.0 / (1.0 + lam) + env.G.dpdf()[k] / g);
        if (rhs > 2.0 + 1e-12) {
            r.regular = false;
            r.first_violation = lam;
            break;
        }
    }
    return r;
}

namespace {

void require_nonincreasing(const std::vector<double>& q) {
    for (std::size_t k = 1; k < q.size(); ++k)
        if (q[k] > q[k - 1] * (1.0 + 1e-12) + 1e-300)
            throw ValidationError("allocation must be nonincreasing in the loss-aversion type (IC violation)");
}

}  // namespace

std::vector<double> mirrlees_payments(Timeline tl, const std::vector<double>& q, const ScreeningEnv& env,
                                      double constant) {
    require_nonincreasing(q);
    const int K = static_cast<int>(q.size());
    std::vector<double> t(K), U(K), gam(K), w(K);
    if (K == 0) return t;
    for (int k = 0; k < K; ++k) {
        gam[k] = virtual_type(tl, env.G.x()[k], env);
        w[k] = env.v(q[k]);
    }
    // Envelope integral as a Stieltjes trapezoid in the virtual type: exact discrete IC.
    if (tl == Timeline::A || tl == Timeline::B) {
        U[K - 1] = constant;
        for (int k = K - 2; k >= 0; --k) U[k] = U[k + 1] + (gam[k] - gam[k + 1]) * 0.5 * (w[k] + w[k + 1]);
    } else {
        U[0] = -constant;
        for (int k = 1; k < K; ++k) U[k] = U[k - 1] - (gam[k - 1] - gam[k]) * 0.5 * (w[k - 1] + w[k]);
    }
    for (int k = 0; k < K; ++k) t[k] = gam[k] * w[k] - U[k];
    return t;
}

double profit(const ScreeningMenu& menu, const ScreeningEnv& env) {
    double s = 0.0;
    for (int k = 0; k < menu.served; ++k) s += env.G.weights()[k] * (menu.t[k] - env.c * menu.q[k]);
    return s;
}

double virtual_surplus_profit(const ScreeningMenu& menu, const ScreeningEnv& env) {
    auto psi = virtual_valuation_grid(menu.timeline, env);
    double s = 0.0;
    for (int k = 0; k < menu.served; ++k)
        s += env.G.weights()[k] * (psi[k] * env.v(menu.q[k]) - env.c * menu.q[k]);
    return s;
}

ScreeningMenu solve_pointwise(Timeline tl, const ScreeningEnv& env) {
    if (tl != Timeline::A && tl != Timeline::B) throw DomainError("pointwise solver handles timelines A and B");
    auto reg = check_regularity(tl, env);
    if (!reg.regular)
        throw UnsupportedInstance("loss-aversion distribution is not regular at lambda=" +
                                  std::to_string(*reg.first_violation) + "; ironing is not supported");
    auto psi = virtual_valuation_grid(tl, env);
    const int N = env.G.size();
    ScreeningMenu menu;
    menu.timeline = tl;
    menu.lambda_grid = env.G.x();
    menu.q.resize(N);
    for (int k = 0; k < N; ++k)
        menu.q[k] = psi[k] > 0.0 ? std::pow(env.alpha * psi[k] / env.c, 1.0 / (1.0 - env.alpha)) : 0.0;
    for (int k = 1; k < N; ++k)
        if (menu.q[k] > menu.q[k - 1] * (1.0 + 1e-12))
            throw UnsupportedInstance("virtual valuation increases near lambda=" + std::to_string(env.G.x()[k]) +
                                      "; ironing is not supported");
    menu.served = N;
    menu.threshold = env.lambda_bar();
    menu.t = mirrlees_payments(tl, menu.q, env, 0.0);
    menu.profit = profit(menu, env);
    return menu;
}

std::optional<ScreeningMenu> solve_timeline_C_fixed(const ScreeningEnv& env, int K, const TimelineCOptions& opt) {
    const int N = env.G.size();
    const auto& lam = env.G.x();
    const auto& pi = env.G.weights();
    std::vector<double> gB(N), gC(N), D(N);
    for (int k = 0; k < N; ++k) {
        gB[k] = virtual_type(Timeline::B, lam[k], env);
        gC[k] = virtual_type(Timeline::C, lam[k], env);
        D[k] = gB[k] - gC[k];
    }
    // Cumulative trapezoid I_k = sum_j cum(k, j) w_j over the served prefix.
    Eigen::MatrixXd cum = Eigen::MatrixXd::Zero(K, K);
    for (int k = 1; k < K; ++k) {
        cum.row(k) = cum.row(k - 1);
        double h = lam[k] - lam[k - 1];
        cum(k, k - 1) += 0.5 * h;
        cum(k, k) += 0.5 * h;
    }
    const bool excl = K < N;
    const int n = K + 1;
    const int rows = K + (K - 1) + 1 + (excl ? 1 : 0);
    detail::SeparableConcaveProblem p;
    p.lin = Eigen::VectorXd::Zero(n);
    double served_mass = 0.0;
    for (int j = 0; j < K; ++j) {
        served_mass += pi[j];
        double a = pi[j] * gC[j];
        for (int k = j; k < K; ++k) a += env.M * pi[k] * cum(k, j);
        p.lin[j] = a;
    }
    p.lin[K] = served_mass;
    p.A = Eigen::MatrixXd::Zero(rows, n);
    int r = 0;
    for (int k = 0; k < K; ++k, ++r) {
        p.A.row(r).head(K) = env.M * cum.row(k);
        p.A(r, k) -= D[k];
        p.A(r, K) = 1.0;
    }
    for (int j = 0; j + 1 < K; ++j, ++r) {
        p.A(r, j + 1) = 1.0;
        p.A(r, j) = -1.0;
    }
    p.A(r++, K - 1) = -1.0;
    if (excl) {
        p.A.row(r).head(K) = -env.M * cum.row(K - 1);
        p.A(r, K - 1) += gB[K] - gC[K - 1];
        p.A(r, K) = -1.0;
        ++r;
    }
    const double pw = 1.0 / env.alpha;
    const double cost = env.c;
    p.n_sep = K;
    p.sep = [&pi, pw, cost](int j, double x, double& h, double& dh, double& d2h) {
        double xp2 = std::pow(x, pw - 2.0);
        h = cost * pi[j] * xp2 * x * x;
        dh = cost * pi[j] * pw * xp2 * x;
        d2h = cost * pi[j] * pw * (pw - 1.0) * xp2;
    };

    // Strictly feasible start: nearly flat decreasing allocation, fee between the bounds.
    double eps = 0.1 * std::pow(env.alpha * env.m / env.c, env.alpha / (1.0 - env.alpha));
    Eigen::VectorXd x(n);
    for (int j = 0; j < K; ++j) x[j] = eps * (1.0 + 1e-3 * (K - 1 - j) / std::max(1, K));
    x[K] = 0.0;
    Eigen::VectorXd g0 = p.A * x;  // rows with the fee at zero
    double ub = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) ub = std::min(ub, -g0[k]);
    double lb = excl ? g0[rows - 1] : ub - eps * env.m;
    if (!(lb < ub)) return std::nullopt;
    x[K] = 0.5 * (lb + ub);

    auto res = detail::barrier_maximize(p, x, opt.gap_tol, opt.max_newton);
    if (!res.converged)
        throw NonConvergence("timeline-C program did not converge serving " + std::to_string(K) + " types", res.gap);

    ScreeningMenu menu;
    menu.timeline = Timeline::C;
    menu.lambda_grid = lam;
    menu.served = K;
    menu.threshold = lam[K - 1];
    menu.q.assign(N, 0.0);
    std::vector<double> w(K);
    for (int j = 0; j < K; ++j) w[j] = std::max(res.x[j], 0.0);
    for (int j = 1; j < K; ++j) w[j] = std::min(w[j], w[j - 1]);
    Eigen::VectorXd wv = Eigen::Map<Eigen::VectorXd>(w.data(), K);
    Eigen::VectorXd I = cum * wv;
    double f = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) f = std::min(f, D[k] * w[k] - env.M * I[k]);
    menu.f = f;
    std::vector<double> qs(K);
    for (int j = 0; j < K; ++j) qs[j] = env.v_inverse(w[j]);
    auto ts = mirrlees_payments(Timeline::C, qs, env, f);
    menu.t.assign(N, 0.0);
    for (int j = 0; j < K; ++j) {
        menu.q[j] = qs[j];
        menu.t[j] = ts[j];
    }
    menu.profit = profit(menu, env);
    return menu;
}

ScreeningMenu solve_timeline_C(const ScreeningEnv& env, const TimelineCOptions& opt) {
    const int N = env.G.size();
    std::vector<std::optional<ScreeningMenu>> sols(N);
    parallel_for(
        N, [&](std::size_t i) { sols[i] = solve_timeline_C_fixed(env, static_cast<int>(i) + 1, opt); }, opt.threads);
    ScreeningMenu best;
    best.timeline = Timeline::C;
    best.lambda_grid = env.G.x();
    best.q.assign(N, 0.0);
    best.t.assign(N, 0.0);
    best.served = 0;
    best.threshold = 1.0;
    best.profit = 0.0;
    // Ties go to the larger served set.
    for (int i = 0; i < N; ++i) {
        if (!sols[i]) continue;
        double pr = sols[i]->profit;
        if (pr > 0.0 && pr >= best.profit - 1e-12 * (1.0 + std::abs(best.profit))) best = *sols[i];
    }
    return best;
}

MenuAudit audit_menu(const ScreeningMenu& menu, const ScreeningEnv& env) {
    const int N = static_cast<int>(menu.lambda_grid.size());
    const int K = menu.served;
    MenuAudit a;
    std::vector<double> w(K);
    for (int j = 0; j < K; ++j) w[j] = env.v(menu.q[j]);
    Timeline report_tl = menu.timeline == Timeline::D ? Timeline::C : menu.timeline;
    Timeline part_tl = report_tl == Timeline::C ? Timeline::B : report_tl;
    for (int k = 0; k < N; ++k) {
        double lam = menu.lambda_grid[k];
        double scale = report_tl == Timeline::C ? 1.0 : 1.0 + lam;
        double gr = virtual_type(report_tl, lam, env);
        double gp = virtual_type(part_tl, lam, env);
        int best = -1;
        double best_u = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < K; ++j) {
            double u = scale * (gr * w[j] - menu.t[j]);
            if (u > best_u) {
                best_u = u;
                best = j;
            }
        }
        if (best < 0) continue;
        if (k < K) {
            double own = scale * (gr * w[k] - menu.t[k]);
            a.ic_gain = std::max(a.ic_gain, best_u - own);
            a.ir_violation = std::max(a.ir_violation, -(gp * w[k] - menu.t[k]));
        } else {
            a.exclusion_violation = std::max(a.exclusion_violation, gp * w[best] - menu.t[best]);
        }
    }
    return a;
}

TimelineComparison compare_timelines(const ScreeningEnv& env, const TimelineCOptions& opt, double grid_error) {
    TimelineComparison cmp;
    cmp.A = solve_pointwise(Timeline::A, env);
    cmp.B = solve_pointwise(Timeline::B, env);
    cmp.C = solve_timeline_C(env, opt);
    cmp.grid_error = grid_error;
    double tol = 1e-6 * std::max(1.0, std::abs(cmp.A.profit)) + grid_error;
    cmp.ordered = cmp.A.profit >= cmp.B.profit - tol && cmp.B.profit >= cmp.C.profit - tol;
    return cmp;
}

}  // namespace newsmech
