#include "newsmech/auction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "newsmech/errors.hpp"
#include "newsmech/parallel.hpp"

namespace newsmech {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

AuctionEnv::AuctionEnv(int n_, DensityGrid F_, GainLossSpec spec_) : n(n_), F(std::move(F_)), spec(spec_) {
    if (n < 1) throw ValidationError("auction needs at least one bidder");
    spec.validate();
    if (spec.Lambda_g() > 1.0 + 1e-12)
        throw UnsupportedInstance("Lambda_g > 1 violates the auction assumption that news utility in the good does not dominate");
    if (F.lo() < 0.0) throw ValidationError("types must be nonnegative");
    myerson_virtual(F);
}

MyersonVirtual myerson_virtual(const DensityGrid& F) {
    MyersonVirtual mv;
    const int N = F.size();
    mv.gamma.resize(N);
    for (int k = 0; k < N; ++k) {
        double f = F.pdf()[k];
        if (!(f > 1e-12)) throw UnsupportedInstance("type density vanishes on the grid; auction regularity fails");
        mv.gamma[k] = F.x()[k] - (1.0 - F.cdf()[k]) / f;
    }
    for (int k = 1; k < N; ++k)
        if (!(mv.gamma[k] > mv.gamma[k - 1]))
            throw UnsupportedInstance("virtual value is not strictly increasing near theta=" +
                                      std::to_string(F.x()[k]) + "; auction regularity fails");
    mv.theta_star = N - 1;
    for (int k = 0; k < N; ++k)
        if (mv.gamma[k] >= -1e-12) {
            mv.theta_star = k;
            break;
        }
    return mv;
}

AuctionSolution solve_auction(Timeline tl, const AuctionEnv& env) {
    if (tl != Timeline::A && tl != Timeline::B) throw DomainError("Myersonian solver handles timelines A and B");
    auto mv = myerson_virtual(env.F);
    const int N = env.F.size();
    const auto& th = env.F.x();
    const auto& s = env.spec;
    AuctionSolution sol;
    sol.timeline = tl;
    sol.theta = th;
    sol.threshold = mv.theta_star;
    sol.Q.assign(N, 0.0);
    sol.W.assign(N, 0.0);
    for (int k = mv.theta_star; k < N; ++k) sol.Q[k] = std::pow(env.F.cdf()[k], env.n - 1);
    for (int k = 0; k < N; ++k) {
        double Q = sol.Q[k];
        sol.W[k] = (1.0 + s.mu_g) * Q - (tl == Timeline::B ? s.Lambda_g() * Q * (1.0 - Q) : 0.0);
    }
    auto I = cumulative_trapezoid(th, sol.W);
    sol.upsilon.resize(N);
    sol.T.resize(N);
    sol.omega.assign(N, 0.0);
    for (int k = 0; k < N; ++k) {
        sol.upsilon[k] = sol.W[k] * th[k] - I[k];
        sol.T[k] = sol.upsilon[k] / (1.0 + env.x());
        sol.transfers.push_back(DiscreteDistribution::point(sol.T[k]));
    }
    sol.revenue = env.n * env.F.integrate(sol.T);
    if (tl == Timeline::A) {
        std::vector<double> qg(N, 0.0);
        for (int k = mv.theta_star; k < N; ++k) qg[k] = sol.Q[k] * mv.gamma[k];
        sol.virtual_revenue = env.n * (1.0 + s.mu_g) / (1.0 + env.x()) * env.F.integrate(qg);
    }
    return sol;
}

PrimitivesC auction_primitives_C(const AuctionEnv& env, int threshold) {
    const int N = env.F.size();
    const auto& th = env.F.x();
    PrimitivesC p;
    p.Q.assign(N, 0.0);
    for (int k = threshold; k < N; ++k) p.Q[k] = std::pow(env.F.cdf()[k], env.n - 1);
    p.W.resize(N);
    for (int k = 0; k < N; ++k) p.W[k] = p.Q[k] * (1.0 - env.spec.Lambda_g() * (1.0 - p.Q[k]));
    auto I = cumulative_trapezoid(th, p.W);
    p.h.resize(N);
    p.g.resize(N);
    p.s_m.resize(N);
    for (int k = 0; k < N; ++k) {
        p.h[k] = p.W[k] * th[k] - I[k];
        p.g[k] = p.W[k] * th[k] + env.spec.mu_g * p.Q[k] * th[k];
        p.s_m[k] = p.h[k] - p.g[k] / (1.0 + env.x());
    }
    for (int k = 1; k < N; ++k)
        if (p.h[k] < p.h[k - 1] - 1e-12 || p.g[k] < p.g[k - 1] - 1e-12)
            throw Error(ErrorKind::domain, "internal", "h or g decreases; perceived valuation is not monotone");
    return p;
}

namespace {

struct ThresholdResult {
    bool feasible = false;
    double c = 0.0;
    double revenue = -kInf;
};

// Coefficient kappa with Lambda_m * omega = kappa * max(s_m - c, 0); 0 if friction is unavailable.
double friction_slope(const AuctionEnv& env) {
    double x = env.x();
    if (x <= 0.0 || env.spec.Lambda_m() <= 0.0) return 0.0;
    return (1.0 + x) / x;
}

ThresholdResult solve_threshold(const AuctionEnv& env, const AuctionOptions& opt, int K0, const PrimitivesC& p) {
    const int N = env.F.size();
    const auto& w = env.F.weights();
    const auto& th = env.F.x();
    const double kappa = friction_slope(env);
    const double Lr = opt.spread_ratio * env.spec.Lambda_m();
    double clo = -kInf, chi = kInf;
    double min_sm = kInf, max_sm = -kInf;
    for (int k = K0; k < N; ++k) {
        min_sm = std::min(min_sm, p.s_m[k]);
        max_sm = std::max(max_sm, p.s_m[k]);
        if (kappa == 0.0) {
            clo = std::max(clo, p.s_m[k]);
            if (opt.realizable) chi = std::min(chi, p.h[k]);
        } else if (opt.realizable) {
            double a = kappa * (1.0 + Lr);
            double cmin = (a * p.s_m[k] - Lr * p.h[k]) / (a - Lr);
            clo = std::max(clo, std::min(cmin, p.s_m[k]));
            chi = std::min(chi, p.h[k]);
        }
    }
    if (K0 > 0) {
        if (opt.domain == SubsidyDomain::full_support) {
            clo = std::max(clo, 0.0);
        } else {
            double half = 0.5 * (th[K0] - th[K0 - 1]) * p.W[K0];
            chi = std::min(chi, half);
            clo = std::max(clo, -half);
        }
    }
    ThresholdResult r;
    if (clo > chi + 1e-14) return r;
    chi = std::max(chi, clo);

    double served_h = 0.0;
    for (int k = K0; k < N; ++k) served_h += w[k] * p.h[k];
    auto objective = [&](double c) {
        double s = 0.0;
        for (int k = 0; k < N; ++k) {
            if (k >= K0)
                s += w[k] * (c + kappa * std::max(p.s_m[k] - c, 0.0));
            else if (opt.domain == SubsidyDomain::full_support)
                s += w[k] * c;
        }
        return s;
    };
    double a = std::isfinite(clo) ? clo : min_sm - 1.0;
    double b = std::isfinite(chi) ? chi : max_sm + 1.0;
    b = std::min(b, std::max(a, max_sm + 1.0));
    a = std::max(a, std::min(b, min_sm - 1.0));
    // Golden section; the objective is convex and piecewise linear in c.
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = a, hi = b;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = objective(x1), f2 = objective(x2);
    while (hi - lo > 1e-10) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = objective(x2);
        }
    }
    double best_c = 0.5 * (lo + hi);
    double best_f = objective(best_c);
    // Snap to the nearest kink or endpoint when that is at least as good.
    std::vector<double> cands = {a, b};
    double below = -kInf, above = kInf;
    for (int k = K0; k < N; ++k) {
        double s = p.s_m[k];
        if (s < a || s > b) continue;
        if (s <= best_c) below = std::max(below, s);
        if (s >= best_c) above = std::min(above, s);
    }
    if (std::isfinite(below)) cands.push_back(below);
    if (std::isfinite(above)) cands.push_back(above);
    for (double c : cands) {
        double f = objective(c);
        if (f < best_f - 1e-15 || (f <= best_f + 1e-15 && c < best_c && std::abs(c - best_c) < 1e-8)) {
            best_f = f;
            best_c = c;
        }
    }
    r.feasible = true;
    r.c = best_c;
    r.revenue = env.n * (served_h - best_f);
    return r;
}

}  // namespace

AuctionSolution solve_auction_C(const AuctionEnv& env, const AuctionOptions& opt) {
    const int N = env.F.size();
    std::vector<ThresholdResult> res(N);
    parallel_for(
        N,
        [&](std::size_t i) {
            int K0 = static_cast<int>(i);
            res[i] = solve_threshold(env, opt, K0, auction_primitives_C(env, K0));
        },
        opt.threads);
    int best = N;  // nobody served
    double best_rev = 0.0;
    for (int K0 = 0; K0 < N; ++K0) {
        if (!res[K0].feasible) continue;
        if (res[K0].revenue > best_rev + 1e-12 * (1.0 + std::abs(best_rev)) ||
            (best == N && res[K0].revenue >= best_rev - 1e-12 * (1.0 + std::abs(best_rev)))) {
            best = K0;
            best_rev = res[K0].revenue;
        }
    }
    AuctionSolution sol;
    sol.timeline = Timeline::C;
    sol.theta = env.F.x();
    sol.threshold = best;
    auto p = auction_primitives_C(env, best);
    sol.Q = p.Q;
    sol.W = p.W;
    sol.h = p.h;
    sol.g = p.g;
    sol.s_m = p.s_m;
    sol.c = best < N ? res[best].c : 0.0;
    sol.revenue = best < N ? res[best].revenue : 0.0;
    const double kappa = friction_slope(env);
    const double Lm = env.spec.Lambda_m();
    sol.T.resize(N);
    sol.omega.assign(N, 0.0);
    sol.friction.assign(N, 0.0);
    sol.upsilon.resize(N);
    for (int k = 0; k < N; ++k) {
        if (k >= best) {
            double y = kappa * std::max(p.s_m[k] - sol.c, 0.0);
            sol.friction[k] = y;
            sol.omega[k] = Lm > 0.0 ? y / Lm : 0.0;
            sol.T[k] = p.h[k] - sol.c - y;
        } else {
            sol.T[k] = opt.domain == SubsidyDomain::full_support ? -sol.c : 0.0;
        }
        sol.upsilon[k] = sol.T[k] + sol.friction[k];
        double om = sol.omega[k];
        if (om > 0.0) {
            sol.all_pay = false;
            if (opt.realizable) {
                // nonnegative two-point lottery {0, b} with mean T and penalty om
                double q = 1.0 - om / sol.T[k];
                sol.transfers.push_back(DiscreteDistribution({0.0, sol.T[k] / q}, {1.0 - q, q}));
            } else {
                sol.transfers.push_back(binary_for_target(sol.friction[k], sol.T[k], Lm));
            }
        } else {
            sol.transfers.push_back(DiscreteDistribution::point(sol.T[k]));
        }
    }
    return sol;
}

std::unique_ptr<SymmetricMechanism> as_mechanism(const AuctionSolution& sol, const AuctionEnv& env) {
    return std::make_unique<SymmetricMechanism>(env.n, env.F.to_distribution(), sol.Q, sol.transfers);
}

IdentityCheck check_solution_C(const AuctionSolution& sol, const AuctionEnv& env) {
    IdentityCheck chk;
    const double x = env.x();
    for (std::size_t k = sol.threshold; k < sol.theta.size(); ++k) {
        chk.ic_identity = std::max(chk.ic_identity, std::abs(sol.c + sol.friction[k] + sol.T[k] - sol.h[k]));
        double bound = sol.s_m[k] - (x / (1.0 + x)) * sol.friction[k];
        chk.ir_shortfall = std::max(chk.ir_shortfall, bound - sol.c);
    }
    return chk;
}

SweepReport revenue_compare(const AuctionEnv& env, const std::vector<double>& xs, double mu_m,
                            const AuctionOptions& opt) {
    SweepReport rep;
    for (double x : xs) {
        GainLossSpec s = env.spec;
        s.mu_m = mu_m;
        s.lambda_m = mu_m > 0.0 ? x / mu_m : 1.0;
        AuctionEnv e(env.n, env.F, s);
        SweepRow row;
        row.x = x;
        row.rev_A = solve_auction(Timeline::A, e).revenue;
        auto c = solve_auction_C(e, opt);
        row.rev_C = c.revenue;
        row.c_all_pay = c.all_pay;
        rep.rows.push_back(row);
    }
    int prev_sign = 0;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        double d = rep.rows[i].rev_C - rep.rows[i].rev_A;
        int sg = d > 1e-12 ? 1 : (d < -1e-12 ? -1 : 0);
        if (sg == 0) continue;
        if (prev_sign != 0 && sg != prev_sign) {
            ++rep.sign_changes;
            if (rep.sign_changes == 1) {
                std::size_t j = i - 1;
                double d0 = rep.rows[j].rev_C - rep.rows[j].rev_A;
                rep.crossing = rep.rows[j].x + (rep.rows[i].x - rep.rows[j].x) * d0 / (d0 - d);
            }
        }
        prev_sign = sg;
    }
    return rep;
}

}  // namespace newsmech
