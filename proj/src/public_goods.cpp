#include "newsmech/public_goods.hpp"

#include <algorithm>
#include <cmath>

#include "newsmech/errors.hpp"

namespace newsmech {

namespace {
double tie_tol(double scale) { return 1e-12 * (1.0 + std::abs(scale)); }
}  // namespace

PublicGoodEnv::PublicGoodEnv(int n_, DiscreteDistribution F_, double mu_g_, double Lambda_g_, double cost_)
    : n(n_), F(std::move(F_)), mu_g(mu_g_), Lambda_g(Lambda_g_), cost(cost_) {
    if (n < 1) throw ValidationError("public good needs at least one agent");
    if (F.min() < 0.0) throw ValidationError("types must be nonnegative");
    if (!(mu_g >= 0.0) || !(Lambda_g >= 0.0)) throw ValidationError("news-utility parameters must be nonnegative");
    if (!(cost > 0.0)) throw ValidationError("per-capita cost must be positive");
}

bool PublicGoodEnv::interesting() const {
    return (1.0 + mu_g) * F.min() < cost && cost < (1.0 + mu_g) * F.max();
}

int efficiency_rule(const std::vector<double>& theta, const PublicGoodEnv& env) {
    if (static_cast<int>(theta.size()) != env.n) throw DomainError("profile length must equal the number of agents");
    double s = 0.0;
    for (double t : theta) s += t;
    double lhs = (1.0 + env.mu_g) * s;
    double rhs = env.n * env.cost;
    return lhs >= rhs - tie_tol(rhs) ? 1 : 0;
}

double interim_probability(double theta, const PublicGoodEnv& env, const DiscreteDistribution& others) {
    // provide iff sum of others >= N c~ - theta (ties provide)
    double x = env.n * env.c_tilde() - theta;
    double below = 0.0;
    for (std::size_t i = 0; i < others.size(); ++i) {
        if (others.support()[i] < x - tie_tol(x)) below += others.probs()[i];
    }
    return std::clamp(1.0 - below, 0.0, 1.0);
}

double interim_probability(double theta, const PublicGoodEnv& env) {
    if (env.n == 1) return interim_probability(theta, env, DiscreteDistribution::point(0.0));
    return interim_probability(theta, env, n_fold_convolution(env.F, env.n - 1));
}

double perceived_value_of_provision(Timeline tl, double Q, const PublicGoodEnv& env) {
    switch (tl) {
        case Timeline::A: return (1.0 + env.mu_g) * Q;
        case Timeline::B: return (1.0 + env.mu_g) * Q - env.Lambda_g * Q * (1.0 - Q);
        case Timeline::C:
        case Timeline::D: return Q - env.Lambda_g * Q * (1.0 - Q);
    }
    throw DomainError("unknown timeline");
}

IcVerdict ic_condition(Timeline tl, const PublicGoodEnv& env) {
    DiscreteDistribution others =
        env.n == 1 ? DiscreteDistribution::point(0.0) : n_fold_convolution(env.F, env.n - 1);
    const auto& th = env.F.support();
    std::vector<double> Q(th.size());
    for (std::size_t k = 0; k < th.size(); ++k) Q[k] = interim_probability(th[k], env, others);
    IcVerdict v;
    // Direct: perceived valuation of provision must not fall as the type rises.
    for (std::size_t k = 1; k < th.size(); ++k) {
        double w0 = perceived_value_of_provision(tl, Q[k - 1], env);
        double w1 = perceived_value_of_provision(tl, Q[k], env);
        if (w1 < w0 - 1e-12) {
            v.ic = false;
            v.witness = th[k];
            break;
        }
    }
    // Bound: the slope 1 + mu - Lambda + 2 Lambda Q, evaluated at the midpoint of each step.
    double surprise = (tl == Timeline::A || tl == Timeline::B) ? env.mu_g : 0.0;
    double lam = tl == Timeline::A ? 0.0 : env.Lambda_g;
    for (std::size_t k = 1; k < th.size(); ++k) {
        if (!(Q[k] > Q[k - 1])) continue;
        double slope = 1.0 + surprise - lam + lam * (Q[k] + Q[k - 1]);
        if (slope * (Q[k] - Q[k - 1]) < -1e-12) {
            v.bound_ic = false;
            break;
        }
    }
    return v;
}

PopulationScan min_population_for_ic(const DiscreteDistribution& F, double mu_g, double Lambda_g,
                                     const std::function<double(int)>& ctilde, int n_from, int n_to) {
    PopulationScan scan;
    bool gained = false;
    for (int n = n_from; n <= n_to; ++n) {
        PublicGoodEnv env(n, F, mu_g, Lambda_g, ctilde(n) * (1.0 + mu_g));
        bool ok = ic_condition(Timeline::A, env).ic && ic_condition(Timeline::B, env).ic &&
                  ic_condition(Timeline::C, env).ic;
        scan.ic_flags.push_back(ok ? 1 : 0);
        if (ok && !scan.first_ic) scan.first_ic = n;
        if (gained && !ok) scan.monotone = false;
        gained = gained || ok;
    }
    return scan;
}

}  // namespace newsmech
