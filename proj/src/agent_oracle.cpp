#include "newsmech/agent_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "newsmech/errors.hpp"

namespace newsmech {

namespace {

// Expected news of realized atoms of L against reference R, split into gains and losses.
NewsParts atomwise_news(const DiscreteDistribution& L, const DiscreteDistribution& R) {
    NewsParts acc;
    for (std::size_t i = 0; i < L.size(); ++i) {
        auto p = news_utility_parts(DiscreteDistribution::point(L.support()[i]), R);
        acc.gain += L.probs()[i] * p.gain;
        acc.loss += L.probs()[i] * p.loss;
    }
    return acc;
}

struct DimTerms {
    double mean = 0.0;
    NewsParts surprise;
    NewsParts realization;
};

DimTerms dim_terms(const DiscreteDistribution& L, const DiscreteDistribution& ref) {
    return {L.mean(), atomwise_news(L, ref), atomwise_news(L, L)};
}

struct Utilities {
    double choice = 0.0;
    double participation = 0.0;
};

Utilities combine(Timeline tl, const DimTerms& g, const DimTerms& m, const GainLossSpec& s, double scale_g = 1.0) {
    double intrinsic = scale_g * g.mean + m.mean;
    double surprise = scale_g * g.surprise.value(s.mu_g, s.lambda_g) + m.surprise.value(s.mu_m, s.lambda_m);
    double realization = scale_g * g.realization.value(s.mu_g, s.lambda_g) + m.realization.value(s.mu_m, s.lambda_m);
    switch (tl) {
        case Timeline::A: return {intrinsic + surprise, intrinsic + surprise};
        case Timeline::B: return {intrinsic + surprise + realization, intrinsic + surprise + realization};
        case Timeline::C:
        case Timeline::D: return {intrinsic + realization, intrinsic + surprise + realization};
    }
    throw DomainError("unknown timeline");
}

double tie_tol(double u) { return 1e-12 * (1.0 + std::abs(u)); }

Decision decide(const std::vector<double>& choice, const std::vector<double>& participation, double outside) {
    Decision d;
    double best = choice[0];
    for (std::size_t j = 1; j < choice.size(); ++j) {
        if (choice[j] > best + tie_tol(best)) {
            best = choice[j];
            d.index = static_cast<int>(j);
        }
    }
    d.accept = participation[d.index] >= outside - tie_tol(outside);
    return d;
}

double outside_value(const MenuProblem& p) {
    const auto& s = p.spec;
    return p.F0.good.mean() + p.F0.money.mean() + atomwise_news(p.F0.good, p.F0.good).value(s.mu_g, s.lambda_g) +
           atomwise_news(p.F0.money, p.F0.money).value(s.mu_m, s.lambda_m);
}

// Stage-by-stage evaluation over joint outcome atoms. Each self values the
// stages from its own decision point on; no discounting between stages.
DecisionUtilities staged_utilities(const MenuProblem& p) {
    const auto& s = p.spec;
    DecisionUtilities out;
    out.outside = outside_value(p);
    for (const auto& L : p.menu) {
        double chooser = 0.0, participant = 0.0;
        for (std::size_t a = 0; a < L.good.size(); ++a) {
            for (std::size_t b = 0; b < L.money.size(); ++b) {
                double prob = L.good.probs()[a] * L.money.probs()[b];
                auto ug = DiscreteDistribution::point(L.good.support()[a]);
                auto um = DiscreteDistribution::point(L.money.support()[b]);
                double consumption = L.good.support()[a] + L.money.support()[b];
                double at_participation = news_utility(ug, p.F0.good, s.mu_g, s.lambda_g) +
                                          news_utility(um, p.F0.money, s.mu_m, s.lambda_m);
                double at_realization =
                    news_utility(ug, L.good, s.mu_g, s.lambda_g) + news_utility(um, L.money, s.mu_m, s.lambda_m);
                chooser += prob * (consumption + at_realization);
                participant += prob * (consumption + at_participation + at_realization);
            }
        }
        out.choice.push_back(chooser);
        out.participation.push_back(participant);
    }
    return out;
}

}  // namespace

DecisionUtilities decision_utilities(const MenuProblem& problem) {
    if (problem.menu.empty()) throw ValidationError("menu must not be empty");
    if (problem.timeline == Timeline::D) return staged_utilities(problem);
    DecisionUtilities out;
    out.outside = outside_value(problem);
    for (const auto& L : problem.menu) {
        auto u = combine(problem.timeline, dim_terms(L.good, problem.F0.good), dim_terms(L.money, problem.F0.money),
                         problem.spec);
        out.choice.push_back(u.choice);
        out.participation.push_back(u.participation);
    }
    return out;
}

Decision simulate(const MenuProblem& problem) {
    auto u = decision_utilities(problem);
    return decide(u.choice, u.participation, u.outside);
}

Prop1Report verify_prop1(const MenuProblem& problem) {
    Prop1Report rep;
    MenuProblem c = problem, d = problem;
    c.timeline = Timeline::C;
    d.timeline = Timeline::D;
    rep.C = simulate(c);
    rep.D = simulate(d);
    rep.same_behavior = rep.C == rep.D;
    const auto& s = problem.spec;
    for (const auto& L : problem.menu) {
        double r = atomwise_news(L.good, L.good).value(s.mu_g, s.lambda_g) +
                   atomwise_news(L.money, L.money).value(s.mu_m, s.lambda_m);
        rep.realization.push_back(r);
        bool flat = (L.good.degenerate() || s.Lambda_g() == 0.0) && (L.money.degenerate() || s.Lambda_m() == 0.0);
        bool ok = flat ? std::abs(r) <= 1e-14 : r < 0.0;
        if (r > 1e-14 || !ok) rep.realization_signs_ok = false;
    }
    return rep;
}

namespace {

// Uniform on [lo, hi) from the raw engine output, so draws match across standard libraries.
double draw(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

DiscreteDistribution random_lottery(std::mt19937_64& rng, double lo, double hi, int max_atoms) {
    int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_atoms));
    std::vector<double> x(k), p(k);
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        x[i] = draw(rng, lo, hi);
        p[i] = draw(rng, 0.05, 1.0);
        total += p[i];
    }
    double rest = 1.0;
    for (int i = 0; i + 1 < k; ++i) {
        p[i] /= total;
        rest -= p[i];
    }
    p[k - 1] = rest;
    return DiscreteDistribution(x, p);
}

}  // namespace

MenuProblem random_menu_problem(std::mt19937_64& rng, bool classical) {
    MenuProblem p;
    p.spec.mu_g = classical ? 0.0 : draw(rng, 0.0, 2.0);
    p.spec.mu_m = classical ? 0.0 : draw(rng, 0.0, 2.0);
    p.spec.lambda_g = draw(rng, 1.0, 3.0);
    p.spec.lambda_m = draw(rng, 1.0, 3.0);
    p.F0 = {random_lottery(rng, 0.0, 1.0, 2), random_lottery(rng, -0.5, 0.5, 2)};
    int n = 1 + static_cast<int>(rng() % 5);
    for (int j = 0; j < n; ++j) p.menu.push_back({random_lottery(rng, 0.0, 2.0, 4), random_lottery(rng, -2.0, 1.0, 4)});
    return p;
}

AuditReport best_response_audit(const DirectMechanism& mech, Timeline tl, const GainLossSpec& spec, int agent) {
    const auto& types = mech.types().support();
    const int N = static_cast<int>(types.size());
    const double v0 = mech.v_outside();
    // Per report terms with own type factored out: news is homogeneous in the type scale.
    std::vector<DimTerms> good(N), money(N);
    const auto ref_g = DiscreteDistribution::point(v0);
    const auto ref_m = DiscreteDistribution::point(0.0);
    for (int r = 0; r < N; ++r) {
        auto lot = mech.induced(agent, r);
        good[r] = dim_terms(lot.value, ref_g);
        money[r] = dim_terms(lot.transfer.affine(-1.0, 0.0), ref_m);
    }
    AuditReport rep;
    for (int k = 0; k < N; ++k) {
        double theta = types[k];
        if (theta < 0.0) throw ValidationError("audit expects nonnegative types");
        std::vector<Utilities> u(N);
        for (int r = 0; r < N; ++r) u[r] = combine(tl, good[r], money[r], spec, theta);
        for (int r = 0; r < N; ++r) {
            double gain = u[r].choice - u[k].choice;
            if (gain > rep.max_gain) {
                rep.max_gain = gain;
                rep.witness_type = theta;
                rep.witness_report = r;
            }
        }
        double shortfall = v0 * theta - u[k].participation;
        rep.max_ir_shortfall = std::max(rep.max_ir_shortfall, shortfall);
    }
    return rep;
}

AuditReport audit_screening_menu(const ScreeningMenu& menu, const ScreeningEnv& env) {
    const int N = static_cast<int>(menu.lambda_grid.size());
    const int K = menu.served;
    const auto zero = DiscreteDistribution::point(0.0);
    std::vector<DimTerms> good(K), money(K);
    for (int j = 0; j < K; ++j) {
        good[j] = dim_terms(env.F.affine(env.v(menu.q[j]), 0.0), zero);
        money[j] = dim_terms(DiscreteDistribution::point(-menu.t[j]), zero);
    }
    Timeline tl = menu.timeline;
    AuditReport rep;
    for (int k = 0; k < N; ++k) {
        double lam = menu.lambda_grid[k];
        GainLossSpec s{1.0, 1.0, lam, lam};
        std::vector<double> choice(K), part(K);
        for (int j = 0; j < K; ++j) {
            auto u = combine(tl, good[j], money[j], s);
            choice[j] = u.choice;
            part[j] = u.participation;
        }
        if (K == 0) continue;
        if (k < K) {
            for (int j = 0; j < K; ++j) {
                double gain = choice[j] - choice[k];
                if (gain > rep.max_gain) {
                    rep.max_gain = gain;
                    rep.witness_type = lam;
                    rep.witness_report = j;
                }
            }
            rep.max_ir_shortfall = std::max(rep.max_ir_shortfall, -part[k]);
        } else {
            // An excluded type must not want in: its chosen bundle leaves it below the outside option.
            auto d = decide(choice, part, 0.0);
            rep.max_ir_shortfall = std::max(rep.max_ir_shortfall, part[d.index]);
        }
    }
    return rep;
}

}  // namespace newsmech
