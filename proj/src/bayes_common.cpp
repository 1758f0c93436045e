#include "newsmech/bayes_common.hpp"

#include <algorithm>
#include <cmath>

#include "newsmech/errors.hpp"
#include "newsmech/grid.hpp"

namespace newsmech {

ProfileMechanism::ProfileMechanism(int n, DiscreteDistribution types, double v_outside, OutsideCase oc,
                                   ProfileFn value, ProfileFn transfer)
    : DirectMechanism(n, std::move(types), v_outside, oc), value_(std::move(value)), transfer_(std::move(transfer)) {
    if (n < 1) throw ValidationError("mechanism needs at least one agent");
}

InducedLottery ProfileMechanism::induced(int agent, int report) const {
    const int N = static_cast<int>(types().size());
    const int k = n() - 1;
    std::vector<int> others(k, 0);
    std::vector<double> vs, ts, ps;
    while (true) {
        double p = 1.0;
        for (int o : others) p *= types().probs()[o];
        vs.push_back(value_(agent, report, others));
        ts.push_back(transfer_(agent, report, others));
        ps.push_back(p);
        int d = 0;
        while (d < k && ++others[d] == N) others[d++] = 0;
        if (d == k) break;
    }
    double total = 0.0;
    for (double p : ps) total += p;
    for (double& p : ps) p /= total;
    return {DiscreteDistribution(vs, ps), DiscreteDistribution(ts, ps)};
}

SymmetricMechanism::SymmetricMechanism(int n, DiscreteDistribution types, std::vector<double> win_prob,
                                       std::vector<DiscreteDistribution> transfers)
    : DirectMechanism(n, std::move(types), 0.0, OutsideCase::inf), q_(std::move(win_prob)), t_(std::move(transfers)) {
    if (q_.size() != this->types().size() || t_.size() != this->types().size())
        throw ValidationError("per-report tables must match the type grid");
}

InducedLottery SymmetricMechanism::induced(int, int report) const {
    double q = std::clamp(q_[report], 0.0, 1.0);
    return {DiscreteDistribution({0.0, 1.0}, {1.0 - q, q}), t_[report]};
}

std::vector<double> highest_type_wins(const DiscreteDistribution& types, int n) {
    const auto& p = types.probs();
    std::vector<double> out(p.size());
    double below = 0.0;
    for (std::size_t r = 0; r < p.size(); ++r) {
        // sum over the number of tied opponents
        double s = 0.0, binom = 1.0;
        for (int k = 0; k <= n - 1; ++k) {
            s += binom * std::pow(p[r], k) * std::pow(below, n - 1 - k) / (k + 1);
            binom = binom * (n - 1 - k) / (k + 1);
        }
        out[r] = s;
        below += p[r];
    }
    return out;
}

InterimQuantities interim_quantities(const DirectMechanism& mech, int agent, int report) {
    auto lot = mech.induced(agent, report);
    return {lot.value.mean(), lot.transfer.mean(), positive_part_mean(lot.transfer)};
}

Frictions realization_frictions(const DirectMechanism& mech, int agent, int report) {
    auto lot = mech.induced(agent, report);
    return {expected_realization_penalty(lot.value, 1.0), expected_realization_penalty(lot.transfer, 1.0)};
}

double perceived_valuation(Timeline tl, OutsideCase oc, double v_outside, const ProfileRow& row,
                           const GainLossSpec& spec) {
    double surprise_w = oc == OutsideCase::inf ? spec.mu_g : spec.lambda_g * spec.mu_g;
    switch (tl) {
        case Timeline::A: return (1.0 + surprise_w) * row.V - surprise_w * v_outside;
        case Timeline::B: return (1.0 + surprise_w) * row.V - surprise_w * v_outside - spec.Lambda_g() * row.Gamma_g;
        case Timeline::C:
        case Timeline::D: return row.V - spec.Lambda_g() * row.Gamma_g;
    }
    throw DomainError("unknown timeline");
}

double perceived_transfer(Timeline tl, const ProfileRow& row, const GainLossSpec& spec) {
    switch (tl) {
        case Timeline::A: return (1.0 + spec.mu_m) * row.T + spec.Lambda_m() * row.T_plus;
        case Timeline::B: return (1.0 + spec.mu_m) * row.T + spec.Lambda_m() * (row.T_plus + row.omega);
        case Timeline::C:
        case Timeline::D: return row.T + spec.Lambda_m() * row.omega;
    }
    throw DomainError("unknown timeline");
}

PerceivedProfile build_profile(const DirectMechanism& mech, int agent, Timeline tl, const GainLossSpec& spec) {
    PerceivedProfile prof;
    prof.timeline = tl;
    prof.outside_case = mech.outside_case();
    prof.v_outside = mech.v_outside();
    const int N = static_cast<int>(mech.types().size());
    prof.rows.resize(N);
    for (int k = 0; k < N; ++k) {
        auto lot = mech.induced(agent, k);
        ProfileRow& r = prof.rows[k];
        r.theta = mech.types().support()[k];
        r.V = lot.value.mean();
        r.T = lot.transfer.mean();
        r.T_plus = positive_part_mean(lot.transfer);
        r.Gamma_g = expected_realization_penalty(lot.value, 1.0);
        r.omega = expected_realization_penalty(lot.transfer, 1.0);
        r.W = perceived_valuation(tl, prof.outside_case, prof.v_outside, r, spec);
        r.Upsilon = perceived_transfer(tl, r, spec);
    }
    return prof;
}

IcReport check_ic(const PerceivedProfile& profile, double utility_at_bottom) {
    IcReport rep;
    const std::size_t N = profile.rows.size();
    std::vector<double> theta(N), W(N);
    for (std::size_t k = 0; k < N; ++k) {
        theta[k] = profile.rows[k].theta;
        W[k] = profile.rows[k].W;
    }
    for (std::size_t k = 1; k < N; ++k) {
        if (W[k] < W[k - 1] - 1e-12 * (1.0 + std::abs(W[k - 1]))) {
            rep.ic = false;
            rep.witness = theta[k];
            break;
        }
    }
    auto I = cumulative_trapezoid(theta, W);
    rep.utility.resize(N);
    rep.upsilon.resize(N);
    for (std::size_t k = 0; k < N; ++k) {
        rep.utility[k] = utility_at_bottom + I[k];
        rep.upsilon[k] = W[k] * theta[k] - rep.utility[k];
    }
    return rep;
}

IrReport check_ir(const PerceivedProfile& profile, const GainLossSpec& spec, double tol) {
    IrReport rep;
    Timeline part = profile.timeline == Timeline::A ? Timeline::A : Timeline::B;
    for (const auto& r : profile.rows) {
        double W = perceived_valuation(part, profile.outside_case, profile.v_outside, r, spec);
        double U = perceived_transfer(part, r, spec);
        double shortfall = profile.v_outside * r.theta - (W * r.theta - U);
        rep.worst_shortfall = std::max(rep.worst_shortfall, shortfall);
        if (shortfall > tol && rep.ir) {
            rep.ir = false;
            rep.first_violation = r.theta;
        }
    }
    return rep;
}

}  // namespace newsmech
