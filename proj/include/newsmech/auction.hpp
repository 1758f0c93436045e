#pragma once

#include <memory>
#include <vector>

#include "newsmech/bayes_common.hpp"
#include "newsmech/grid.hpp"
#include "newsmech/newsutil.hpp"

namespace newsmech {

struct AuctionEnv {
    int n = 2;
    DensityGrid F;
    GainLossSpec spec;

    AuctionEnv(int n_, DensityGrid F_, GainLossSpec spec_);
    double x() const { return spec.lambda_m * spec.mu_m; }
};

struct MyersonVirtual {
    std::vector<double> gamma;
    int theta_star = 0;  // grid index
};

MyersonVirtual myerson_virtual(const DensityGrid& F);

// How the lowest-type utility c is charged in the timeline-C objective.
enum class SubsidyDomain { full_support, served_only };

struct AuctionOptions {
    SubsidyDomain domain = SubsidyDomain::full_support;
    // Payment lotteries must have nonnegative support, so that T^+ = T and the
    // closed-form participation constraint is exact. Spread is capped at
    // spread_ratio * T.
    bool realizable = true;
    double spread_ratio = 0.99;
    int threads = 1;
};

struct AuctionSolution {
    Timeline timeline = Timeline::A;
    std::vector<double> theta;
    std::vector<double> Q, W, upsilon, T, omega;  // omega is the raw penalty
    std::vector<DiscreteDistribution> transfers;  // per-report payment lottery
    int threshold = 0;                            // first served grid index
    double revenue = 0.0;
    double virtual_revenue = 0.0;  // A only: scaled virtual-surplus integral
    // timeline C
    double c = 0.0;
    std::vector<double> h, g, s_m, friction;  // friction = Lambda_m * omega
    bool all_pay = true;
};

AuctionSolution solve_auction(Timeline tl, const AuctionEnv& env);

struct PrimitivesC {
    std::vector<double> Q, W, h, g, s_m;
};
PrimitivesC auction_primitives_C(const AuctionEnv& env, int threshold);

AuctionSolution solve_auction_C(const AuctionEnv& env, const AuctionOptions& opt = {});

// Payment-lottery mechanism for the oracle.
std::unique_ptr<SymmetricMechanism> as_mechanism(const AuctionSolution& sol, const AuctionEnv& env);

struct IdentityCheck {
    double ic_identity = 0.0;  // max |c + Lambda_m omega + T - h| on served types
    double ir_shortfall = 0.0;  // max violation of the closed-form participation bound
};
IdentityCheck check_solution_C(const AuctionSolution& sol, const AuctionEnv& env);

struct SweepRow {
    double x = 0.0;
    double rev_A = 0.0, rev_C = 0.0;
    bool c_all_pay = true;
};
struct SweepReport {
    std::vector<SweepRow> rows;
    int sign_changes = 0;
    double crossing = 0.0;  // interpolated root of rev_C - rev_A, if any
};

// Sweeps x = lambda_m * mu_m with mu_m held fixed.
SweepReport revenue_compare(const AuctionEnv& env, const std::vector<double>& xs, double mu_m,
                            const AuctionOptions& opt = {});

}  // namespace newsmech
