#include <doctest.h>

#include <random>

#include "newsmech/agent_oracle.hpp"
#include "newsmech/auction.hpp"
#include "newsmech/errors.hpp"
#include "oracles.hpp"

using namespace newsmech;

namespace {
GainLossSpec spec(double x, double mu_m = 0.5) { return {1.0, mu_m, 1.2, x / mu_m}; }
}  // namespace

TEST_CASE("Myerson threshold and revenue for uniform types") {
    AuctionEnv env(2, DensityGrid::uniform(0.0, 1.0, 201), spec(1.0));
    auto mv = myerson_virtual(env.F);
    CHECK(env.F.x()[mv.theta_star] == doctest::Approx(0.5));
    AuctionEnv env12(2, DensityGrid::uniform(1.0, 2.0, 201), spec(1.4));
    auto a = solve_auction(Timeline::A, env12);
    // n (1+mu_g)/(1+x) * integral of (theta-1)(2 theta - 2) over [1,2]
    double oracle_rev = 2.0 * 2.0 / 2.4 * oracle::simpson([](double t) { return (t - 1) * (2 * t - 2); }, 1, 2);
    CHECK(a.revenue == doctest::Approx(oracle_rev).epsilon(1e-4));
    CHECK(a.virtual_revenue == doctest::Approx(a.revenue).epsilon(1e-4));
    CHECK(a.threshold == 0);
}

TEST_CASE("environment checks") {
    CHECK_THROWS_AS(AuctionEnv(2, DensityGrid::uniform(1.0, 2.0, 51), GainLossSpec{1.0, 0.5, 2.5, 2.0}),
                    UnsupportedInstance);
    CHECK_THROWS_AS(AuctionEnv(0, DensityGrid::uniform(1.0, 2.0, 51), spec(1.0)), ValidationError);
    // a density with a trough bends the virtual value down
    DensityGrid dip(0.0, 1.0, 51, [](double x) { return 0.01 + (x - 0.5) * (x - 0.5); },
                    [](double x) { return 2.0 * (x - 0.5); });
    CHECK_THROWS_AS(AuctionEnv(2, dip, spec(1.0)), UnsupportedInstance);
}

TEST_CASE("timeline A revenue weakly exceeds timeline B") {
    std::mt19937_64 rng(4);
    for (int rep = 0; rep < 20; ++rep) {
        double lo = oracle::uniform(rng, 0.0, 2.0);
        GainLossSpec s{oracle::uniform(rng, 0.0, 2.0), oracle::uniform(rng, 0.0, 2.0), 1.0, oracle::uniform(rng, 1.0, 3.0)};
        s.lambda_g = 1.0 + oracle::uniform(rng, 0.0, 1.0) / std::max(s.mu_g, 1e-3);
        if (s.Lambda_g() > 1.0) s.lambda_g = 1.0 + 1.0 / s.mu_g;
        AuctionEnv env(2 + static_cast<int>(rng() % 3), DensityGrid::uniform(lo, lo + oracle::uniform(rng, 0.5, 2.0), 101), s);
        CHECK(solve_auction(Timeline::A, env).revenue >= solve_auction(Timeline::B, env).revenue - 1e-12);
    }
}

TEST_CASE("solver outputs pass the exhaustive misreport audit") {
    for (double lo : {0.0, 1.0})
        for (double x : {1.0, 1.5, 2.0}) {
            AuctionEnv env(2, DensityGrid::uniform(lo, lo + 1.0, 101), spec(x));
            for (auto tl : {Timeline::A, Timeline::B}) {
                auto s = solve_auction(tl, env);
                CHECK(best_response_audit(*as_mechanism(s, env), tl, env.spec).pass(1e-8));
            }
            auto c = solve_auction_C(env);
            auto a = best_response_audit(*as_mechanism(c, env), Timeline::C, env.spec);
            CAPTURE(lo);
            CAPTURE(x);
            CHECK(a.pass(1e-8));
            auto chk = check_solution_C(c, env);
            CHECK(chk.ic_identity < 1e-9);
            CHECK(chk.ir_shortfall < 1e-9);
            for (int k = c.threshold; k < env.F.size(); ++k) CHECK(c.transfers[k].min() >= -1e-12);
        }
}

TEST_CASE("second-price grid auction without news utility is truthful") {
    auto F = DensityGrid::uniform(0.0, 1.0, 21).to_distribution();
    const auto th = F.support();
    auto value = [](int, int own, std::span<const int> o) { return own > o[0] ? 1.0 : (own == o[0] ? 0.5 : 0.0); };
    auto transfer = [th](int, int own, std::span<const int> o) {
        return own > o[0] ? th[o[0]] : (own == o[0] ? 0.5 * th[own] : 0.0);
    };
    ProfileMechanism spa(2, F, 0.0, OutsideCase::inf, value, transfer);
    GainLossSpec classical{0.0, 0.0, 1.0, 1.0};
    for (auto tl : {Timeline::A, Timeline::B, Timeline::C}) CHECK(best_response_audit(spa, tl, classical).pass(1e-8));
}

TEST_CASE("a non-monotone perceived valuation is caught") {
    AuctionEnv env(2, DensityGrid::uniform(1.0, 2.0, 51), spec(1.0));
    auto s = solve_auction(Timeline::A, env);
    std::swap(s.Q[20], s.Q[30]);
    for (std::size_t k = 0; k < s.Q.size(); ++k) s.W[k] = (1.0 + env.spec.mu_g) * s.Q[k];
    auto I = cumulative_trapezoid(s.theta, s.W);
    for (std::size_t k = 0; k < s.Q.size(); ++k)
        s.transfers[k] = DiscreteDistribution::point((s.W[k] * s.theta[k] - I[k]) / (1.0 + env.x()));
    auto a = best_response_audit(*as_mechanism(s, env), Timeline::A, env.spec);
    CHECK(a.max_gain > 1e-4);
}

TEST_CASE("timeline C friction schedule") {
    AuctionEnv env(2, DensityGrid::uniform(1.0, 2.0, 101), spec(1.5));
    auto c = solve_auction_C(env);
    CHECK_FALSE(c.all_pay);
    const double kappa = (1.0 + env.x()) / env.x();
    for (int k = c.threshold; k < env.F.size(); ++k) {
        CHECK(c.friction[k] == doctest::Approx(kappa * std::max(c.s_m[k] - c.c, 0.0)));
        CHECK((c.omega[k] > 0.0) == (c.s_m[k] > c.c));
        CHECK(c.c + c.friction[k] + c.T[k] == doctest::Approx(c.h[k]));
    }
    CHECK(c.friction.back() < 1e-9);
    double rev = 0.0;
    for (int k = 0; k < env.F.size(); ++k) rev += env.F.weights()[k] * c.transfers[k].mean();
    CHECK(c.revenue == doctest::Approx(2.0 * rev).epsilon(1e-9));
}

TEST_CASE("literal payment lotteries violate participation under the oracle") {
    AuctionEnv env(2, DensityGrid::uniform(1.0, 2.0, 101), spec(1.0));
    AuctionOptions lit;
    lit.realizable = false;
    auto c = solve_auction_C(env, lit);
    CHECK(c.c < 0.0);
    auto a = best_response_audit(*as_mechanism(c, env), Timeline::C, env.spec);
    CHECK(a.max_gain <= 1e-8);
    CHECK(a.max_ir_shortfall > 1e-3);
}

TEST_CASE("revenue comparison sweep for types on [1,2]") {
    AuctionEnv env(2, DensityGrid::uniform(1.0, 2.0, 101), spec(1.0));
    std::vector<double> xs;
    for (int i = 0; i <= 10; ++i) xs.push_back(1.0 + 0.1 * i);
    auto rep = revenue_compare(env, xs, 0.5);
    CHECK(rep.sign_changes == 1);
    CHECK(rep.rows.front().rev_C < rep.rows.front().rev_A);
    CHECK(rep.rows.back().rev_C > rep.rows.back().rev_A);
    CHECK(rep.crossing > 1.0);
    CHECK(rep.crossing < 1.3);
    for (const auto& r : rep.rows) CHECK(r.rev_A == doctest::Approx(8.0 / (3.0 * (1.0 + r.x))).epsilon(1e-3));
}

TEST_CASE("without news utility the timelines raise the same revenue") {
    AuctionEnv env(3, DensityGrid::uniform(0.0, 1.0, 101), GainLossSpec{0.0, 0.0, 1.0, 1.0});
    double a = solve_auction(Timeline::A, env).revenue;
    auto c = solve_auction_C(env);
    CHECK(c.revenue == doctest::Approx(a).epsilon(1e-9));
    CHECK(c.all_pay);
    // order statistics: expected second-highest of three U[0,1] draws, reserve 1/2
    double oracle_rev = 3.0 * oracle::simpson([](double t) { return t * t * (2 * t - 1); }, 0.5, 1.0);
    CHECK(a == doctest::Approx(oracle_rev).epsilon(1e-3));
}
