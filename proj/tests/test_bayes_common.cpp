#include <doctest.h>

#include <random>

#include "newsmech/agent_oracle.hpp"
#include "newsmech/bayes_common.hpp"
#include "oracles.hpp"

using namespace newsmech;

TEST_CASE("highest report wins: interim probabilities match profile enumeration") {
    DiscreteDistribution types({0.0, 0.5, 1.0, 2.0}, {0.1, 0.4, 0.3, 0.2});
    for (int n : {1, 2, 3, 4}) {
        auto q = highest_type_wins(types, n);
        for (int r = 0; r < 4; ++r) {
            double s = 0.0;
            int profiles = 1;
            for (int i = 0; i < n - 1; ++i) profiles *= 4;
            for (int code = 0; code < profiles; ++code) {
                double p = 1.0;
                int above = 0, ties = 0, c = code;
                for (int i = 0; i < n - 1; ++i, c /= 4) {
                    p *= types.probs()[c % 4];
                    above += c % 4 > r;
                    ties += c % 4 == r;
                }
                if (!above) s += p / (ties + 1);
            }
            CHECK(q[r] == doctest::Approx(s));
        }
    }
}

namespace {

// Random two-agent mechanism on a 4-point grid with values between the outside option and its mirror.
ProfileMechanism random_mechanism(std::mt19937_64& rng, OutsideCase oc) {
    DiscreteDistribution types({0.2, 0.6, 1.1, 1.7}, {0.25, 0.25, 0.25, 0.25});
    std::vector<double> val(16), tr(16);
    for (int i = 0; i < 16; ++i) {
        val[i] = oracle::uniform(rng, 0.0, 1.0);
        tr[i] = oracle::uniform(rng, -0.8, 1.2);
    }
    double v0 = oc == OutsideCase::inf ? 0.0 : 1.0;
    auto value = [val](int, int own, std::span<const int> o) { return val[own * 4 + o[0]]; };
    auto transfer = [tr](int, int own, std::span<const int> o) { return tr[own * 4 + o[0]]; };
    return ProfileMechanism(2, types, v0, oc, value, transfer);
}

}  // namespace

TEST_CASE("oracle and perceived-valuation forms give the same reporting utility") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 30; ++rep) {
        auto oc = rep % 2 ? OutsideCase::sup : OutsideCase::inf;
        auto mech = random_mechanism(rng, oc);
        GainLossSpec s{oracle::uniform(rng, 0, 2), oracle::uniform(rng, 0, 2), oracle::uniform(rng, 1, 3),
                       oracle::uniform(rng, 1, 3)};
        for (auto tl : {Timeline::A, Timeline::B, Timeline::C}) {
            auto prof = build_profile(mech, 0, tl, s);
            for (int k = 0; k < 4; ++k) {
                double theta = mech.types().support()[k];
                MenuProblem p;
                p.spec = s;
                p.timeline = tl;
                p.F0 = {DiscreteDistribution::point(mech.v_outside() * theta), DiscreteDistribution::point(0.0)};
                for (int r = 0; r < 4; ++r) {
                    auto lot = mech.induced(0, r);
                    p.menu.push_back({lot.value.affine(theta, 0.0), lot.transfer.affine(-1.0, 0.0)});
                }
                auto u = decision_utilities(p);
                for (int r = 0; r < 4; ++r)
                    CHECK(u.choice[r] == doctest::Approx(prof.rows[r].W * theta - prof.rows[r].Upsilon).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("interim quantities of a hand-built mechanism") {
    DiscreteDistribution types({0.0, 1.0}, {0.5, 0.5});
    auto value = [](int, int own, std::span<const int> o) { return own >= o[0] ? 1.0 : 0.0; };
    auto transfer = [](int, int own, std::span<const int> o) { return own > o[0] ? 1.0 : -0.5; };
    ProfileMechanism m(2, types, 0.0, OutsideCase::inf, value, transfer);
    auto q = interim_quantities(m, 0, 1);
    CHECK(q.V == doctest::Approx(1.0));
    CHECK(q.T == doctest::Approx(0.25));
    CHECK(q.T_plus == doctest::Approx(0.5));
    auto f = realization_frictions(m, 0, 1);
    CHECK(f.Gamma_g == 0.0);
    CHECK(f.omega == doctest::Approx(0.375));
}

TEST_CASE("monotone perceived valuation is IC; a dip is reported with a witness") {
    PerceivedProfile prof;
    for (double th : {0.0, 0.5, 1.0, 1.5}) prof.rows.push_back({.theta = th, .W = th});
    auto ok = check_ic(prof);
    CHECK(ok.ic);
    CHECK(ok.utility.back() == doctest::Approx(1.125));
    prof.rows[2].W = 0.1;
    auto bad = check_ic(prof);
    CHECK_FALSE(bad.ic);
    REQUIRE(bad.witness.has_value());
    CHECK(*bad.witness == doctest::Approx(1.0));
}

TEST_CASE("participation check uses the full-belief utility") {
    DiscreteDistribution types({1.0, 2.0}, {0.5, 0.5});
    auto value = [](int, int, std::span<const int>) { return 1.0; };
    auto transfer = [](int, int own, std::span<const int>) { return own == 0 ? 1.5 : 1.0; };
    ProfileMechanism m(2, types, 0.0, OutsideCase::inf, value, transfer);
    GainLossSpec s{1.0, 1.0, 1.5, 1.5};
    // type 1: (1+mu) * 1 - (1+mu) * 1.5 - Lambda * 1.5 < 0
    auto ir = check_ir(build_profile(m, 0, Timeline::A, s), s);
    CHECK_FALSE(ir.ir);
    CHECK(*ir.first_violation == doctest::Approx(1.0));
    CHECK(ir.worst_shortfall == doctest::Approx(1.75));
}
