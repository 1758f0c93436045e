#include <doctest.h>

#include <random>

#include "newsmech/errors.hpp"
#include "newsmech/grid.hpp"
#include "newsmech/newsutil.hpp"
#include "oracles.hpp"

using namespace newsmech;

TEST_CASE("distribution normalizes and validates") {
    DiscreteDistribution d({2.0, 1.0, 1.0 + 1e-14}, {0.5, 0.25, 0.25});
    CHECK(d.size() == 2);
    CHECK(d.support()[0] == doctest::Approx(1.0));
    CHECK(d.probs()[0] == doctest::Approx(0.5));
    CHECK(d.mean() == doctest::Approx(1.5));
    CHECK(d.cdf(1.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(DiscreteDistribution({1.0}, {0.9}), ValidationError);
    CHECK_THROWS_AS(DiscreteDistribution({1.0, 2.0}, {1.2, -0.2}), ValidationError);
    auto r = d.affine(-2.0, 1.0);
    CHECK(r.min() == doctest::Approx(-3.0));
    CHECK(r.probs()[0] == doctest::Approx(0.5));
}

TEST_CASE("gain-loss function") {
    CHECK(gain_loss(2.0, 0.5, 3.0) == doctest::Approx(1.0));
    CHECK(gain_loss(-2.0, 0.5, 3.0) == doctest::Approx(-3.0));
    CHECK(gain_loss(0.0, 0.5, 3.0) == 0.0);
}

TEST_CASE("news utility on hand-computed cases") {
    auto d0 = DiscreteDistribution::point(0.0), d1 = DiscreteDistribution::point(1.0);
    DiscreteDistribution coin({0.0, 1.0}, {0.5, 0.5});
    CHECK(news_utility(d1, d0, 0.7, 2.0) == doctest::Approx(0.7));
    CHECK(news_utility(d0, d1, 0.7, 2.0) == doctest::Approx(-1.4));
    CHECK(news_utility(d0, coin, 1.0, 2.5) == doctest::Approx(-1.25));
    CHECK(news_utility(d1, coin, 1.0, 2.5) == doctest::Approx(0.5));
    CHECK(news_utility(coin, coin, 1.0, 2.5) == 0.0);
}

TEST_CASE("news utility agrees with a percentile quadrature oracle") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 40; ++rep) {
        auto G = oracle::random_dist(rng, 5, -1.0, 2.0);
        auto H = oracle::random_dist(rng, 5, -1.0, 2.0);
        double mu = oracle::uniform(rng, 0.0, 2.0), lam = oracle::uniform(rng, 1.0, 3.0);
        CHECK(news_utility(G, H, mu, lam) == doctest::Approx(oracle::news(G, H, mu, lam, 100000)).epsilon(1e-3));
        auto parts = news_utility_parts(G, H);
        CHECK(parts.gain >= 0.0);
        CHECK(parts.loss <= 0.0);
        CHECK(parts.value(mu, lam) == doctest::Approx(news_utility(G, H, mu, lam)));
    }
}

TEST_CASE("quantile is the left-continuous inverse") {
    DiscreteDistribution d({0.0, 1.0, 3.0}, {0.25, 0.25, 0.5});
    CHECK(quantile(d, 0.25) == 0.0);
    CHECK(quantile(d, 0.26) == 1.0);
    CHECK(quantile(d, 0.99) == 3.0);
    CHECK_THROWS_AS(quantile(d, 0.0), DomainError);
}

TEST_CASE("realization penalty matches the pairwise oracle and expected atom news") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 200; ++rep) {
        auto H = oracle::random_dist(rng, 6, -2.0, 2.0);
        double mu = oracle::uniform(rng, 0.0, 2.0), lam = oracle::uniform(rng, 1.0, 3.0);
        double Lambda = mu * (lam - 1.0);
        double w = expected_realization_penalty(H, Lambda);
        CHECK(w == doctest::Approx(oracle::penalty(H, Lambda)).epsilon(1e-12));
        double realized = 0.0;
        for (std::size_t i = 0; i < H.size(); ++i)
            realized += H.probs()[i] * news_utility(DiscreteDistribution::point(H.support()[i]), H, mu, lam);
        CHECK(realized == doctest::Approx(-w).epsilon(1e-10));
    }
}

TEST_CASE("binary_for_target hits penalty and mean") {
    auto b = binary_for_target(0.3, -1.0, 0.6);
    CHECK(b.size() == 2);
    CHECK(b.mean() == doctest::Approx(-1.0));
    CHECK(expected_realization_penalty(b, 0.6) == doctest::Approx(0.3));
    CHECK(binary_for_target(0.0, 2.0, 0.6).degenerate());
    CHECK_THROWS_AS(binary_for_target(0.1, 0.0, 0.0), InfeasibleError);
    CHECK_THROWS_AS(binary_for_target(-0.1, 0.0, 1.0), DomainError);
}

TEST_CASE("n-fold convolution matches enumeration") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        auto d = oracle::random_dist(rng, 4, 0.0, 1.0);
        int k = 1 + static_cast<int>(rng() % 3);
        auto c = n_fold_convolution(d, k);
        // enumerate
        std::vector<double> xs{0.0}, ps{1.0};
        for (int i = 0; i < k; ++i) {
            std::vector<double> nx, np;
            for (std::size_t a = 0; a < xs.size(); ++a)
                for (std::size_t b = 0; b < d.size(); ++b) {
                    nx.push_back(xs[a] + d.support()[b]);
                    np.push_back(ps[a] * d.probs()[b]);
                }
            xs = nx;
            ps = np;
        }
        DiscreteDistribution e(xs, ps);
        CHECK(c.mean() == doctest::Approx(e.mean()));
        CHECK(c.variance() == doctest::Approx(e.variance()));
        for (double t : {0.2, 0.7, 1.3, 2.1}) CHECK(c.cdf(t) == doctest::Approx(e.cdf(t)));
    }
}

TEST_CASE("lattice convolution keeps grid atoms exact") {
    auto F = DensityGrid::uniform(0.0, 1.0, 11).to_distribution();
    auto c = n_fold_convolution(F, 3);
    CHECK(c.size() == 31);
    CHECK(c.mean() == doctest::Approx(1.5));
    CHECK(c.max() == doctest::Approx(3.0));
}

TEST_CASE("positive gap mean of U[0,1] is 1/6") {
    auto F = DensityGrid::uniform(0.0, 1.0, 2001).to_distribution();
    CHECK(positive_gap_mean(F) == doctest::Approx(1.0 / 6.0).epsilon(1e-5));
    CHECK(positive_part_mean(DiscreteDistribution({-1.0, 2.0}, {0.5, 0.5})) == doctest::Approx(1.0));
}

TEST_CASE("gain-loss spec validation") {
    GainLossSpec s{0.0, 1.0, 1.0, 2.0};
    CHECK_NOTHROW(s.validate());
    CHECK(s.Lambda_m() == doctest::Approx(1.0));
    s.lambda_g = 0.9;
    CHECK_THROWS_AS(s.validate(), ValidationError);
}

TEST_CASE("density grid normalizes to unit mass") {
    auto G = DensityGrid::linear(1.0, 2.0, 51, 1.0);
    double m = 0.0;
    for (double w : G.weights()) m += w;
    CHECK(m == doctest::Approx(1.0));
    CHECK(G.cdf().back() == doctest::Approx(1.0));
    CHECK(G.integrate(std::vector<double>(51, 2.0)) == doctest::Approx(2.0));
}
