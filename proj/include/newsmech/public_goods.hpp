#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "newsmech/newsutil.hpp"
#include "newsmech/screening.hpp"

namespace newsmech {

struct PublicGoodEnv {
    int n = 2;
    DiscreteDistribution F;
    double mu_g = 0.0;
    double Lambda_g = 0.0;
    double cost = 0.0;  // per-capita cost c(N)

    PublicGoodEnv(int n_, DiscreteDistribution F_, double mu_g_, double Lambda_g_, double cost_);
    double c_tilde() const { return cost / (1.0 + mu_g); }
    // (1+mu_g) * min type < c(N) < (1+mu_g) * max type
    bool interesting() const;
};

int efficiency_rule(const std::vector<double>& theta, const PublicGoodEnv& env);

// Probability of provision given own type and truthful opponents.
// `others` is the (n-1)-fold convolution of F; pass it to avoid recomputing.
double interim_probability(double theta, const PublicGoodEnv& env, const DiscreteDistribution& others);
double interim_probability(double theta, const PublicGoodEnv& env);

double perceived_value_of_provision(Timeline tl, double Q, const PublicGoodEnv& env);

struct IcVerdict {
    bool ic = true;
    std::optional<double> witness;
    bool bound_ic = true;  // verdict from the derivative bound
};
IcVerdict ic_condition(Timeline tl, const PublicGoodEnv& env);

struct PopulationScan {
    std::optional<int> first_ic;
    bool monotone = true;  // IC is never lost after it is first gained
    std::vector<int> ic_flags;
};
// ctilde(N) gives the per-capita cost net of the surprise factor.
PopulationScan min_population_for_ic(const DiscreteDistribution& F, double mu_g, double Lambda_g,
                                     const std::function<double(int)>& ctilde, int n_from, int n_to);

}  // namespace newsmech
