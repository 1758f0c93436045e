#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace newsmech {

inline constexpr double kAtomMergeTol = 1e-12;
inline constexpr std::size_t kDefaultSupportCap = 2'000'000;

class DiscreteDistribution {
public:
    DiscreteDistribution() = default;
    // Sorts, merges atoms closer than kAtomMergeTol, drops zero-mass atoms.
    // Throws ValidationError on negative mass or mass not summing to 1.
    DiscreteDistribution(std::vector<double> support, std::vector<double> probs);

    static DiscreteDistribution point(double x);

    const std::vector<double>& support() const { return support_; }
    const std::vector<double>& probs() const { return probs_; }
    std::size_t size() const { return support_.size(); }
    bool degenerate() const { return support_.size() == 1; }

    double mean() const;
    double variance() const;
    double cdf(double x) const;
    double min() const { return support_.front(); }
    double max() const { return support_.back(); }

    // x -> a*x + b; a may be negative (order is reversed).
    DiscreteDistribution affine(double a, double b) const;

private:
    std::vector<double> support_;
    std::vector<double> probs_;
};

struct GainLossSpec {
    double mu_g = 1.0;
    double mu_m = 1.0;
    double lambda_g = 1.0;
    double lambda_m = 1.0;

    double Lambda_g() const { return mu_g * (lambda_g - 1.0); }
    double Lambda_m() const { return mu_m * (lambda_m - 1.0); }
    void validate() const;
};

double quantile(const DiscreteDistribution& d, double p);

double gain_loss(double y, double mu, double lambda);

struct NewsParts {
    double gain = 0.0;  // integral of positive percentile differences
    double loss = 0.0;  // integral of negative percentile differences (<= 0)
    double value(double mu, double lambda) const { return mu * (gain + lambda * loss); }
};
NewsParts news_utility_parts(const DiscreteDistribution& G, const DiscreteDistribution& H);

// mu * integral over p of xi(c_G(p) - c_H(p)); exact on merged breakpoints.
double news_utility(const DiscreteDistribution& G, const DiscreteDistribution& H, double mu, double lambda);

// Lambda * sum_{z>w} p_z p_w (z - w).
double expected_realization_penalty(const DiscreteDistribution& H, double Lambda);

// Two-point lottery with the requested penalty and mean.
DiscreteDistribution binary_for_target(double x, double y, double Lambda);

DiscreteDistribution n_fold_convolution(const DiscreteDistribution& d, int k,
                                        std::size_t support_cap = kDefaultSupportCap);

// E[(theta - s)^+] for independent theta, s ~ F.
double positive_gap_mean(const DiscreteDistribution& F);

// E[max(X, 0)].
double positive_part_mean(const DiscreteDistribution& d);

}  // namespace newsmech
