#pragma once

#include <functional>
#include <vector>

#include "newsmech/newsutil.hpp"

namespace newsmech {

// A continuous density sampled on an equally spaced grid.
// Integrals are trapezoid sums; weights() are the resulting atom masses.
class DensityGrid {
public:
    DensityGrid() = default;
    // pdf and its derivative are sampled and then rescaled to integrate to 1.
    DensityGrid(double lo, double hi, int n, const std::function<double(double)>& pdf,
                const std::function<double(double)>& dpdf);

    static DensityGrid uniform(double lo, double hi, int n);
    // Density proportional to 1 + slope*(x - lo).
    static DensityGrid linear(double lo, double hi, int n, double slope);

    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& pdf() const { return pdf_; }
    const std::vector<double>& dpdf() const { return dpdf_; }
    const std::vector<double>& weights() const { return w_; }
    const std::vector<double>& cdf() const { return cdf_; }
    int size() const { return static_cast<int>(x_.size()); }
    double lo() const { return x_.front(); }
    double hi() const { return x_.back(); }
    double step() const { return x_[1] - x_[0]; }

    DiscreteDistribution to_distribution() const;
    double integrate(const std::vector<double>& f) const;  // trapezoid of f * pdf

private:
    std::vector<double> x_, pdf_, dpdf_, w_, cdf_;
};

// Trapezoid weights of a grid (integral of f dx).
std::vector<double> trapezoid_weights(const std::vector<double>& x);
// Running trapezoid integral from x[0].
std::vector<double> cumulative_trapezoid(const std::vector<double>& x, const std::vector<double>& f);

}  // namespace newsmech
