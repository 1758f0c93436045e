#include "newsmech/grid.hpp"

#include <cmath>

#include "newsmech/errors.hpp"

namespace newsmech {

std::vector<double> trapezoid_weights(const std::vector<double>& x) {
    std::vector<double> w(x.size(), 0.0);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        double h = x[i + 1] - x[i];
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    return w;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& x, const std::vector<double>& f) {
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t i = 1; i < x.size(); ++i) out[i] = out[i - 1] + 0.5 * (x[i] - x[i - 1]) * (f[i] + f[i - 1]);
    return out;
}

DensityGrid::DensityGrid(double lo, double hi, int n, const std::function<double(double)>& pdf,
                         const std::function<double(double)>& dpdf) {
    if (n < 2) throw ValidationError("grid needs at least 2 points");
    if (!(hi > lo)) throw ValidationError("grid needs lo < hi");
    x_.resize(n);
    pdf_.resize(n);
    dpdf_.resize(n);
    for (int i = 0; i < n; ++i) {
        x_[i] = (i == n - 1) ? hi : lo + (hi - lo) * i / (n - 1);
        pdf_[i] = pdf(x_[i]);
        dpdf_[i] = dpdf(x_[i]);
        if (!(pdf_[i] >= 0.0) || !std::isfinite(pdf_[i])) throw ValidationError("density must be nonnegative and finite");
    }
    auto tw = trapezoid_weights(x_);
    double mass = 0.0;
    for (int i = 0; i < n; ++i) mass += tw[i] * pdf_[i];
    if (!(mass > 0.0)) throw ValidationError("density has no mass");
    w_.resize(n);
    for (int i = 0; i < n; ++i) {
        pdf_[i] /= mass;
        dpdf_[i] /= mass;
        w_[i] = tw[i] * pdf_[i];
    }
    cdf_ = cumulative_trapezoid(x_, pdf_);
    cdf_.back() = 1.0;
}

DensityGrid DensityGrid::uniform(double lo, double hi, int n) {
    return DensityGrid(lo, hi, n, [](double) { return 1.0; }, [](double) { return 0.0; });
}

DensityGrid DensityGrid::linear(double lo, double hi, int n, double slope) {
    return DensityGrid(lo, hi, n, [=](double x) { return 1.0 + slope * (x - lo); }, [=](double) { return slope; });
}

DiscreteDistribution DensityGrid::to_distribution() const {
    std::vector<double> p = w_;
    double total = 0.0;
    for (double v : p) total += v;
    for (double& v : p) v /= total;
    return DiscreteDistribution(x_, p);
}

double DensityGrid::integrate(const std::vector<double>& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < x_.size(); ++i) s += w_[i] * f[i];
    return s;
}

}  // namespace newsmech
