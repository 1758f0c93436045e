#include "newsmech/newsutil.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "newsmech/errors.hpp"

namespace newsmech {

DiscreteDistribution::DiscreteDistribution(std::vector<double> support, std::vector<double> probs) {
    if (support.size() != probs.size() || support.empty())
        throw ValidationError("distribution needs matching non-empty support and probabilities");
    std::vector<std::size_t> idx(support.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });
    double total = 0.0;
    for (std::size_t i : idx) {
        double x = support[i];
        double p = probs[i];
        if (!std::isfinite(x) || !std::isfinite(p) || p < 0.0)
            throw ValidationError("distribution has a non-finite value or negative probability");
        total += p;
        if (p == 0.0) continue;
        if (!support_.empty() && std::abs(x - support_.back()) <= kAtomMergeTol) {
            probs_.back() += p;
        } else {
            support_.push_back(x);
            probs_.push_back(p);
        }
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw ValidationError("probabilities sum to " + std::to_string(total) + ", expected 1");
    if (support_.empty()) throw ValidationError("distribution has no mass");
}

DiscreteDistribution DiscreteDistribution::point(double x) { return DiscreteDistribution({x}, {1.0}); }

double DiscreteDistribution::mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) s += support_[i] * probs_[i];
    return s;
}

double DiscreteDistribution::variance() const {
    double m = mean();
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) s += (support_[i] - m) * (support_[i] - m) * probs_[i];
    return s;
}

double DiscreteDistribution::cdf(double x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < size() && support_[i] <= x; ++i) s += probs_[i];
    return s;
}

DiscreteDistribution DiscreteDistribution::affine(double a, double b) const {
    std::vector<double> xs(size());
    for (std::size_t i = 0; i < size(); ++i) xs[i] = a * support_[i] + b;
    if (a == 0.0) return point(b);
    DiscreteDistribution out;
    if (a > 0) {
        out.support_ = std::move(xs);
        out.probs_ = probs_;
    } else {
        out.support_.assign(xs.rbegin(), xs.rend());
        out.probs_.assign(probs_.rbegin(), probs_.rend());
    }
    return out;
}

void GainLossSpec::validate() const {
    if (!(mu_g >= 0.0) || !(mu_m >= 0.0)) throw ValidationError("news-utility weights must be nonnegative");
    if (!(lambda_g >= 1.0) || !(lambda_m >= 1.0)) throw ValidationError("loss aversion must satisfy lambda >= 1");
}

double quantile(const DiscreteDistribution& d, double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile level must lie in (0,1)");
    double c = 0.0;
    const auto& xs = d.support();
    const auto& ps = d.probs();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        c += ps[i];
        if (c >= p) return xs[i];
    }
    return xs.back();
}

double gain_loss(double y, double mu, double lambda) { return y >= 0.0 ? mu * y : mu * lambda * y; }

NewsParts news_utility_parts(const DiscreteDistribution& G, const DiscreteDistribution& H) {
    const auto& gx = G.support();
    const auto& gp = G.probs();
    const auto& hx = H.support();
    const auto& hp = H.probs();
    NewsParts out;
    auto add = [&out](double mass, double diff) {
        if (diff >= 0.0)
            out.gain += mass * diff;
        else
            out.loss += mass * diff;
    };
    std::size_t i = 0, j = 0;
    double ci = gp[0], cj = hp[0], prev = 0.0;
    while (true) {
        double next = std::min(ci, cj);
        if (next > prev) add(next - prev, gx[i] - hx[j]);
        prev = next;
        bool last_g = i + 1 == gx.size();
        bool last_h = j + 1 == hx.size();
        if (last_g && last_h) break;
        // Advance whichever block ends first; cumulative dust can leave one side short of 1.
        if ((ci <= cj && !last_g) || last_h) {
            ++i;
            ci += gp[i];
        } else {
            ++j;
            cj += hp[j];
        }
    }
    if (prev < 1.0) add(1.0 - prev, gx.back() - hx.back());
    return out;
}

double news_utility(const DiscreteDistribution& G, const DiscreteDistribution& H, double mu, double lambda) {
    return news_utility_parts(G, H).value(mu, lambda);
}

double expected_realization_penalty(const DiscreteDistribution& H, double Lambda) {
    const auto& x = H.support();
    const auto& p = H.probs();
    double below_mass = 0.0, below_moment = 0.0, s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        s += p[k] * (x[k] * below_mass - below_moment);
        below_mass += p[k];
        below_moment += p[k] * x[k];
    }
    return Lambda * std::max(s, 0.0);
}

DiscreteDistribution binary_for_target(double x, double y, double Lambda) {
    if (x < 0.0) throw DomainError("target penalty must be nonnegative");
    if (x == 0.0) return DiscreteDistribution::point(y);
    if (!(Lambda > 0.0)) throw InfeasibleError("positive penalty needs Lambda > 0");
    double spread = 2.0 * x / Lambda;
    return DiscreteDistribution({y - spread, y + spread}, {0.5, 0.5});
}

namespace {

// Support of the form x0 + k*h for integer k; returns false if not.
bool lattice_of(const DiscreteDistribution& d, double& x0, double& h, std::vector<long>& k) {
    const auto& x = d.support();
    x0 = x.front();
    if (x.size() == 1) {
        h = 1.0;
        k = {0};
        return true;
    }
    h = x[1] - x[0];
    for (std::size_t i = 2; i < x.size(); ++i) h = std::min(h, x[i] - x[i - 1]);
    k.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double r = (x[i] - x0) / h;
        long n = std::lround(r);
        if (std::abs(r - n) > 1e-9) return false;
        k[i] = n;
    }
    return true;
}

}  // namespace

DiscreteDistribution n_fold_convolution(const DiscreteDistribution& d, int k, std::size_t support_cap) {
    if (k < 1) throw DomainError("convolution order must be positive");
    if (k == 1) return d;
    double x0, h;
    std::vector<long> idx;
    if (lattice_of(d, x0, h, idx)) {
        long width = idx.back();
        std::size_t out_size = static_cast<std::size_t>(width) * k + 1;
        if (out_size > support_cap)
            throw ResourceError("convolution support exceeds cap; use a coarser grid");
        std::vector<double> cur(static_cast<std::size_t>(width) + 1, 0.0);
        for (std::size_t i = 0; i < idx.size(); ++i) cur[idx[i]] = d.probs()[i];
        for (int step = 1; step < k; ++step) {
            std::vector<double> nxt(cur.size() + width, 0.0);
            for (std::size_t a = 0; a < cur.size(); ++a) {
                if (cur[a] == 0.0) continue;
                for (std::size_t i = 0; i < idx.size(); ++i) nxt[a + idx[i]] += cur[a] * d.probs()[i];
            }
            cur.swap(nxt);
        }
        std::vector<double> xs, ps;
        double total = 0.0;
        for (std::size_t a = 0; a < cur.size(); ++a) {
            if (cur[a] <= 0.0) continue;
            xs.push_back(k * x0 + static_cast<double>(a) * h);
            ps.push_back(cur[a]);
            total += cur[a];
        }
        for (double& p : ps) p /= total;
        return DiscreteDistribution(std::move(xs), std::move(ps));
    }
    DiscreteDistribution cur = d;
    for (int step = 1; step < k; ++step) {
        if (cur.size() * d.size() > support_cap)
            throw ResourceError("convolution support exceeds cap; use a coarser grid");
        std::vector<double> xs, ps;
        xs.reserve(cur.size() * d.size());
        ps.reserve(cur.size() * d.size());
        for (std::size_t a = 0; a < cur.size(); ++a)
            for (std::size_t b = 0; b < d.size(); ++b) {
                xs.push_back(cur.support()[a] + d.support()[b]);
                ps.push_back(cur.probs()[a] * d.probs()[b]);
            }
        double total = std::accumulate(ps.begin(), ps.end(), 0.0);
        for (double& p : ps) p /= total;
        cur = DiscreteDistribution(std::move(xs), std::move(ps));
    }
    return cur;
}

double positive_gap_mean(const DiscreteDistribution& F) {
    const auto& x = F.support();
    const auto& p = F.probs();
    double s = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a)
        for (std::size_t b = 0; b < a; ++b) s += p[a] * p[b] * (x[a] - x[b]);
    double check = expected_realization_penalty(F, 1.0);
    if (std::abs(s - check) > 1e-9 * (1.0 + std::abs(s)))
        throw Error(ErrorKind::domain, "internal", "positive gap mean disagrees with the penalty functional");
    return s;
}

double positive_part_mean(const DiscreteDistribution& d) {
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) s += std::max(d.support()[i], 0.0) * d.probs()[i];
    return s;
}

}  // namespace newsmech
