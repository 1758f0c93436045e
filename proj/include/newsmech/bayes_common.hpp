#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "newsmech/newsutil.hpp"
#include "newsmech/screening.hpp"

namespace newsmech {

enum class OutsideCase { inf, sup };

// Distribution of an agent's allocation value v(q) and transfer t when she
// reports a given type and opponents report truthfully.
struct InducedLottery {
    DiscreteDistribution value;
    DiscreteDistribution transfer;
};

class DirectMechanism {
public:
    DirectMechanism(int n, DiscreteDistribution types, double v_outside, OutsideCase outside_case)
        : n_(n), types_(std::move(types)), v_outside_(v_outside), case_(outside_case) {}
    virtual ~DirectMechanism() = default;

    int n() const { return n_; }
    const DiscreteDistribution& types() const { return types_; }
    double v_outside() const { return v_outside_; }
    OutsideCase outside_case() const { return case_; }

    // Report is an index into types().support().
    virtual InducedLottery induced(int agent, int report) const = 0;

private:
    int n_;
    DiscreteDistribution types_;
    double v_outside_;
    OutsideCase case_;
};

// Explicit profile functions; opponents' types are enumerated on the grid.
class ProfileMechanism : public DirectMechanism {
public:
    using ProfileFn = std::function<double(int agent, int own, std::span<const int> others)>;
    ProfileMechanism(int n, DiscreteDistribution types, double v_outside, OutsideCase outside_case, ProfileFn value,
                     ProfileFn transfer);
    InducedLottery induced(int agent, int report) const override;

private:
    ProfileFn value_, transfer_;
};

// Symmetric unit-good mechanism stored per report: winning probability and a
// transfer lottery (opponent-contingent payments are not materialized).
class SymmetricMechanism : public DirectMechanism {
public:
    SymmetricMechanism(int n, DiscreteDistribution types, std::vector<double> win_prob,
                       std::vector<DiscreteDistribution> transfers);
    InducedLottery induced(int agent, int report) const override;
    const std::vector<double>& win_prob() const { return q_; }

private:
    std::vector<double> q_;
    std::vector<DiscreteDistribution> t_;
};

// Winning probability of each grid type when the highest report wins and ties
// are split uniformly, opponents i.i.d. on the grid.
std::vector<double> highest_type_wins(const DiscreteDistribution& types, int n);

struct InterimQuantities {
    double V = 0.0, T = 0.0, T_plus = 0.0;
};
struct Frictions {
    double Gamma_g = 0.0, omega = 0.0;
};

struct ProfileRow {
    double theta = 0.0;
    double V = 0.0, T = 0.0, T_plus = 0.0;
    double Gamma_g = 0.0, omega = 0.0;
    double W = 0.0, Upsilon = 0.0;
};

struct PerceivedProfile {
    Timeline timeline = Timeline::A;
    OutsideCase outside_case = OutsideCase::inf;
    double v_outside = 0.0;
    std::vector<ProfileRow> rows;
};

InterimQuantities interim_quantities(const DirectMechanism& mech, int agent, int report);
Frictions realization_frictions(const DirectMechanism& mech, int agent, int report);

double perceived_valuation(Timeline tl, OutsideCase oc, double v_outside, const ProfileRow& row,
                           const GainLossSpec& spec);
double perceived_transfer(Timeline tl, const ProfileRow& row, const GainLossSpec& spec);

PerceivedProfile build_profile(const DirectMechanism& mech, int agent, Timeline tl, const GainLossSpec& spec);

struct IcReport {
    bool ic = true;
    std::optional<double> witness;  // type where W drops
    std::vector<double> utility;    // Mirrlees interim utility
    std::vector<double> upsilon;    // perceived transfer implied by the Mirrlees identity
};
// utility_at_bottom pins the Mirrlees constant.
IcReport check_ic(const PerceivedProfile& profile, double utility_at_bottom = 0.0);

struct IrReport {
    bool ir = true;
    std::optional<double> first_violation;
    double worst_shortfall = 0.0;
};
IrReport check_ir(const PerceivedProfile& profile, const GainLossSpec& spec, double tol = 1e-9);

}  // namespace newsmech
