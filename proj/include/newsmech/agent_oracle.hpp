#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "newsmech/bayes_common.hpp"
#include "newsmech/newsutil.hpp"
#include "newsmech/screening.hpp"

namespace newsmech {

// Independent good-utility and money-utility marginals.
struct ProductLottery {
    DiscreteDistribution good;
    DiscreteDistribution money;
};

struct MenuProblem {
    ProductLottery F0;
    std::vector<ProductLottery> menu;
    GainLossSpec spec;
    Timeline timeline = Timeline::A;
};

struct DecisionUtilities {
    std::vector<double> choice;         // utility driving the choice out of the menu
    std::vector<double> participation;  // utility of the participation self if that lottery is chosen
    double outside = 0.0;
};

DecisionUtilities decision_utilities(const MenuProblem& problem);

struct Decision {
    bool accept = false;
    int index = 0;
    bool operator==(const Decision&) const = default;
};

Decision simulate(const MenuProblem& problem);

struct Prop1Report {
    bool same_behavior = true;
    Decision C, D;
    std::vector<double> realization;  // per lottery, both dimensions combined
    bool realization_signs_ok = true;
    bool ok() const { return same_behavior && realization_signs_ok; }
};

Prop1Report verify_prop1(const MenuProblem& problem);

// Random product lotteries with 1-4 atoms per dimension; classical sets mu = 0.
MenuProblem random_menu_problem(std::mt19937_64& rng, bool classical = false);

struct AuditReport {
    double max_gain = 0.0;         // largest gain from a misreport
    double max_ir_shortfall = 0.0;  // largest participation shortfall at the truthful report
    double witness_type = 0.0;
    int witness_report = -1;
    bool pass(double tol) const { return max_gain <= tol && max_ir_shortfall <= tol; }
};

// Exhaustive misreport search for agent i on the mechanism's type grid.
AuditReport best_response_audit(const DirectMechanism& mech, Timeline tl, const GainLossSpec& spec, int agent = 0);

// Same search for a screening menu; loss-aversion types carry mu = 1 and
// lambda^g = lambda^m = lambda. Excluded types must reject the menu.
AuditReport audit_screening_menu(const ScreeningMenu& menu, const ScreeningEnv& env);

}  // namespace newsmech
