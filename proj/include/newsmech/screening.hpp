#pragma once

#include <optional>
#include <string>
#include <vector>

#include "newsmech/grid.hpp"
#include "newsmech/newsutil.hpp"

namespace newsmech {

enum class Timeline { A, B, C, D };

const char* to_string(Timeline t);
Timeline timeline_from_string(const std::string& s);

struct ScreeningEnv {
    DiscreteDistribution F;  // intrinsic value theta
    DensityGrid G;           // loss aversion on [1, lambda_bar]
    double alpha = 0.5;
    double c = 1.0;
    double m = 0.0;  // mean(F)
    double M = 0.0;  // positive gap mean of F

    ScreeningEnv(DiscreteDistribution F_, DensityGrid G_, double alpha_, double c_);
    double lambda_bar() const { return G.hi(); }
    double v(double q) const;
    double v_inverse(double w) const;
};

struct ScreeningMenu {
    Timeline timeline = Timeline::A;
    std::vector<double> lambda_grid;
    std::vector<double> q;
    std::vector<double> t;
    double f = 0.0;
    int served = 0;  // grid points [0, served) are served; the rest get (0,0)
    double threshold = 0.0;
    double profit = 0.0;
};

struct RegularityReport {
    bool regular = true;
    std::optional<double> first_violation;
};

double virtual_type(Timeline tl, double lambda, const ScreeningEnv& env);
// Evaluated at grid point k of env.G.
double virtual_valuation(Timeline tl, int k, const ScreeningEnv& env);
std::vector<double> virtual_valuation_grid(Timeline tl, const ScreeningEnv& env);

// Sufficient condition for a nonincreasing virtual valuation (A or B).
RegularityReport check_regularity(Timeline tl, const ScreeningEnv& env);

ScreeningMenu solve_pointwise(Timeline tl, const ScreeningEnv& env);

// Transfers from the envelope representation. A/B: constant is the utility of
// the top type. C: constant is the fixed fee f. Only grid points [0, served).
std::vector<double> mirrlees_payments(Timeline tl, const std::vector<double>& q, const ScreeningEnv& env,
                                      double constant);

struct TimelineCOptions {
    int max_newton = 400;
    double gap_tol = 1e-10;
    int threads = 1;
};

ScreeningMenu solve_timeline_C(const ScreeningEnv& env, const TimelineCOptions& opt = {});
// Best menu serving exactly the first `served` grid points; nullopt if infeasible.
std::optional<ScreeningMenu> solve_timeline_C_fixed(const ScreeningEnv& env, int served,
                                                    const TimelineCOptions& opt = {});

double profit(const ScreeningMenu& menu, const ScreeningEnv& env);
// Virtual-surplus form of the A/B profit.
double virtual_surplus_profit(const ScreeningMenu& menu, const ScreeningEnv& env);

struct MenuAudit {
    double ic_gain = 0.0;         // largest gain from misreporting
    double ir_violation = 0.0;    // largest participation shortfall of a served type
    double exclusion_violation = 0.0;  // largest participation value of an excluded type
    bool pass(double tol) const { return ic_gain <= tol && ir_violation <= tol && exclusion_violation <= tol; }
};

// Closed-form reporting and participation utilities on the grid.
MenuAudit audit_menu(const ScreeningMenu& menu, const ScreeningEnv& env);

struct TimelineComparison {
    ScreeningMenu A, B, C;
    double grid_error = 0.0;
    bool ordered = false;
};

TimelineComparison compare_timelines(const ScreeningEnv& env, const TimelineCOptions& opt = {},
                                     double grid_error = 0.0);

}  // namespace newsmech
