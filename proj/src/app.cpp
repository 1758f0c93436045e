#include "newsmech/app.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "newsmech/agent_oracle.hpp"
#include "newsmech/auction.hpp"
#include "newsmech/errors.hpp"
#include "newsmech/parallel.hpp"
#include "newsmech/public_goods.hpp"
#include "newsmech/screening.hpp"

namespace newsmech {

using json = nlohmann::ordered_json;

namespace {

const std::set<std::string> kKnownKeys = {
    "kind",           "grid_size",      "tolerance",      "seed",           "timeline",
    "env.F.kind",     "env.F.lo",       "env.F.hi",       "env.F.slope",    "env.F.size",
    "env.F.support",  "env.F.probs",    "env.G.hi",       "env.G.slope",    "env.G.size",
    "env.alpha",      "env.c",          "env.n",          "env.cost",       "env.c_tilde",
    "spec.mu_g",      "spec.lambda_g",  "spec.mu_m",      "spec.lambda_m",  "auction.c_domain",
    "auction.realizable", "auction.spread_ratio", "sweep.x_from", "sweep.x_to", "sweep.x_step",
    "sweep.mu_m",     "sweep.n_from",   "sweep.n_to",     "simulate.count", "simulate.classical",
    "simulate.tie_break",
};

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& cols) {
    std::string out;
    for (std::size_t j = 0; j < header.size(); ++j) out += (j ? "," : "") + header[j];
    out += "\n";
    std::size_t rows = cols.empty() ? 0 : cols[0].size();
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) out += (j ? "," : "") + fmt_num(cols[j][i]);
        out += "\n";
    }
    return out;
}

std::vector<Timeline> timelines(const RunOptions& opt) {
    if (opt.timeline == "all") return {Timeline::A, Timeline::B, Timeline::C};
    Timeline t = timeline_from_string(opt.timeline);
    if (t == Timeline::D) throw ValidationError("timeline D is solved by the timeline C solver; pass C");
    return {t};
}

DensityGrid type_grid(const Config& c, int n) {
    std::string kind = c.str("env.F.kind", "uniform");
    double lo = c.num("env.F.lo", 0.0), hi = c.num("env.F.hi", 1.0);
    if (kind == "uniform") return DensityGrid::uniform(lo, hi, n);
    if (kind == "linear") return DensityGrid::linear(lo, hi, n, c.num("env.F.slope", 0.0));
    throw ValidationError("env.F.kind: expected uniform or linear for a density, got '" + kind + "'");
}

DiscreteDistribution type_distribution(const Config& c, int n) {
    if (c.str("env.F.kind", "uniform") == "discrete") return DiscreteDistribution(c.list("env.F.support"), c.list("env.F.probs"));
    return type_grid(c, n).to_distribution();
}

GainLossSpec spec_from(const Config& c) {
    GainLossSpec s{c.num("spec.mu_g", 1.0), c.num("spec.mu_m", 0.5), c.num("spec.lambda_g", 1.2),
                   c.num("spec.lambda_m", 2.0)};
    s.validate();
    return s;
}

json dist_json(const DiscreteDistribution& d) { return {{"support", d.support()}, {"probs", d.probs()}}; }

DiscreteDistribution dist_from(const json& j) {
    return DiscreteDistribution(j.at("support").get<std::vector<double>>(), j.at("probs").get<std::vector<double>>());
}

json audit_json(const AuditReport& r, double tol) {
    return {{"max_gain", r.max_gain},
            {"max_ir_shortfall", r.max_ir_shortfall},
            {"witness_type", r.witness_type},
            {"witness_report", r.witness_report},
            {"pass", r.pass(tol)}};
}

Config config_from(const json& result) {
    Config c;
    for (auto& [k, v] : result.at("config").items()) c.set(k, v.get<std::string>());
    return c;
}

// ---- screening

ScreeningEnv screening_env(const Config& c, const RunOptions& opt) {
    auto F = type_distribution(c, opt.grid_size);
    double hi = c.num("env.G.hi", 2.0), slope = c.num("env.G.slope", 0.0);
    int n = c.integer("env.G.size", opt.grid_size);
    auto G = slope == 0.0 ? DensityGrid::uniform(1.0, hi, n) : DensityGrid::linear(1.0, hi, n, slope);
    return ScreeningEnv(F, G, c.num("env.alpha", 0.5), c.num("env.c", 1.0));
}

json menu_json(const ScreeningMenu& m) {
    return {{"timeline", to_string(m.timeline)}, {"lambda", m.lambda_grid}, {"q", m.q},           {"t", m.t},
            {"f", m.f},                          {"served", m.served},      {"threshold", m.threshold}, {"profit", m.profit}};
}

ScreeningMenu menu_from(const json& j) {
    ScreeningMenu m;
    m.timeline = timeline_from_string(j.at("timeline").get<std::string>());
    m.lambda_grid = j.at("lambda").get<std::vector<double>>();
    m.q = j.at("q").get<std::vector<double>>();
    m.t = j.at("t").get<std::vector<double>>();
    m.f = j.at("f").get<double>();
    m.served = j.at("served").get<int>();
    m.threshold = j.at("threshold").get<double>();
    m.profit = j.at("profit").get<double>();
    if (m.q.size() != m.lambda_grid.size() || m.t.size() != m.lambda_grid.size() || m.served < 0 ||
        m.served > static_cast<int>(m.q.size()))
        throw ValidationError("stored menu has inconsistent lengths");
    return m;
}

void run_screening(const Config& c, const RunOptions& opt, Artifacts& art) {
    auto env = screening_env(c, opt);
    TimelineCOptions copt;
    copt.threads = default_thread_count();
    json menus = json::object();
    std::map<Timeline, double> profits;
    for (auto tl : timelines(opt)) {
        auto m = tl == Timeline::C ? solve_timeline_C(env, copt) : solve_pointwise(tl, env);
        auto a = audit_screening_menu(m, env);
        art.audit_pass = art.audit_pass && a.pass(opt.tol);
        profits[tl] = m.profit;
        menus[to_string(tl)] = {{"menu", menu_json(m)}, {"audit", audit_json(a, opt.tol)}};
        art.tables[std::string("screening_") + to_string(tl) + ".csv"] = csv({"lambda", "q", "t"}, {m.lambda_grid, m.q, m.t});
    }
    art.result["screening"] = {{"m", env.m}, {"M", env.M}, {"timelines", menus}};
    if (profits.size() == 3) {
        double tol = 1e-6 * std::max(1.0, std::abs(profits[Timeline::A]));
        bool ordered = profits[Timeline::A] >= profits[Timeline::B] - tol && profits[Timeline::B] >= profits[Timeline::C] - tol;
        art.result["screening"]["ordered"] = ordered;
    }
}

json audit_screening(const json& result) {
    auto c = config_from(result);
    auto opt = options_from_config(c);
    auto env = screening_env(c, opt);
    json checks = json::array();
    for (auto& [name, entry] : result.at("screening").at("timelines").items()) {
        auto m = menu_from(entry.at("menu"));
        auto a = audit_screening_menu(m, env);
        checks.push_back({{"name", "screening_" + name}, {"audit", audit_json(a, opt.tol)}});
    }
    return checks;
}

// ---- auction

AuctionEnv auction_env(const Config& c, const RunOptions& opt) {
    return AuctionEnv(c.integer("env.n", 2), type_grid(c, opt.grid_size), spec_from(c));
}

AuctionOptions auction_options(const Config& c) {
    AuctionOptions o;
    std::string dom = c.str("auction.c_domain", "full_support");
    if (dom == "full_support")
        o.domain = SubsidyDomain::full_support;
    else if (dom == "served_only")
        o.domain = SubsidyDomain::served_only;
    else
        throw ValidationError("auction.c_domain: expected full_support or served_only");
    o.realizable = c.flag("auction.realizable", true);
    o.spread_ratio = c.num("auction.spread_ratio", 0.99);
    if (!(o.spread_ratio > 0.0 && o.spread_ratio < 1.0)) throw ValidationError("auction.spread_ratio must lie in (0,1)");
    o.threads = default_thread_count();
    return o;
}

json solution_json(const AuctionSolution& s) {
    json tr = json::array();
    for (const auto& d : s.transfers) tr.push_back(dist_json(d));
    json j = {{"timeline", to_string(s.timeline)},
              {"theta", s.theta},
              {"Q", s.Q},
              {"W", s.W},
              {"upsilon", s.upsilon},
              {"T", s.T},
              {"omega", s.omega},
              {"threshold", s.theta[s.threshold]},
              {"threshold_index", s.threshold},
              {"revenue", s.revenue},
              {"transfers", tr}};
    if (s.timeline == Timeline::C) {
        j["c"] = s.c;
        j["friction"] = s.friction;
        j["all_pay"] = s.all_pay;
    }
    return j;
}

void run_auction(const Config& c, const RunOptions& opt, Artifacts& art) {
    auto env = auction_env(c, opt);
    auto aopt = auction_options(c);
    json sols = json::object();
    for (auto tl : timelines(opt)) {
        auto s = tl == Timeline::C ? solve_auction_C(env, aopt) : solve_auction(tl, env);
        auto a = best_response_audit(*as_mechanism(s, env), tl, env.spec);
        art.audit_pass = art.audit_pass && a.pass(opt.tol);
        sols[to_string(tl)] = {{"solution", solution_json(s)}, {"audit", audit_json(a, opt.tol)}};
        art.tables[std::string("auction_") + to_string(tl) + ".csv"] =
            csv({"theta", "Q", "W", "upsilon", "omega"}, {s.theta, s.Q, s.W, s.upsilon, s.omega});
    }
    art.result["auction"] = {{"x", env.x()}, {"timelines", sols}};
}

json audit_auction(const json& result) {
    auto c = config_from(result);
    auto opt = options_from_config(c);
    auto env = auction_env(c, opt);
    json checks = json::array();
    for (auto& [name, entry] : result.at("auction").at("timelines").items()) {
        const auto& s = entry.at("solution");
        std::vector<DiscreteDistribution> tr;
        for (const auto& d : s.at("transfers")) tr.push_back(dist_from(d));
        SymmetricMechanism mech(env.n, env.F.to_distribution(), s.at("Q").get<std::vector<double>>(), tr);
        auto a = best_response_audit(mech, timeline_from_string(name), env.spec);
        checks.push_back({{"name", "auction_" + name}, {"audit", audit_json(a, opt.tol)}});
    }
    return checks;
}

std::vector<double> sweep_points(const Config& c) {
    double from = c.num("sweep.x_from", 1.0), to = c.num("sweep.x_to", 2.0), step = c.num("sweep.x_step", 0.1);
    if (!(step > 0.0) || !(to >= from)) throw ValidationError("sweep needs x_from <= x_to and a positive x_step");
    int count = static_cast<int>(std::floor((to - from) / step + 1e-9)) + 1;
    std::vector<double> xs;
    for (int i = 0; i < count; ++i) xs.push_back(from + i * step);
    return xs;
}

json sweep_auction(const Config& c, const RunOptions& opt, Artifacts& art) {
    auto env = auction_env(c, opt);
    auto rep = revenue_compare(env, sweep_points(c), c.num("sweep.mu_m", 0.5), auction_options(c));
    json rows = json::array();
    std::vector<double> x, a, cc, allpay;
    for (const auto& r : rep.rows) {
        rows.push_back({{"x", r.x}, {"rev_A", r.rev_A}, {"rev_C", r.rev_C}, {"c_all_pay", r.c_all_pay}});
        x.push_back(r.x);
        a.push_back(r.rev_A);
        cc.push_back(r.rev_C);
        allpay.push_back(r.c_all_pay ? 1.0 : 0.0);
    }
    art.tables["sweep.csv"] = csv({"x", "rev_A", "rev_C", "c_all_pay"}, {x, a, cc, allpay});
    json j = {{"rows", rows}, {"sign_changes", rep.sign_changes}};
    j["crossing"] = rep.sign_changes > 0 ? json(rep.crossing) : json(nullptr);
    return j;
}

// ---- public good

PublicGoodEnv public_good_env(const Config& c, int n) {
    auto F = type_distribution(c, c.integer("env.F.size", 11));
    double mu = c.num("spec.mu_g", 1.0);
    double Lambda = mu * (c.num("spec.lambda_g", 2.0) - 1.0);
    if (c.has("env.cost") == c.has("env.c_tilde")) throw ValidationError("public good needs exactly one of env.cost, env.c_tilde");
    double cost = c.has("env.cost") ? c.num("env.cost", 0.0) : c.num("env.c_tilde", 0.0) * (1.0 + mu);
    return PublicGoodEnv(n, F, mu, Lambda, cost);
}

json verdict_json(const IcVerdict& v) {
    json j = {{"ic", v.ic}, {"bound_ic", v.bound_ic}};
    j["witness"] = v.witness ? json(*v.witness) : json(nullptr);
    return j;
}

void run_public_good(const Config& c, const RunOptions& opt, Artifacts& art) {
    auto env = public_good_env(c, c.integer("env.n", 3));
    json v = json::object();
    for (auto tl : timelines(opt)) v[to_string(tl)] = verdict_json(ic_condition(tl, env));
    const auto& th = env.F.support();
    std::vector<double> Q, WA, WB, WC;
    for (double t : th) {
        Q.push_back(interim_probability(t, env));
        WA.push_back(perceived_value_of_provision(Timeline::A, Q.back(), env));
        WB.push_back(perceived_value_of_provision(Timeline::B, Q.back(), env));
        WC.push_back(perceived_value_of_provision(Timeline::C, Q.back(), env));
    }
    art.tables["public_good.csv"] = csv({"theta", "Q", "W_A", "W_B", "W_C"}, {th, Q, WA, WB, WC});
    art.result["public_good"] = {{"n", env.n}, {"c_tilde", env.c_tilde()}, {"interesting", env.interesting()}, {"verdicts", v}};
}

json sweep_public_good(const Config& c, Artifacts& art) {
    auto env = public_good_env(c, 1);
    double ct = env.c_tilde();
    int from = c.integer("sweep.n_from", 1), to = c.integer("sweep.n_to", 20);
    if (from < 1 || to < from) throw ValidationError("sweep needs 1 <= n_from <= n_to");
    auto scan = min_population_for_ic(env.F, env.mu_g, env.Lambda_g, [ct](int) { return ct; }, from, to);
    std::vector<double> n, ic;
    for (int k = from; k <= to; ++k) {
        n.push_back(k);
        ic.push_back(scan.ic_flags[k - from]);
    }
    art.tables["population.csv"] = csv({"n", "ic"}, {n, ic});
    json j = {{"ic_flags", scan.ic_flags}, {"monotone", scan.monotone}};
    j["first_ic"] = scan.first_ic ? json(*scan.first_ic) : json(nullptr);
    return j;
}

// ---- simulate

struct SimulationTable {
    std::vector<std::array<Decision, 4>> decisions;  // A, B, C, D
    int prop1_ok = 0;
    int classical_ok = 0;
};

SimulationTable simulate_suite(const Config& c, const RunOptions& opt) {
    int count = c.integer("simulate.count", 1000);
    if (count < 1) throw ValidationError("simulate.count must be positive");
    bool classical = c.flag("simulate.classical", false);
    // Exact ties in the choice stage go to the earliest menu entry; no other rule is implemented.
    if (c.str("simulate.tie_break", "lowest_index") != "lowest_index")
        throw ValidationError("simulate.tie_break: only lowest_index is supported");
    std::mt19937_64 rng(opt.seed);
    SimulationTable tab;
    for (int i = 0; i < count; ++i) {
        auto p = random_menu_problem(rng, classical);
        std::array<Decision, 4> d;
        for (int t = 0; t < 4; ++t) {
            p.timeline = static_cast<Timeline>(t);
            d[t] = simulate(p);
        }
        tab.decisions.push_back(d);
        if (verify_prop1(p).ok()) ++tab.prop1_ok;
        if (d[0] == d[1] && d[1] == d[2] && d[2] == d[3]) ++tab.classical_ok;
    }
    return tab;
}

json decisions_json(const SimulationTable& tab) {
    json rows = json::array();
    for (const auto& d : tab.decisions) {
        json r = json::array();
        for (const auto& x : d) r.push_back({x.accept, x.index});
        rows.push_back(r);
    }
    return rows;
}

void run_simulate(const Config& c, const RunOptions& opt, Artifacts& art) {
    auto tab = simulate_suite(c, opt);
    int n = static_cast<int>(tab.decisions.size());
    bool classical = c.flag("simulate.classical", false);
    art.audit_pass = tab.prop1_ok == n && (!classical || tab.classical_ok == n);
    std::vector<std::vector<double>> cols(9);
    for (int i = 0; i < n; ++i) {
        cols[0].push_back(i);
        for (int t = 0; t < 4; ++t) {
            cols[1 + 2 * t].push_back(tab.decisions[i][t].accept ? 1.0 : 0.0);
            cols[2 + 2 * t].push_back(tab.decisions[i][t].index);
        }
    }
    art.tables["simulate.csv"] = csv({"problem", "accept_A", "index_A", "accept_B", "index_B", "accept_C", "index_C",
                                      "accept_D", "index_D"},
                                     cols);
    art.result["simulate"] = {{"count", n},
                              {"prop1_agree", tab.prop1_ok},
                              {"all_timelines_agree", tab.classical_ok},
                              {"decisions", decisions_json(tab)}};
}

json audit_simulate(const json& result) {
    auto c = config_from(result);
    auto tab = simulate_suite(c, options_from_config(c));
    bool same = decisions_json(tab) == result.at("simulate").at("decisions");
    int n = static_cast<int>(tab.decisions.size());
    return json::array({{{"name", "simulate_replay"}, {"pass", same}},
                        {{"name", "simulate_prop1"}, {"pass", tab.prop1_ok == n}}});
}

json base_result(const std::string& kind, const Config& cfg, const RunOptions& opt) {
    // The stored config is self-contained: effective options are written back as keys.
    Config eff = cfg;
    eff.set("grid_size", std::to_string(opt.grid_size));
    eff.set("tolerance", fmt_num(opt.tol));
    eff.set("seed", std::to_string(opt.seed));
    eff.set("timeline", opt.timeline);
    json conf = json::object();
    for (const auto& [k, v] : eff.entries()) conf[k] = v;
    return {{"schema", kResultSchema}, {"status", "ok"}, {"kind", kind}, {"config", conf}};
}

}  // namespace

Config Config::parse(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (!kKnownKeys.count(key)) throw ValidationError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (c.has(key)) throw ValidationError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        c.kv_[key] = value;
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string Config::str(const std::string& key, const std::string& fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double Config::num(const std::string& key, double fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(it->second, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != it->second.size() || !std::isfinite(v))
        throw ValidationError(key + ": expected a finite number, got '" + it->second + "'");
    return v;
}

int Config::integer(const std::string& key, int fallback) const {
    double v = num(key, fallback);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw ValidationError(key + ": expected an integer");
    return static_cast<int>(v);
}

bool Config::flag(const std::string& key, bool fallback) const {
    std::string v = str(key, fallback ? "true" : "false");
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ValidationError(key + ": expected true or false");
}

std::vector<double> Config::list(const std::string& key) const {
    if (!has(key)) throw ValidationError(key + ": required");
    std::vector<double> out;
    std::stringstream ss(str(key, ""));
    std::string item;
    Config tmp;
    while (std::getline(ss, item, ',')) {
        tmp.kv_[key] = trim(item);
        out.push_back(tmp.num(key, 0.0));
    }
    return out;
}

RunOptions options_from_config(const Config& cfg) {
    RunOptions o;
    o.grid_size = cfg.integer("grid_size", o.grid_size);
    o.tol = cfg.num("tolerance", o.tol);
    double seed = cfg.num("seed", 0.0);
    if (seed < 0 || seed != std::floor(seed)) throw ValidationError("seed must be a nonnegative integer");
    o.seed = static_cast<std::uint64_t>(seed);
    o.timeline = cfg.str("timeline", o.timeline);
    if (o.grid_size < 2) throw ValidationError("grid_size must be at least 2");
    if (!(o.tol > 0.0)) throw ValidationError("tolerance must be positive");
    return o;
}

Artifacts run_scenario(const Config& cfg, const RunOptions& opt) {
    std::string kind = cfg.str("kind", "");
    Artifacts art;
    art.result = base_result(kind, cfg, opt);
    if (kind == "screening")
        run_screening(cfg, opt, art);
    else if (kind == "auction")
        run_auction(cfg, opt, art);
    else if (kind == "public-good")
        run_public_good(cfg, opt, art);
    else if (kind == "simulate")
        run_simulate(cfg, opt, art);
    else
        throw ValidationError("kind: expected screening, auction, public-good or simulate, got '" + kind + "'");
    art.result["audit_pass"] = art.audit_pass;
    return art;
}

Artifacts sweep_scenario(const Config& cfg, const RunOptions& opt) {
    std::string kind = cfg.str("kind", "");
    Artifacts art;
    art.result = base_result(kind, cfg, opt);
    if (kind == "auction")
        art.result["sweep"] = sweep_auction(cfg, opt, art);
    else if (kind == "public-good")
        art.result["sweep"] = sweep_public_good(cfg, art);
    else if (kind == "screening" || kind == "simulate")
        return run_scenario(cfg, [&] {
            RunOptions o = opt;
            if (kind == "screening") o.timeline = "all";
            return o;
        }());
    else
        throw ValidationError("kind: expected screening, auction, public-good or simulate, got '" + kind + "'");
    art.result["audit_pass"] = art.audit_pass;
    return art;
}

json audit_result(const json& result) {
    if (!result.is_object() || result.value("schema", "") != kResultSchema)
        throw ValidationError(std::string("schema mismatch: expected ") + kResultSchema);
    std::string kind = result.value("kind", "");
    json checks;
    try {
        if (result.contains("sweep"))
            checks = json::array();
        else if (kind == "screening")
            checks = audit_screening(result);
        else if (kind == "auction")
            checks = audit_auction(result);
        else if (kind == "simulate")
            checks = audit_simulate(result);
        else if (kind == "public-good") {
            auto c = config_from(result);
            auto env = public_good_env(c, c.integer("env.n", 3));
            checks = json::array();
            for (auto& [name, v] : result.at("public_good").at("verdicts").items()) {
                bool same = verdict_json(ic_condition(timeline_from_string(name), env)) == v;
                checks.push_back({{"name", "public_good_" + name}, {"pass", same}});
            }
        } else
            throw ValidationError("schema mismatch: unknown kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw ValidationError(std::string("schema mismatch: ") + e.what());
    }
    bool pass = true;
    for (auto& ch : checks) {
        if (!ch.contains("pass")) ch["pass"] = ch.at("audit").at("pass");
        pass = pass && ch.at("pass").get<bool>();
    }
    return {{"schema", kAuditSchema}, {"kind", kind}, {"pass", pass}, {"checks", checks}};
}

namespace {

json error_json(const std::string& code, const std::string& msg, int exit_code) {
    return {{"schema", kResultSchema},
            {"status", "error"},
            {"error", {{"code", code}, {"message", msg}, {"exit_code", exit_code}}}};
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
    if (!out) throw ResourceError("cannot write '" + p.string() + "'");
}

}  // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"News-utility mechanism design solver"};
    app.require_subcommand(1);
    std::string path, out_dir = ".", timeline;
    int grid_size = 0;
    double tol = 0.0;
    std::uint64_t seed = 0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--grid-size", grid_size, "grid points (default 201)");
        sub->add_option("--tol", tol, "audit tolerance (default 1e-8)");
        sub->add_option("--seed", seed, "random seed");
        sub->add_option("--timeline", timeline, "A, B, C or all")->check(CLI::IsMember({"A", "B", "C", "all"}));
        sub->add_option("--out-dir", out_dir, "output directory");
    };
    auto* run = app.add_subcommand("run", "solve one scenario");
    auto* sweep = app.add_subcommand("sweep", "solve a parameter sweep");
    auto* audit = app.add_subcommand("audit", "replay oracle audits on a result document");
    for (auto* s : {run, sweep}) {
        s->add_option("config", path, "scenario config")->required();
        add_common(s);
    }
    audit->add_option("result", path, "result document")->required();
    audit->add_option("--out-dir", out_dir, "where to write audit.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cout << error_json("usage", e.what(), 1).dump(2) << "\n";
        return 1;
    }

    try {
        namespace fs = std::filesystem;
        if (*audit) {
            std::ifstream in(path);
            if (!in) throw ValidationError("cannot read result '" + path + "'");
            json doc;
            try {
                doc = json::parse(in);
            } catch (const json::exception& e) {
                throw ValidationError(std::string("schema mismatch: ") + e.what());
            }
            json verdict = audit_result(doc);
            std::string text = verdict.dump(2) + "\n";
            fs::create_directories(out_dir);
            write_file(fs::path(out_dir) / "audit.json", text);
            std::cout << text;
            return verdict.at("pass").get<bool>() ? 0 : kAuditFailureExit;
        }
        Config cfg = Config::load(path);
        RunOptions opt = options_from_config(cfg);
        if (grid_size) opt.grid_size = grid_size;
        if (tol > 0.0) opt.tol = tol;
        if (sweep->count("--seed") || run->count("--seed")) opt.seed = seed;
        if (!timeline.empty()) opt.timeline = timeline;
        if (opt.grid_size < 2) throw ValidationError("--grid-size must be at least 2");
        Artifacts art = *run ? run_scenario(cfg, opt) : sweep_scenario(cfg, opt);
        fs::create_directories(out_dir);
        write_file(fs::path(out_dir) / "result.json", art.result.dump(2) + "\n");
        for (const auto& [name, text] : art.tables) write_file(fs::path(out_dir) / name, text);
        std::cout << json({{"status", "ok"}, {"kind", art.result["kind"]}, {"audit_pass", art.audit_pass}}).dump() << "\n";
        return art.audit_pass ? 0 : kAuditFailureExit;
    } catch (const NonConvergence& e) {
        auto j = error_json(e.code(), e.what(), e.exit_code());
        j["error"]["gap"] = e.gap();
        std::cout << j.dump(2) << "\n";
        return e.exit_code();
    } catch (const Error& e) {
        std::cout << error_json(e.code(), e.what(), e.exit_code()).dump(2) << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cout << error_json("validation", e.what(), 1).dump(2) << "\n";
        return 1;
    }
}

}  // namespace newsmech
