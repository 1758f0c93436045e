#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "newsmech/app.hpp"
#include "newsmech/errors.hpp"

using namespace newsmech;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    auto p = fs::temp_directory_path() / ("newsmech_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "newsmech");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream sink;
    auto* old = std::cout.rdbuf(sink.rdbuf());
    int rc = cli_main(static_cast<int>(argv.size()), argv.data());
    std::cout.rdbuf(old);
    return rc;
}

const char* kScreening = R"(# small screening run
kind = screening
env.F.lo = 0
env.F.hi = 1
env.G.hi = 2
env.G.size = 21
env.alpha = 0.5
env.c = 1
grid_size = 51
)";

}  // namespace


TEST_CASE("config rejects unknown, duplicate and malformed entries") {
    CHECK_THROWS_AS(Config::parse("env.bogus = 1\n"), ValidationError);
    CHECK_THROWS_AS(Config::parse("env.c = 1\nenv.c = 2\n"), ValidationError);
    CHECK_THROWS_AS(Config::parse("env.c 1\n"), ValidationError);
    auto c = Config::parse("env.c = 1.5  # cost\nenv.F.kind = uniform\n\n# done\n");
    CHECK(c.num("env.c", 0.0) == 1.5);
    CHECK(c.str("env.F.kind", "") == "uniform");
    CHECK(c.num("env.alpha", 0.5) == 0.5);
    CHECK_THROWS_AS(Config::parse("env.c = abc\n").num("env.c", 0.0), ValidationError);
    CHECK_THROWS_AS(Config::parse("env.n = 2.5\n").integer("env.n", 0), ValidationError);
    CHECK(Config::parse("env.F.support = 0, 0.5,1\n").list("env.F.support") == std::vector<double>{0.0, 0.5, 1.0});
}

TEST_CASE("screening run reproduces the closed-form allocation and is deterministic") {
    auto cfg = Config::parse(kScreening);
    auto opt = options_from_config(cfg);
    opt.timeline = "A";
    auto a1 = run_scenario(cfg, opt);
    auto a2 = run_scenario(cfg, opt);
    CHECK(a1.result.dump() == a2.result.dump());
    CHECK(a1.tables == a2.tables);
    CHECK(a1.audit_pass);
    const auto& m = a1.result["screening"]["timelines"]["A"]["menu"];
    auto lam = m["lambda"].get<std::vector<double>>();
    auto q = m["q"].get<std::vector<double>>();
    for (std::size_t k = 0; k < lam.size(); ++k) CHECK(q[k] == doctest::Approx(std::pow(1 + lam[k], -4)).epsilon(5e-3));
    CHECK(a1.tables.count("screening_A.csv") == 1);
    CHECK(a1.tables["screening_A.csv"].rfind("lambda,q,t\n", 0) == 0);
}

TEST_CASE("audit replays stored mechanisms and catches tampering") {
    auto cfg = Config::parse(kScreening);
    auto art = run_scenario(cfg, options_from_config(cfg));
    auto verdict = audit_result(art.result);
    CHECK(verdict["pass"].get<bool>());
    CHECK(verdict.dump() == audit_result(art.result).dump());
    auto tampered = art.result;
    tampered["screening"]["timelines"]["B"]["menu"]["t"][5] = tampered["screening"]["timelines"]["B"]["menu"]["t"][5].get<double>() + 0.1;
    CHECK_FALSE(audit_result(tampered)["pass"].get<bool>());
    auto wrong = art.result;
    wrong["schema"] = "other/9";
    CHECK_THROWS_AS(audit_result(wrong), ValidationError);
}

TEST_CASE("auction run, sweep and simulate pass their audits") {
    auto auc = Config::parse("kind = auction\nenv.F.lo = 1\nenv.F.hi = 2\ngrid_size = 41\n");
    auto art = run_scenario(auc, options_from_config(auc));
    CHECK(art.audit_pass);
    CHECK(audit_result(art.result)["pass"].get<bool>());
    auto sw = sweep_scenario(auc, options_from_config(auc));
    CHECK(sw.result["sweep"]["rows"].size() == 11);
    CHECK(sw.tables.count("sweep.csv") == 1);
    auto sim = Config::parse("kind = simulate\nsimulate.count = 50\nseed = 3\n");
    auto s = run_scenario(sim, options_from_config(sim));
    CHECK(s.audit_pass);
    CHECK(audit_result(s.result)["pass"].get<bool>());
    auto pg = Config::parse("kind = public-good\nenv.n = 3\nenv.c_tilde = 0.4\nspec.lambda_g = 4\n");
    auto p = run_scenario(pg, options_from_config(pg));
    CHECK(audit_result(p.result)["pass"].get<bool>());
}

TEST_CASE("command line: exit codes and no partial outputs") {
    auto dir = scratch_dir("cli");
    std::ofstream(dir / "bad.cfg") << "kind = screening\nenv.c = oops\n";
    CHECK(run_cli({"run", (dir / "bad.cfg").string(), "--out-dir", (dir / "bad_out").string()}) == 1);
    CHECK_FALSE(fs::exists(dir / "bad_out"));
    std::ofstream(dir / "lam.cfg") << "kind = auction\nspec.lambda_g = 3\n";
    CHECK(run_cli({"run", (dir / "lam.cfg").string(), "--out-dir", (dir / "lam_out").string()}) == 2);
    CHECK_FALSE(fs::exists(dir / "lam_out"));
    std::ofstream(dir / "ok.cfg") << kScreening;
    auto out = dir / "ok_out";
    CHECK(run_cli({"run", (dir / "ok.cfg").string(), "--timeline", "B", "--out-dir", out.string()}) == 0);
    CHECK(fs::exists(out / "result.json"));
    CHECK(fs::exists(out / "screening_B.csv"));
    CHECK(run_cli({"audit", (out / "result.json").string(), "--out-dir", (dir / "v1").string()}) == 0);
    CHECK(run_cli({"audit", (out / "result.json").string(), "--out-dir", (dir / "v2").string()}) == 0);
    CHECK(slurp(dir / "v1" / "audit.json") == slurp(dir / "v2" / "audit.json"));
    std::ofstream(dir / "junk.json") << "{\"schema\": \"nope\"}";
    CHECK(run_cli({"audit", (dir / "junk.json").string(), "--out-dir", (dir / "v3").string()}) == 1);
    CHECK(run_cli({"run", (dir / "ok.cfg").string(), "--timeline", "Z"}) == 1);
    fs::remove_all(dir);
}
