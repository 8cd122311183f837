// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criterion 10 needs a real AS-relationship snapshot (path in
// BGPIMPACT_CAIDA_AS_REL) and is skipped, not failed, without one.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "bgpimpact/evalkit.hpp"
#include "bgpimpact/ingest.hpp"
#include "bgpimpact/rng.hpp"
#include "bgpimpact/theory.hpp"

using namespace bgpimpact;

namespace {

constexpr double kPi = 3.14159265358979323846;

unsigned jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Outcome {
    bool pass = true;
    bool skip = false;
    std::string detail;
};

std::vector<EvalReport> g_reports;  // everything emitted by criteria 2-8

double pct(double x) { return 100.0 * x; }

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

bool within_relative(double value, double target, double tolerance) {
    return std::abs(value - target) <= tolerance * std::abs(target);
}

// Shared Type-0 pool on a 20000-AS synthetic topology. The graph is large so
// that sampling up to 10^4 monitors without replacement stays close to the
// independent-trials setting of the closed forms.
struct Type0Pool {
    AsGraph graph;
    std::vector<RoutingOutcome> outcomes;
    theory::ImpactSamples samples;
};

const Type0Pool& type0_pool() {
    static Type0Pool pool = [] {
        Type0Pool p;
        p.graph = gen_synthetic_topology(20000, 42);
        ScenarioGenConfig gen;
        gen.count = 1000;
        gen.seed = 20240;
        p.outcomes = batch_simulate(p.graph, generate_scenarios(p.graph, gen), jobs(), false);
        std::vector<double> impacts;
        for (const RoutingOutcome& o : p.outcomes) impacts.push_back(o.impact);
        p.samples = theory::make_samples(std::move(impacts), "type-0");
        return p;
    }();
    return pool;
}

void emit_report(const char* estimator, const char* monitor_set, std::size_t m,
                 const std::vector<double>& estimates, const std::vector<double>& truths) {
    EvalReport r = evaluate(estimates, truths);
    r.estimator = estimator;
    r.monitor_set = monitor_set;
    r.m = m;
    g_reports.push_back(std::move(r));
}

// Monte Carlo estimate of E_I[RMSE(I)]: per scenario, RMSE over `redraws`
// independent monitor draws, averaged over scenarios. This matches the form
// of the closed-form curves, which integrate the per-impact RMSE over f(I).
struct McStats {
    double mean_rmse = 0.0;
    double mean_bias = 0.0;
};

McStats nie_monte_carlo(const Type0Pool& pool, std::size_t m, int redraws, double fixed_p,
                        std::uint32_t n_ip, std::uint64_t seed, const char* report_label) {
    std::vector<double> flat_est, flat_truth;
    double rmse_sum = 0.0, bias_sum = 0.0;
    for (std::size_t j = 0; j < pool.outcomes.size(); ++j) {
        const RoutingOutcome& out = pool.outcomes[j];
        double sq = 0.0;
        for (int r = 0; r < redraws; ++r) {
            std::uint64_t draw_seed = derive_seed(seed, j, std::uint64_t(r));
            MonitorSet monitors = sample_random_monitors(pool.graph, m, draw_seed);
            double est;
            if (n_ip > 0) {
                PingModel model = fixed_p >= 0.0
                                      ? PingModel::with_fixed_p(fixed_p, draw_seed + 1, n_ip)
                                      : PingModel{};
                if (fixed_p < 0.0) {
                    model.n_ip = n_ip;
                    model.seed = draw_seed + 1;
                }
                est = nie(observe_ping(pool.graph, out, monitors, model)).value;
            } else {
                est = nie(observe_control_plane(pool.graph, out, monitors)).value;
            }
            double err = est - out.impact;
            sq += err * err;
            bias_sum += err;
            flat_est.push_back(est);
            flat_truth.push_back(out.impact);
        }
        rmse_sum += std::sqrt(sq / double(redraws));
    }
    emit_report(n_ip > 0 ? "ping-ie" : "nie", report_label, m, flat_est, flat_truth);
    McStats stats;
    stats.mean_rmse = rmse_sum / double(pool.outcomes.size());
    stats.mean_bias = bias_sum / double(pool.outcomes.size() * std::size_t(redraws));
    return stats;
}

// ---------------- criteria ----------------

Outcome criterion_1() {
    theory::ImpactSamples u = theory::uniform_samples(100000, 7);
    double value = theory::c_i(u);
    Outcome o;
    o.pass = std::abs(value - kPi / 8.0) <= 0.005;
    o.detail = fmt("c_I(uniform, 1e5) = %.5f vs pi/8 = %.5f (tolerance 0.005)", value,
                   kPi / 8.0);
    return o;
}

Outcome criterion_2() {
    const Type0Pool& pool = type0_pool();
    Outcome o;
    std::string parts;
    for (std::size_t m : {10ul, 100ul, 1000ul}) {
        McStats mc = nie_monte_carlo(pool, m, 16, -1.0, 0, 0xC2, "random");
        double predicted = theory::rmse_nie_random(m, pool.samples);
        bool ok = within_relative(mc.mean_rmse, predicted, 0.10);
        o.pass = o.pass && ok;
        parts += fmt(" M=%zu: %.4f vs %.4f (%+.1f%%)%s", m, mc.mean_rmse, predicted,
                     pct(mc.mean_rmse / predicted - 1.0), ok ? "" : " OUT");
    }
    o.detail = "NIE RMSE vs closed-form curve, 1000 scenarios x16 draws:" + parts;
    return o;
}

Outcome criterion_3() {
    AsGraph graph = gen_synthetic_topology(2000, 5);
    ScenarioGenConfig gen;
    gen.count = 400;
    gen.seed = 33;
    gen.symmetric_pairs = true;
    std::vector<RoutingOutcome> outcomes =
        batch_simulate(graph, generate_scenarios(graph, gen), jobs(), false);
    MonitorSet monitors = sample_random_monitors(graph, 100, 8);
    double err_sum = 0.0;
    std::size_t warnings = 0;
    for (const RoutingOutcome& out : outcomes) {
        MeasurementVector mv = observe_control_plane(graph, out, monitors);
        warnings += mv.unreachable_warnings;
        err_sum += nie(mv).value - out.impact;
    }
    double mean_err = err_sum / double(outcomes.size());
    Outcome o;
    o.pass = std::abs(mean_err) <= 1e-12 && warnings == 0;
    o.detail = fmt("mean NIE error over %zu pair-symmetric scenarios = %.2e (limit 1e-12, "
                   "%zu unreachable warnings)",
                   outcomes.size(), mean_err, warnings);
    return o;
}

Outcome criterion_4() {
    const Type0Pool& pool = type0_pool();
    Outcome o;
    std::string parts;
    for (double p : {0.05, 0.2}) {
        for (std::size_t m : {50ul, 500ul}) {
            McStats mc = nie_monte_carlo(pool, m, 16, p, 1, 0xC4, "random");
            double bias_predicted = theory::bias_with_failures(p, pool.samples);
            double rmse_predicted = theory::rmse_with_failures(m, p, pool.samples);
            bool ok = within_relative(mc.mean_bias, bias_predicted, 0.10) &&
                      within_relative(mc.mean_rmse, rmse_predicted, 0.10);
            o.pass = o.pass && ok;
            parts += fmt(" (p=%.2f,M=%zu): bias %.4f/%.4f rmse %.4f/%.4f%s", p, m,
                         mc.mean_bias, bias_predicted, mc.mean_rmse, rmse_predicted,
                         ok ? "" : " OUT");
        }
    }
    o.detail = "ping-failure Monte Carlo vs closed forms (measured/predicted):" + parts;
    return o;
}

Outcome criterion_5() {
    const Type0Pool& pool = type0_pool();
    Outcome o;
    double mean_impact = 0.0;
    for (double v : pool.samples.values) mean_impact += v;
    mean_impact /= double(pool.samples.values.size());

    struct Case {
        std::uint32_t n_ip;
        double target;
        double tolerance;
    };
    std::string parts;
    for (const Case& c : {Case{1, 0.064, 0.15}, Case{3, 0.010, 0.25}}) {
        McStats mc = nie_monte_carlo(pool, 10000, 4, -1.0, c.n_ip, 0xC5 + c.n_ip, "random");
        bool ok = within_relative(mc.mean_rmse, c.target, c.tolerance);
        o.pass = o.pass && ok;
        parts += fmt(" N_IP=%u: %.4f vs %.3f (+-%.0f%%)%s", c.n_ip, mc.mean_rmse, c.target,
                     pct(c.tolerance), ok ? "" : " OUT");
    }
    o.detail = fmt("Ping-IE at M=10^4, E[I]=%.3f:", mean_impact) + parts;
    return o;
}

Outcome criterion_6() {
    Rng rng(606);
    std::size_t cases = 0, mismatches = 0;
    for (int round = 0; round < 200; ++round) {
        // random acyclic hierarchy of 2..10 nodes plus extra edges
        std::uint32_t n = 2 + std::uint32_t(uniform_index(rng, 9));
        std::vector<Edge> edges;
        std::set<std::pair<AsId, AsId>> used;
        auto add = [&](AsId a, AsId b, Relationship rel) {
            auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
            if (a == b || used.count(key)) return;
            used.insert(key);
            edges.push_back({a, b, rel});
        };
        for (AsId i = 2; i <= n; ++i)
            add(AsId(1 + uniform_index(rng, i - 1)), i, Relationship::ProviderToCustomer);
        for (std::uint64_t k = uniform_index(rng, n); k > 0; --k) {
            AsId a = AsId(1 + uniform_index(rng, n));
            AsId b = AsId(1 + uniform_index(rng, n));
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            add(a, b, uniform_index(rng, 2) ? Relationship::PeerToPeer
                                            : Relationship::ProviderToCustomer);
        }
        AsGraph graph = AsGraph::build(std::move(edges));
        for (std::uint32_t type : {0u, 1u, 2u}) {
            AsId victim = AsId(1 + uniform_index(rng, n));
            AsId hijacker = victim;
            while (hijacker == victim) hijacker = AsId(1 + uniform_index(rng, n));
            HijackScenario sc{victim, hijacker, type, PrefixMode::ExactPrefix, rng()};
            ++cases;
            RoutingOutcome fast = simulate_hijack(graph, sc, false);
            RoutingOutcome slow = brute_force_outcome(graph, sc);
            if (fast.decisions != slow.decisions || fast.impact != slow.impact) ++mismatches;
        }
    }
    Outcome o;
    o.pass = mismatches == 0;
    o.detail = fmt("%zu oracle comparisons on 200 random graphs (types 0..2), %zu mismatches",
                   cases, mismatches);
    return o;
}

struct ClusterRandomRmse {
    double clustered = 0.0;
    double random = 0.0;
};

ClusterRandomRmse correlation_penalty() {
    AsGraph graph = gen_synthetic_topology(2000, 7);
    NieExperimentConfig cfg;
    cfg.n_scenarios = 500;
    cfg.m_grid = {100};
    cfg.seed = 70;
    cfg.jobs = jobs();
    std::vector<EvalReport> random_reports = run_nie_experiment(graph, cfg);
    cfg.monitors = MonitorSource::clustered();
    std::vector<EvalReport> clustered_reports = run_nie_experiment(graph, cfg);
    g_reports.push_back(random_reports[0]);
    g_reports.push_back(clustered_reports[0]);
    return {clustered_reports[0].rmse, random_reports[0].rmse};
}

Outcome criterion_7() {
    ClusterRandomRmse r = correlation_penalty();
    Outcome o;
    o.pass = r.clustered >= 2.0 * r.random;
    o.detail = fmt("NIE RMSE at M=100: clustered %.4f vs random %.4f (ratio %.1fx, need >= 2x)",
                   r.clustered, r.random, r.clustered / r.random);
    return o;
}

Outcome criterion_8() {
    AsGraph graph = gen_synthetic_topology(2000, 7);
    LreExperimentConfig cfg;
    cfg.n_train = 1000;
    cfg.n_test = 1000;
    cfg.alpha = 50.0;
    cfg.m_grid = {50, 100, 200};
    cfg.seed = 80;
    cfg.jobs = jobs();
    cfg.monitors = MonitorSource::clustered();
    std::vector<LreExperimentRow> clustered = run_lre_experiment(graph, cfg);
    cfg.monitors = MonitorSource::random();
    std::vector<LreExperimentRow> random_rows = run_lre_experiment(graph, cfg);

    Outcome o;
    std::string parts;
    for (const LreExperimentRow& row : clustered) {
        g_reports.push_back(row.lre);
        g_reports.push_back(row.nie);
        bool ok = row.lre.rmse < row.nie.rmse;
        o.pass = o.pass && ok;
        parts += fmt(" clustered M=%zu: lre %.4f < nie %.4f%s", row.m, row.lre.rmse,
                     row.nie.rmse, ok ? "" : " VIOLATED");
    }
    for (const LreExperimentRow& row : random_rows) {
        g_reports.push_back(row.lre);
        g_reports.push_back(row.nie);
        bool ok = std::abs(row.lre.rmse - row.nie.rmse) <= 0.20 * row.nie.rmse;
        o.pass = o.pass && ok;
        parts += fmt(" random M=%zu: |%.4f-%.4f| within 20%%%s", row.m, row.lre.rmse,
                     row.nie.rmse, ok ? "" : " VIOLATED");
    }
    o.detail = "LRE vs NIE, train/test 1000/1000, alpha=50:" + parts;
    return o;
}

Outcome criterion_9() {
    Outcome o;
    std::size_t violations = 0;
    for (const EvalReport& r : g_reports)
        if (r.rmse < r.mae) ++violations;
    o.pass = violations == 0 && !g_reports.empty();
    o.detail = fmt("RMSE >= MAE on %zu reports emitted by criteria 2-8, %zu violations",
                   g_reports.size(), violations);
    return o;
}

Outcome criterion_10() {
    const char* env = std::getenv("BGPIMPACT_CAIDA_AS_REL");
    std::string path = env ? env : "";
    if (path.empty()) {
        for (const char* candidate : {"data/as-rel.txt", "data/as-rel.txt.gz"})
            if (std::filesystem::exists(candidate)) path = candidate;
    }
    Outcome o;
    if (path.empty()) {
        o.skip = true;
        o.detail = "no CAIDA AS-relationship snapshot (set BGPIMPACT_CAIDA_AS_REL to enable)";
        return o;
    }
    AsGraph graph = load_as_rel(path);
    double c[3] = {0, 0, 0};
    double mean[3] = {0, 0, 0};
    for (std::uint32_t type : {0u, 1u, 2u}) {
        ScenarioGenConfig gen;
        gen.count = 1000;
        gen.seed = 90 + type;
        gen.hijack_type = type;
        std::vector<RoutingOutcome> outcomes =
            batch_simulate(graph, generate_scenarios(graph, gen), jobs(), false);
        std::vector<double> impacts;
        for (const RoutingOutcome& out : outcomes) impacts.push_back(out.impact);
        theory::ImpactSamples samples = theory::make_samples(impacts);
        c[type] = theory::c_i(samples);
        for (double v : impacts) mean[type] += v;
        mean[type] /= double(impacts.size());
    }
    o.pass = c[0] >= 0.33 && c[0] <= 0.45 && c[0] > c[1] && c[1] > c[2] &&
             std::abs(mean[0] - 0.50) <= 0.05;
    o.detail = fmt("%s: c_I = {%.3f, %.3f, %.3f}, E[I](Type-0) = %.3f", path.c_str(), c[0],
                   c[1], c[2], mean[0]);
    return o;
}

Outcome criterion_11() {
    AsGraph graph = gen_synthetic_topology(500, 11);
    MonitorSet monitors = sample_random_monitors(graph, 100, 4);
    std::size_t checked = 0, disagreements = 0;
    Rng rng(1111);
    for (int round = 0; round < 30; ++round) {
        ScenarioGenConfig gen;
        gen.count = 1;
        gen.seed = rng();
        gen.hijack_type = std::uint32_t(round % 3);
        HijackScenario sc = generate_scenarios(graph, gen)[0];
        RoutingOutcome out = simulate_hijack(graph, sc, /*keep_routes=*/true);
        EventSpec event;
        event.victim = sc.victim;
        event.hijacker = sc.hijacker;
        std::vector<BgpPathRecord> records;
        for (AsId as : monitors.members) {
            const auto& route = out.routes[graph.index_of(as)];
            if (route) records.push_back({as, route->path});
        }
        Classification c = classify_bgp_paths(records, event);
        if (c.monitors.size() != monitors.size()) ++disagreements;
        MeasurementVector direct = observe_control_plane(graph, out, c.monitors);
        ++checked;
        if (c.values.values != direct.values) ++disagreements;
    }
    Outcome o;
    o.pass = disagreements == 0;
    o.detail = fmt("classify_bgp_paths vs observe_control_plane on %zu simulated events, "
                   "%zu disagreements (PEERING replication is out of desk scope)",
                   checked, disagreements);
    return o;
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const Entry entries[] = {
        {1, "analytic constant c_I(uniform) = pi/8", criterion_1},
        {2, "NIE Monte Carlo matches the closed-form RMSE", criterion_2},
        {3, "pair-symmetric unbiasedness", criterion_3},
        {4, "failure bias/RMSE match the closed forms", criterion_4},
        {5, "Ping-IE accuracy floor", criterion_5},
        {6, "oracle equivalence on small graphs", criterion_6},
        {7, "clustered-monitor correlation penalty", criterion_7},
        {8, "LRE benefit over NIE", criterion_8},
        {9, "RMSE >= MAE on all emitted reports", criterion_9},
        {10, "real-snapshot impact statistics", criterion_10},
        {11, "ingest end-to-end consistency", criterion_11},
    };
    bool all_pass = true;
    for (const Entry& entry : entries) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = entry.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const char* tag = o.skip ? "SKIP" : o.pass ? "PASS" : "FAIL";
        std::printf("[%s] criterion %2d: %s - %s (%.1fs)\n", tag, entry.id, entry.name,
                    o.detail.c_str(), dt);
        std::fflush(stdout);
        if (!o.skip && !o.pass) all_pass = false;
    }
    return all_pass ? 0 : 1;
}
