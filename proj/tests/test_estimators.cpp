#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bgpimpact/estimators.hpp"
#include "bgpimpact/rng.hpp"

using namespace bgpimpact;

namespace {

MeasurementVector bits(std::vector<std::uint8_t> v) {
    MeasurementVector mv;
    mv.values = std::move(v);
    return mv;
}

double ridge_objective(const std::vector<std::vector<std::uint8_t>>& x,
                       const std::vector<double>& y, const std::vector<double>& w,
                       double alpha) {
    double obj = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double pred = 0;
        for (std::size_t j = 0; j < w.size(); ++j) pred += x[i][j] * w[j];
        obj += (pred - y[i]) * (pred - y[i]);
    }
    for (double wj : w) obj += alpha * wj * wj;
    return obj;
}

double norm2(const std::vector<double>& w) {
    double s = 0;
    for (double v : w) s += v * v;
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("nie basics") {
    CHECK(nie(bits({1, 0, 1, 0})).value == doctest::Approx(0.5));
    CHECK(nie(bits({0, 0, 0})).value == 0.0);
    CHECK(nie(bits({1, 1, 1})).value == 1.0);
    CHECK(nie(bits({1, 0, 1, 0})).estimator == "nie");
    CHECK_FALSE(nie(bits({1, 1})).clamped);
    CHECK_THROWS_AS(nie(bits({})), ArgumentError);

    // permutation invariance
    CHECK(nie(bits({1, 1, 0, 0, 1})).value == nie(bits({0, 1, 1, 1, 0})).value);
}

TEST_CASE("ping_ie census with no failures returns the exact impact") {
    AsGraph g = gen_synthetic_topology(100, 21);
    HijackScenario sc{3, 77, 0, PrefixMode::ExactPrefix, 5};
    RoutingOutcome out = simulate_hijack(g, sc, false);
    ImpactEstimate e = ping_ie(g, out, g.node_count(), PingModel::with_fixed_p(0.0, 0), 123);
    CHECK(e.value == doctest::Approx(out.impact));
    CHECK(e.estimator == "ping-ie");

    // total failure on a zero-impact outcome estimates 1.0
    RoutingOutcome clean;
    clean.decisions.assign(g.node_count(), Decision::Victim);
    clean.reachable_count = g.node_count();
    ImpactEstimate worst = ping_ie(g, clean, 50, PingModel::with_fixed_p(1.0, 0), 9);
    CHECK(worst.value == 1.0);

    // deterministic per seed
    PingModel model;  // default table, n_ip=1
    CHECK(ping_ie(g, out, 30, model, 7).value == ping_ie(g, out, 30, model, 7).value);
}

TEST_CASE("fit_lre solves the regularized normal equations") {
    // single perfect monitor
    LreModel perfect = fit_lre({{0}, {1}}, {0.0, 1.0}, 0.0, {42});
    REQUIRE(perfect.weights.size() == 1);
    CHECK(perfect.weights[0] == doctest::Approx(1.0));
    CHECK(perfect.training_event_count == 2);

    // no signal, heavy regularization -> zero weights
    LreModel zero = fit_lre({{0, 0}, {0, 0}, {0, 0}}, {0.3, 0.4, 0.5}, 50.0, {1, 2});
    CHECK(zero.weights[0] == doctest::Approx(0.0));
    CHECK(zero.weights[1] == doctest::Approx(0.0));

    // perfectly collinear columns get equal weights under ridge
    std::vector<std::vector<std::uint8_t>> dup{{1, 1}, {0, 0}, {1, 1}, {0, 0}, {1, 1}};
    LreModel sym = fit_lre(dup, {0.9, 0.1, 0.8, 0.2, 0.85}, 50.0, {10, 11});
    CHECK(std::abs(sym.weights[0] - sym.weights[1]) < 1e-9);

    // rank-deficient with alpha = 0 is an error advising regularization
    CHECK_THROWS_WITH_AS(fit_lre(dup, {0.9, 0.1, 0.8, 0.2, 0.85}, 0.0, {10, 11}),
                         doctest::Contains("alpha"), ArgumentError);

    CHECK_THROWS_AS(fit_lre({{1, 0}}, {0.5, 0.5}, 1.0, {1, 2}), ArgumentError);
    CHECK_THROWS_AS(fit_lre({{1, 0}, {1}}, {0.5, 0.5}, 1.0, {1, 2}), ArgumentError);
    CHECK_THROWS_AS(fit_lre({{1}}, {0.5}, -1.0, {1}), ArgumentError);
}

TEST_CASE("predict_lre is a clamped dot product") {
    LreModel m;
    m.monitor_asns = {1};
    m.weights = {1.0};
    CHECK(predict_lre(m, bits({1})).value == 1.0);

    m.monitor_asns = {1, 2};
    m.weights = {0.3, 0.4};
    ImpactEstimate e = predict_lre(m, bits({1, 1}));
    CHECK(e.value == doctest::Approx(0.7));
    CHECK_FALSE(e.clamped);

    m.weights = {0.9, 0.9};
    ImpactEstimate hi = predict_lre(m, bits({1, 1}));
    CHECK(hi.value == 1.0);
    CHECK(hi.clamped);

    m.weights = {-0.5, 0.1};
    ImpactEstimate lo = predict_lre(m, bits({1, 0}));
    CHECK(lo.value == 0.0);
    CHECK(lo.clamped);

    CHECK_THROWS_AS(predict_lre(m, bits({1})), ArgumentError);
}

TEST_CASE("lre interpolates training data when alpha -> 0 on full-rank designs") {
    std::vector<std::vector<std::uint8_t>> x{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}};
    std::vector<double> y{0.2, 0.5, 0.9, 0.7};
    LreModel m = fit_lre(x, y, 0.0, {1, 2, 3});
    for (std::size_t i = 0; i < x.size(); ++i) {
        MeasurementVector mv = bits(x[i]);
        CHECK(predict_lre(m, mv).value == doctest::Approx(y[i]).epsilon(1e-9));
    }
}

TEST_CASE("ridge weight norm shrinks as alpha grows") {
    Rng rng(17);
    std::vector<std::vector<std::uint8_t>> x;
    std::vector<double> y;
    for (int i = 0; i < 40; ++i) {
        std::vector<std::uint8_t> row;
        for (int j = 0; j < 8; ++j) row.push_back(uniform_index(rng, 2) ? 1 : 0);
        x.push_back(row);
        y.push_back(uniform_double(rng));
    }
    double prev = norm2(fit_lre(x, y, 0.5, {1, 2, 3, 4, 5, 6, 7, 8}).weights);
    for (double alpha : {2.0, 10.0, 50.0, 500.0}) {
        double cur = norm2(fit_lre(x, y, alpha, {1, 2, 3, 4, 5, 6, 7, 8}).weights);
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
}

TEST_CASE("fitted weights are a local optimum of the ridge objective") {
    Rng rng(99);
    std::vector<std::vector<std::uint8_t>> x;
    std::vector<double> y;
    for (int i = 0; i < 30; ++i) {
        std::vector<std::uint8_t> row;
        for (int j = 0; j < 5; ++j) row.push_back(uniform_index(rng, 2) ? 1 : 0);
        x.push_back(row);
        y.push_back(uniform_double(rng));
    }
    LreModel m = fit_lre(x, y, 50.0, {1, 2, 3, 4, 5});
    double base = ridge_objective(x, y, m.weights, 50.0);
    for (std::size_t j = 0; j < m.weights.size(); ++j) {
        for (double delta : {1e-4, -1e-4}) {
            std::vector<double> w = m.weights;
            w[j] += delta;
            CHECK(ridge_objective(x, y, w, 50.0) >= base);
        }
    }
}

TEST_CASE("distance and preference features") {
    // 1 and 2 are tier providers (peers); victim 3 under 1, hijacker 4 under
    // 2 via 5; monitor 6 under 1; monitor 7 under 2.
    AsGraph g = parse_as_rel("1|2|0\n1|3|-1\n2|5|-1\n5|4|-1\n1|6|-1\n2|7|-1\n");
    RibSnapshot rib_v = propagate_single_origin(g, 3, 1);
    RibSnapshot rib_h = propagate_single_origin(g, 4, 1, RouteSource::Hijacker);

    // distances: monitor 6: V via [6,1,3] = 3, H via [6,1,2,5,4] = 5 -> +1
    //            monitor 7: V via [7,2,1,3] = 4, H via [7,2,5,4] = 4 -> 0
    MonitorSet ms{"m", {6, 7}};
    FeatureValue fd = compute_f_dist(g, rib_v, rib_h, ms);
    CHECK(fd.value == doctest::Approx(0.5));
    CHECK(fd.unreachable_monitors == 0);

    // both monitors learn both routes from providers -> f_pref = 0
    FeatureValue fp = compute_f_pref(g, rib_v, rib_h, ms);
    CHECK(fp.value == doctest::Approx(0.0));

    // the victim itself ranks Self above everything
    MonitorSet self_ms{"v", {3}};
    CHECK(compute_f_pref(g, rib_v, rib_h, self_ms).value == doctest::Approx(1.0));

    // antisymmetry under swapping the snapshots
    MonitorSet wide{"w", {1, 2, 5, 6, 7}};
    CHECK(compute_f_dist(g, rib_v, rib_h, wide).value ==
          doctest::Approx(-compute_f_dist(g, rib_h, rib_v, wide).value));
    CHECK(compute_f_pref(g, rib_v, rib_h, wide).value ==
          doctest::Approx(-compute_f_pref(g, rib_h, rib_v, wide).value));
}

TEST_CASE("preference feature: customer route beats provider route") {
    // monitor 5: victim 6 is its customer, hijacker 2 reachable via provider 1
    AsGraph g = parse_as_rel("1|5|-1\n5|6|-1\n1|2|-1\n");
    RibSnapshot rib_v = propagate_single_origin(g, 6, 0);
    RibSnapshot rib_h = propagate_single_origin(g, 2, 0, RouteSource::Hijacker);
    MonitorSet ms{"m", {5}};
    CHECK(compute_f_pref(g, rib_v, rib_h, ms).value == doctest::Approx(1.0));
}

TEST_CASE("unreachable monitors contribute zero and are counted") {
    // 9 peers with victim only; unreachable in the hijacker snapshot
    AsGraph g = parse_as_rel("3|9|0\n3|4|0\n");
    RibSnapshot rib_v = propagate_single_origin(g, 3, 0);
    RibSnapshot rib_h = propagate_single_origin(g, 4, 0, RouteSource::Hijacker);
    MonitorSet ms{"m", {9}};
    FeatureValue f = compute_f_dist(g, rib_v, rib_h, ms);
    CHECK(f.value == 0.0);
    CHECK(f.unreachable_monitors == 1);
}

TEST_CASE("feature regression recovers an exact plane") {
    std::vector<FeatureSample> samples;
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        double n = uniform_double(rng);
        double f = uniform_double(rng) * 2 - 1;
        samples.push_back({n, f, 0.1 + 0.8 * n + 0.1 * f});
    }
    FeatureLreModel m = fit_feature_lre(samples, FeatureKind::Dist);
    CHECK(m.w0 == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(m.w_nie == doctest::Approx(0.8).epsilon(1e-9));
    CHECK(m.w_f == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(predict_feature_lre(m, 0.5, 0.0).value == doctest::Approx(0.5));
    CHECK(predict_feature_lre(m, 2.0, 1.0).clamped);
}

TEST_CASE("feature regression degenerate and reduced cases") {
    // f identically zero reduces to simple regression of impact on NIE
    std::vector<FeatureSample> flat{{0.0, 0.0, 0.1}, {0.5, 0.0, 0.5}, {1.0, 0.0, 0.9}};
    FeatureLreModel m = fit_feature_lre(flat, FeatureKind::Pref);
    CHECK(m.w_f == doctest::Approx(0.0));
    CHECK(m.w_nie == doctest::Approx(0.8).epsilon(1e-9));
    CHECK(m.w0 == doctest::Approx(0.1).epsilon(1e-9));

    std::vector<FeatureSample> constant{{0.4, 0.2, 0.1}, {0.4, 0.2, 0.5}, {0.4, 0.2, 0.9}};
    CHECK_THROWS_AS(fit_feature_lre(constant, FeatureKind::Dist), ArgumentError);
    CHECK_THROWS_AS(fit_feature_lre({{0, 0, 0}, {1, 1, 1}}, FeatureKind::Dist), ArgumentError);
}

TEST_CASE("model serialization round trips") {
    LreModel m;
    m.monitor_asns = {5, 9, 11};
    m.weights = {0.25, -0.125, 0.5};
    m.alpha = 50.0;
    m.training_event_count = 1000;
    LreModel back = lre_model_from_json(lre_model_to_json(m));
    CHECK(back.monitor_asns == m.monitor_asns);
    CHECK(back.weights == m.weights);
    CHECK(back.alpha == m.alpha);
    CHECK(back.training_event_count == m.training_event_count);

    CHECK_THROWS_AS(lre_model_from_json("{"), ParseError);
    CHECK_THROWS_AS(lre_model_from_json(R"({"monitor_asns":[1],"weights":[],"alpha":0,"trained_on":0})"),
                    DataError);

    FeatureLreModel preset = feature_lre_preset(FeatureKind::Dist, 229);
    CHECK(preset.non_authoritative);
    CHECK(preset.w_nie == doctest::Approx(0.77));
    FeatureLreModel fback = feature_lre_from_json(feature_lre_to_json(preset));
    CHECK(fback.kind == FeatureKind::Dist);
    CHECK(fback.w_nie == doctest::Approx(0.77));
    CHECK(fback.non_authoritative);
}
