#include "bgpimpact/estimators.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "bgpimpact/rng.hpp"
#include "json.hpp"

namespace bgpimpact {

namespace {

ImpactEstimate clamped_estimate(double raw, std::string label) {
    ImpactEstimate e;
    e.estimator = std::move(label);
    e.value = std::clamp(raw, 0.0, 1.0);
    e.clamped = e.value != raw;
    return e;
}

int pref_class(const Route& r) { return int(r.learned_from); }

FeatureValue signed_monitor_fraction(const AsGraph& graph, const RibSnapshot& rib_victim,
                                     const RibSnapshot& rib_hijacker, const MonitorSet& monitors,
                                     bool by_distance) {
    if (monitors.size() == 0) throw ArgumentError("empty monitor set");
    FeatureValue out;
    long balance = 0;
    for (AsId as : monitors.members) {
        const auto& rv = rib_victim.route_at(graph, as);
        const auto& rh = rib_hijacker.route_at(graph, as);
        if (!rv || !rh) {
            ++out.unreachable_monitors;
            continue;
        }
        if (by_distance) {
            // shorter distance is better
            if (rv->effective_length() < rh->effective_length()) ++balance;
            if (rh->effective_length() < rv->effective_length()) --balance;
        } else {
            if (pref_class(*rv) > pref_class(*rh)) ++balance;
            if (pref_class(*rh) > pref_class(*rv)) --balance;
        }
    }
    out.value = double(balance) / double(monitors.size());
    return out;
}

}  // namespace

ImpactEstimate nie(const MeasurementVector& measurements) {
    if (measurements.size() == 0) throw ArgumentError("empty measurement vector");
    std::size_t infected = 0;
    for (std::uint8_t v : measurements.values) infected += v;
    ImpactEstimate e;
    e.estimator = "nie";
    e.value = double(infected) / double(measurements.size());
    return e;
}

ImpactEstimate ping_ie(const AsGraph& graph, const RoutingOutcome& outcome, std::size_t m,
                       const PingModel& model, std::uint64_t seed) {
    MonitorSet monitors = sample_random_monitors(graph, m, derive_seed(seed, 0x7069ULL));
    PingModel obs_model = model;
    obs_model.seed = derive_seed(seed, 0x7069ULL, 1);
    MeasurementVector mv = observe_ping(graph, outcome, monitors, obs_model);
    ImpactEstimate e = nie(mv);
    e.estimator = "ping-ie";
    return e;
}

LreModel fit_lre(const std::vector<std::vector<std::uint8_t>>& observations,
                 const std::vector<double>& impacts, double alpha,
                 const std::vector<AsId>& monitor_asns) {
    if (alpha < 0.0) throw ArgumentError("alpha must be >= 0");
    const std::size_t n_events = observations.size();
    const std::size_t n_monitors = monitor_asns.size();
    if (n_events == 0) throw ArgumentError("no training events");
    if (impacts.size() != n_events)
        throw ArgumentError("impacts length does not match event count");
    for (const auto& row : observations)
        if (row.size() != n_monitors)
            throw ArgumentError("observation row length does not match monitor count");

    Eigen::MatrixXd x(n_events, n_monitors);
    Eigen::VectorXd y(n_events);
    for (std::size_t i = 0; i < n_events; ++i) {
        y[long(i)] = impacts[i];
        for (std::size_t j = 0; j < n_monitors; ++j) x(long(i), long(j)) = observations[i][j];
    }

    Eigen::MatrixXd gram = x.transpose() * x;
    gram.diagonal().array() += alpha;
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) {
        if (alpha == 0.0)
            throw ArgumentError(
                "X^T X is rank deficient; refit with alpha > 0 to regularize");
        throw InternalError("normal equations factorization failed");
    }
    Eigen::VectorXd w = llt.solve(x.transpose() * y);

    LreModel model;
    model.monitor_asns = monitor_asns;
    model.alpha = alpha;
    model.training_event_count = n_events;
    model.weights.assign(w.data(), w.data() + w.size());
    return model;
}

ImpactEstimate predict_lre(const LreModel& model, const MeasurementVector& measurements) {
    if (measurements.size() != model.weights.size())
        throw ArgumentError("measurement vector length does not match model");
    double raw = 0.0;
    for (std::size_t i = 0; i < model.weights.size(); ++i)
        if (measurements.values[i]) raw += model.weights[i];
    return clamped_estimate(raw, "lre");
}

FeatureValue compute_f_dist(const AsGraph& graph, const RibSnapshot& rib_victim,
                            const RibSnapshot& rib_hijacker, const MonitorSet& monitors) {
    return signed_monitor_fraction(graph, rib_victim, rib_hijacker, monitors, true);
}

FeatureValue compute_f_pref(const AsGraph& graph, const RibSnapshot& rib_victim,
                            const RibSnapshot& rib_hijacker, const MonitorSet& monitors) {
    return signed_monitor_fraction(graph, rib_victim, rib_hijacker, monitors, false);
}

FeatureLreModel fit_feature_lre(const std::vector<FeatureSample>& samples, FeatureKind kind) {
    if (samples.size() < 3) throw ArgumentError("need at least 3 samples");
    Eigen::MatrixXd x(samples.size(), 3);
    Eigen::VectorXd y(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        x(long(i), 0) = 1.0;
        x(long(i), 1) = samples[i].nie;
        x(long(i), 2) = samples[i].f;
        y[long(i)] = samples[i].impact;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    // A constant-zero feature column is fine (its weight becomes 0); a design
    // where even NIE carries no variation is not.
    if (qr.rank() < 2)
        throw ArgumentError("degenerate design: features carry no independent variation");
    Eigen::VectorXd w = qr.solve(y);

    FeatureLreModel model;
    model.kind = kind;
    model.w0 = w[0];
    model.w_nie = w[1];
    model.w_f = w[2];
    return model;
}

ImpactEstimate predict_feature_lre(const FeatureLreModel& model, double nie_value, double f) {
    double raw = model.w0 + model.w_nie * nie_value + model.w_f * f;
    ImpactEstimate e = clamped_estimate(
        raw, model.kind == FeatureKind::Dist ? "feature-lre-dist" : "feature-lre-pref");
    return e;
}

FeatureLreModel feature_lre_preset(FeatureKind kind, std::size_t n_monitors) {
    // Type-0 weights per monitor count, columns 10/50/100/229.
    struct Row {
        std::size_t m;
        double pref[3];  // w0, w_nie, w_f
        double dist[3];
    };
    static const Row rows[] = {
        {10, {0.14, 0.73, 0.03}, {0.17, 0.67, 0.05}},
        {50, {0.06, 0.88, 0.10}, {0.13, 0.74, 0.08}},
        {100, {0.04, 0.91, 0.11}, {0.12, 0.76, 0.08}},
        {229, {0.04, 0.92, 0.11}, {0.12, 0.77, 0.08}},
    };
    const Row* pick = &rows[0];
    for (const Row& r : rows)
        if (n_monitors >= r.m) pick = &r;
    FeatureLreModel model;
    model.kind = kind;
    const double* w = kind == FeatureKind::Pref ? pick->pref : pick->dist;
    model.w0 = w[0];
    model.w_nie = w[1];
    model.w_f = w[2];
    model.non_authoritative = true;
    return model;
}

std::string lre_model_to_json(const LreModel& model) {
    nlohmann::ordered_json j;
    j["monitor_asns"] = model.monitor_asns;
    j["weights"] = model.weights;
    j["alpha"] = model.alpha;
    j["trained_on"] = model.training_event_count;
    return j.dump();
}

LreModel lre_model_from_json(const std::string& text) {
    LreModel model;
    try {
        nlohmann::json j = nlohmann::json::parse(text);
        model.monitor_asns = j.at("monitor_asns").get<std::vector<AsId>>();
        model.weights = j.at("weights").get<std::vector<double>>();
        model.alpha = j.at("alpha").get<double>();
        model.training_event_count = j.at("trained_on").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad LRE model JSON: ") + e.what());
    }
    if (model.weights.size() != model.monitor_asns.size())
        throw DataError("LRE model weights do not align with monitor_asns");
    return model;
}

std::string feature_lre_to_json(const FeatureLreModel& model) {
    nlohmann::ordered_json j;
    j["kind"] = model.kind == FeatureKind::Dist ? "dist" : "pref";
    j["w0"] = model.w0;
    j["w_nie"] = model.w_nie;
    j["w_f"] = model.w_f;
    if (model.non_authoritative) j["non_authoritative"] = true;
    return j.dump();
}

FeatureLreModel feature_lre_from_json(const std::string& text) {
    FeatureLreModel model;
    try {
        nlohmann::json j = nlohmann::json::parse(text);
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "dist")
            model.kind = FeatureKind::Dist;
        else if (kind == "pref")
            model.kind = FeatureKind::Pref;
        else
            throw DataError("unknown feature kind '" + kind + "'");
        model.w0 = j.at("w0").get<double>();
        model.w_nie = j.at("w_nie").get<double>();
        model.w_f = j.at("w_f").get<double>();
        model.non_authoritative = j.value("non_authoritative", false);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad feature LRE JSON: ") + e.what());
    }
    return model;
}

}  // namespace bgpimpact
