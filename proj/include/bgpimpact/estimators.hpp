#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bgpimpact/monitors.hpp"
#include "bgpimpact/sim.hpp"

namespace bgpimpact {

struct ImpactEstimate {
    double value = 0.0;  // in [0, 1]
    std::string estimator;
    bool clamped = false;
};

struct LreModel {
    std::vector<AsId> monitor_asns;
    std::vector<double> weights;  // aligned with monitor_asns
    double alpha = 0.0;
    std::size_t training_event_count = 0;
};

enum class FeatureKind : std::uint8_t {
    Dist,
    Pref,
};

struct FeatureLreModel {
    FeatureKind kind = FeatureKind::Dist;
    double w0 = 0.0;
    double w_nie = 0.0;
    double w_f = 0.0;
    // Set on the shipped draft presets, whose source tables disagree on the
    // sign of w_f; fitted models are authoritative.
    bool non_authoritative = false;
};

struct FeatureValue {
    double value = 0.0;  // in [-1, 1]
    std::size_t unreachable_monitors = 0;
};

struct FeatureSample {
    double nie = 0.0;
    double f = 0.0;
    double impact = 0.0;
};

// Fraction of infected monitors.
ImpactEstimate nie(const MeasurementVector& measurements);

// Ping campaign estimator: sample m random ASes, observe them under the ping
// failure model, return the NIE of the corrupted bits.
ImpactEstimate ping_ie(const AsGraph& graph, const RoutingOutcome& outcome, std::size_t m,
                       const PingModel& model, std::uint64_t seed);

// Ridge fit of per-monitor weights: solves (X^T X + alpha I) w = X^T y where
// rows of X are events and columns are monitors.
LreModel fit_lre(const std::vector<std::vector<std::uint8_t>>& observations,
                 const std::vector<double>& impacts, double alpha,
                 const std::vector<AsId>& monitor_asns);

// I_hat = sum_i m_i w_i, clamped to [0, 1].
ImpactEstimate predict_lre(const LreModel& model, const MeasurementVector& measurements);

// (1/M) sum_i [dist_V_i < dist_H_i] - [dist_H_i < dist_V_i], with distances
// taken from the two single-origin snapshots. Monitors unreachable in either
// snapshot contribute 0 and are counted.
FeatureValue compute_f_dist(const AsGraph& graph, const RibSnapshot& rib_victim,
                            const RibSnapshot& rib_hijacker, const MonitorSet& monitors);

// Same shape over the learned_from class (Self > Customer > Peer > Provider).
FeatureValue compute_f_pref(const AsGraph& graph, const RibSnapshot& rib_victim,
                            const RibSnapshot& rib_hijacker, const MonitorSet& monitors);

// Ordinary least squares for I_hat = w0 + w_nie * NIE + w_f * f.
FeatureLreModel fit_feature_lre(const std::vector<FeatureSample>& samples, FeatureKind kind);
ImpactEstimate predict_feature_lre(const FeatureLreModel& model, double nie_value, double f);

// Published Type-0 weights per monitor count (10/50/100/229); flagged
// non-authoritative.
FeatureLreModel feature_lre_preset(FeatureKind kind, std::size_t n_monitors);

std::string lre_model_to_json(const LreModel& model);
LreModel lre_model_from_json(const std::string& text);
std::string feature_lre_to_json(const FeatureLreModel& model);
FeatureLreModel feature_lre_from_json(const std::string& text);

}  // namespace bgpimpact
