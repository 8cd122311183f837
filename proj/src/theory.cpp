#include "bgpimpact/theory.hpp"

#include <cmath>

#include "bgpimpact/error.hpp"
#include "bgpimpact/rng.hpp"

namespace bgpimpact {
namespace theory {

namespace {

void check_impact(double i) {
    if (!(i >= 0.0 && i <= 1.0)) throw ArgumentError("impact must be in [0,1]");
}

void check_p(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("failure probability must be in [0,1]");
}

void check_m(std::size_t m) {
    if (m == 0) throw ArgumentError("monitor count must be >= 1");
}

const std::vector<double>& checked(const ImpactSamples& samples) {
    if (samples.values.empty()) throw ArgumentError("impact sample set is empty");
    return samples.values;
}

double mean_impact(const ImpactSamples& samples) {
    double sum = 0.0;
    for (double v : checked(samples)) sum += v;
    return sum / double(samples.values.size());
}

}  // namespace

ImpactSamples make_samples(std::vector<double> values, std::string label) {
    for (double v : values)
        if (!(v >= 0.0 && v <= 1.0)) throw ArgumentError("impact sample out of [0,1]");
    return ImpactSamples{std::move(values), std::move(label)};
}

ImpactSamples uniform_samples(std::size_t count, std::uint64_t seed) {
    Rng rng(derive_seed(seed, /*tag=*/0x756e6966ULL));
    ImpactSamples s;
    s.label = "uniform";
    s.values.reserve(count);
    for (std::size_t i = 0; i < count; ++i) s.values.push_back(uniform_double(rng));
    return s;
}

FailureRmseTerms failure_rmse_terms(double i, double p) {
    check_impact(i);
    check_p(p);
    FailureRmseTerms t;
    t.a = (i + (1.0 - i) * p) * (1.0 - i) * (1.0 - p);
    t.b = (1.0 - i) * (1.0 - i) * p * p;
    return t;
}

double rmse_point(double i, std::size_t m) {
    check_impact(i);
    check_m(m);
    return std::sqrt(i * (1.0 - i) / double(m));
}

double rmse_point_with_failures(double i, std::size_t m, double p) {
    check_m(m);
    FailureRmseTerms t = failure_rmse_terms(i, p);
    return std::sqrt(t.a / double(m) + t.b);
}

double bias_point_with_failures(double i, double p) {
    check_impact(i);
    check_p(p);
    return (1.0 - i) * p;
}

double c_i(const ImpactSamples& samples) {
    double sum = 0.0;
    for (double v : checked(samples)) sum += std::sqrt(v * (1.0 - v));
    return sum / double(samples.values.size());
}

double rmse_nie_random(std::size_t m, const ImpactSamples& samples) {
    check_m(m);
    return c_i(samples) / std::sqrt(double(m));
}

double bias_with_failures(double p, const ImpactSamples& samples) {
    check_p(p);
    return (1.0 - mean_impact(samples)) * p;
}

double rmse_with_failures(std::size_t m, double p, const ImpactSamples& samples) {
    check_m(m);
    check_p(p);
    double sum = 0.0;
    for (double v : checked(samples)) {
        FailureRmseTerms t = failure_rmse_terms(v, p);
        sum += std::sqrt(t.a / double(m) + t.b);
    }
    return sum / double(samples.values.size());
}

double rmse_floor(double p, const ImpactSamples& samples) {
    check_p(p);
    return (1.0 - mean_impact(samples)) * p;
}

}  // namespace theory
}  // namespace bgpimpact
