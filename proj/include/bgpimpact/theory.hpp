#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace bgpimpact {
namespace theory {

// Empirical impact distribution f(I): draws in [0, 1]. All integrals over
// f(I) below are empirical means over these samples.
struct ImpactSamples {
    std::vector<double> values;
    std::string label;
};

ImpactSamples make_samples(std::vector<double> values, std::string label = {});
ImpactSamples uniform_samples(std::size_t count, std::uint64_t seed);

// Point-wise terms of the failure RMSE: a = (I + (1-I)p)(1-I)(1-p),
// b = (1-I)^2 p^2; RMSE(I) = sqrt(a/M + b).
struct FailureRmseTerms {
    double a = 0.0;
    double b = 0.0;
};
FailureRmseTerms failure_rmse_terms(double i, double p);

// RMSE of the NIE at a fixed impact: sqrt(I(1-I)/M).
double rmse_point(double i, std::size_t m);
double rmse_point_with_failures(double i, std::size_t m, double p);
double bias_point_with_failures(double i, double p);

// c_I = E[sqrt(I(1-I))]; pi/8 for uniform impacts.
double c_i(const ImpactSamples& samples);

// RMSE of the NIE under random monitors: c_I / sqrt(M).
double rmse_nie_random(std::size_t m, const ImpactSamples& samples);

// Bias under measurement failure probability p: (1 - E[I]) p.
double bias_with_failures(double p, const ImpactSamples& samples);

// E[sqrt(A/M + B)] over the samples.
double rmse_with_failures(std::size_t m, double p, const ImpactSamples& samples);

// M -> infinity limit of rmse_with_failures: (1 - E[I]) p.
double rmse_floor(double p, const ImpactSamples& samples);

}  // namespace theory
}  // namespace bgpimpact
