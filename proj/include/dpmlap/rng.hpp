#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dpmlap {

using Rng = std::mt19937_64;

// Stage seeds derive from one root seed hashed with a stage label, so
// toggling one method on/off never perturbs another method's stream.
std::uint64_t derive_seed(std::uint64_t root, std::string_view label);

Rng make_rng(std::uint64_t root, std::string_view label);

double draw_uniform(Rng& rng);  // U(0,1)
double draw_normal(Rng& rng);   // N(0,1)
double draw_gamma(Rng& rng, double shape, double rate);
double draw_beta(Rng& rng, double a, double b);
double draw_student_t(Rng& rng, double nu);

}  // namespace dpmlap
