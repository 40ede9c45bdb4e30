#include "dpmlap/rng.hpp"

#include <algorithm>

namespace dpmlap {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t root, std::string_view label) {
  std::uint64_t h = splitmix64(root);
  for (unsigned char c : label) h = splitmix64(h ^ c);
  return h;
}

Rng make_rng(std::uint64_t root, std::string_view label) {
  return Rng(derive_seed(root, label));
}

double draw_uniform(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return u(rng);
}

double draw_normal(Rng& rng) {
  std::normal_distribution<double> z(0.0, 1.0);
  return z(rng);
}

double draw_gamma(Rng& rng, double shape, double rate) {
  std::gamma_distribution<double> g(shape, 1.0 / rate);
  return g(rng);
}

double draw_beta(Rng& rng, double a, double b) {
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  double v = (x + y > 0.0) ? x / (x + y) : 0.5;
  // keep sticks strictly inside (0,1); shape parameters < 1 can underflow
  v = std::min(std::max(v, 1e-300), 1.0 - 1e-16);
  return v;
}

double draw_student_t(Rng& rng, double nu) {
  std::student_t_distribution<double> t(nu);
  return t(rng);
}

}  // namespace dpmlap
