#include "varprin/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace varprin {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : engine_(splitmix64(seed ^ splitmix64(stream + 1))) {}

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Eigen::VectorXd Rng::unit_vector(int dim) {
  Eigen::VectorXd v(dim);
  double n = 0.0;
  while (n < 1e-12) {
    for (int i = 0; i < dim; ++i) v[i] = normal();
    n = v.norm();
  }
  return v / n;
}

namespace {

std::vector<int> first_primes(int count) {
  std::vector<int> primes;
  for (int c = 2; static_cast<int>(primes.size()) < count; ++c) {
    bool prime = true;
    for (int p : primes) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

double radical_inverse(std::uint64_t index, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

}  // namespace

HaltonSequence::HaltonSequence(int dim, std::uint64_t seed) : shift_(dim) {
  Rng rng(seed, 0x4a17);
  for (int i = 0; i < dim; ++i) shift_[i] = rng.uniform();
}

Eigen::VectorXd HaltonSequence::point(std::uint64_t index) const {
  static const std::vector<int> primes = first_primes(256);
  const int dim = this->dim();
  if (dim > static_cast<int>(primes.size())) throw std::invalid_argument("Halton dimension too large");
  Eigen::VectorXd p(dim);
  for (int i = 0; i < dim; ++i) {
    double v = radical_inverse(index + 1, primes[i]) + shift_[i];
    p[i] = v - std::floor(v);
  }
  return p;
}

}  // namespace varprin
