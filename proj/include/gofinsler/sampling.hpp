#pragma once

// Deterministic direction sampling. Point n of the R_d low-discrepancy
// sequence depends only on (dim, seed, n), so asking for more samples only
// appends to the list.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <vector>

namespace gofinsler {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Positive root of x^(d+1) = x + 1.
inline double generalized_golden_ratio(std::size_t d) {
  double x = 2.0;
  for (int i = 0; i < 64; ++i) x = std::pow(1.0 + x, 1.0 / static_cast<double>(d + 1));
  return x;
}

}  // namespace detail

/// Points of [-1, 1]^dim: 2 * frac(shift + n * alpha) - 1.
class DirectionSequence {
 public:
  DirectionSequence(std::size_t dim, std::uint64_t seed) : dim_(dim), alpha_(dim), shift_(dim) {
    const double phi = detail::generalized_golden_ratio(dim);
    std::uint64_t state = seed;
    for (std::size_t i = 0; i < dim; ++i) {
      alpha_[i] = std::fmod(1.0 / std::pow(phi, static_cast<double>(i + 1)), 1.0);
      shift_[i] = static_cast<double>(detail::splitmix64(state) >> 11) * 0x1.0p-53;
    }
  }

  Eigen::VectorXd operator()(std::uint64_t n) const {
    Eigen::VectorXd x(static_cast<Eigen::Index>(dim_));
    for (std::size_t i = 0; i < dim_; ++i) {
      const long double t = static_cast<long double>(shift_[i]) +
                            static_cast<long double>(n + 1) * static_cast<long double>(alpha_[i]);
      const double frac = static_cast<double>(t - std::floor(t));
      x(static_cast<Eigen::Index>(i)) = 2.0 * frac - 1.0;
    }
    return x;
  }

 private:
  std::size_t dim_;
  std::vector<double> alpha_, shift_;
};

/// Basis vectors e_i, then pairwise sums e_i + e_j (i < j).
inline std::vector<Eigen::VectorXd> basis_and_pair_directions(std::size_t dim) {
  std::vector<Eigen::VectorXd> out;
  const auto n = static_cast<Eigen::Index>(dim);
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(Eigen::VectorXd::Unit(n, i));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) out.push_back(Eigen::VectorXd::Unit(n, i) + Eigen::VectorXd::Unit(n, j));
  return out;
}

/// `count` quasi-random directions, optionally preceded by the basis and pair directions.
inline std::vector<Eigen::VectorXd> sample_directions(std::size_t dim, std::size_t count, std::uint64_t seed,
                                                      bool include_basis_pairs) {
  std::vector<Eigen::VectorXd> out;
  if (dim == 0) return out;
  if (include_basis_pairs) out = basis_and_pair_directions(dim);
  const DirectionSequence seq(dim, seed);
  for (std::size_t n = 0; n < count; ++n) {
    Eigen::VectorXd x = seq(n);
    if (x.norm() < 1e-6) x = Eigen::VectorXd::Unit(static_cast<Eigen::Index>(dim), 0);
    out.push_back(x);
  }
  return out;
}

}  // namespace gofinsler
