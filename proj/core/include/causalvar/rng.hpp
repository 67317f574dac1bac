#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "causalvar/errors.hpp"

namespace causalvar {

// Splittable counter-style generator built on the splitmix64 mixer.
// Streams are keyed by (seed, stream_id); distinct keys give decorrelated
// sequences, so entities, replicates and benchmark runs can each own a
// substream and results stay bit-identical regardless of thread count or
// interleaving. Not suitable for cryptography.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Derives the starting state for substream `stream` of `seed`.
  static std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream) {
    return mix(mix(seed) ^ (stream * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL));
  }

  static SplitMix64 for_stream(std::uint64_t seed, std::uint64_t stream) {
    return SplitMix64(stream_key(seed, stream));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on (0, 1]; never 0 so log() stays finite.
  double next_uniform() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the pair partner is cached.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_uniform();
    double u2 = next_uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Draws correlated Gaussian vectors x = S z with S the symmetric PSD square
// root of the covariance, z iid standard normal. Accepts semidefinite
// covariances (zero noise included).
class GaussianSampler {
 public:
  explicit GaussianSampler(const Eigen::MatrixXd& covariance) {
    if (covariance.rows() != covariance.cols()) {
      throw domain_error("GaussianSampler: covariance must be square");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(covariance);
    if (es.info() != Eigen::Success) {
      throw numerical_error("GaussianSampler: eigendecomposition failed");
    }
    // Clamp small negative eigenvalues from roundoff; reject real indefiniteness.
    Eigen::VectorXd lam = es.eigenvalues();
    const double floor = -1e-10 * std::max(1.0, lam.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      if (lam[i] < floor) {
        throw domain_error("GaussianSampler: covariance is not positive semidefinite");
      }
      lam[i] = std::sqrt(std::max(lam[i], 0.0));
    }
    factor_ = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
  }

  Eigen::VectorXd draw(SplitMix64& rng) const {
    Eigen::VectorXd z(factor_.rows());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.next_normal();
    return factor_ * z;
  }

  const Eigen::MatrixXd& factor() const { return factor_; }

 private:
  Eigen::MatrixXd factor_;
};

}  // namespace causalvar
