#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "qimage/imagestats.hpp"
#include "qimage/inference.hpp"

namespace qimage {

inline constexpr const char* kRngAlgorithm = "mt19937_64/seed_seq(seed,block)";
inline constexpr std::size_t kSampleBlock = 4096;

enum class SampleModel { Auto, Poisson, Gaussian };

struct ImageSample {
  Eigen::VectorXd counts;  // Gaussian draws may be negative and are kept
  double q_true = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
};

// Draws images from fixed statistics. Sample i comes from block
// i / kSampleBlock whose engine is seeded with seed_seq{seed, block}, so the
// sequence does not depend on the number of worker threads.
class ImageSampler {
 public:
  ImageSampler(const ImageStatistics& stats, std::uint64_t seed,
               SampleModel model = SampleModel::Auto);

  bool poisson() const { return poisson_; }
  std::uint64_t seed() const { return seed_; }
  std::mt19937_64 block_engine(std::uint64_t block) const;
  // Draws the next image from `engine` into `out`.
  void draw(std::mt19937_64& engine, Eigen::VectorXd& out) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd factor_;  // cov = factor factor^T after eigenvalue floor
  std::uint64_t seed_;
  bool poisson_;
};

std::vector<ImageSample> sample_images(const ImageStatistics& stats, std::size_t count,
                                       std::uint64_t seed, unsigned jobs = 1,
                                       SampleModel model = SampleModel::Auto);

struct Calibration {
  double slope = 0.0;     // dS/dq at the linearization point
  double baseline = 0.0;  // S evaluated on the mean image
  double dx = 1.0;
};

Calibration calibrate(const ImageStatistics& stats, const Eigen::VectorXd& drho_dq,
                      const GainFunction& gain);
double estimate_position(const Eigen::VectorXd& counts, const GainFunction& gain,
                         const Calibration& calibration);
double estimate_position(const ImageSample& sample, const GainFunction& gain,
                         const Calibration& calibration);

struct MonteCarloResult {
  std::size_t count = 0;
  std::uint64_t seed = 0;
  double mean_q = 0.0;
  double var_q = 0.0;
  double var_q_stderr = 0.0;   // from the fourth central moment
  double fisher = 0.0;
  double ratio = 0.0;          // var_q * fisher
  double ratio_stderr = 0.0;
  bool poisson = false;
};

// Streams `count` images, estimates q for each with the linear filter and
// reduces the statistics block by block in a fixed order.
MonteCarloResult run_crb_experiment(const ImageStatistics& stats, const Eigen::VectorXd& drho_dq,
                                    const GainFunction& gain, double fisher, std::size_t count,
                                    std::uint64_t seed, unsigned jobs = 1,
                                    SampleModel model = SampleModel::Auto);

void to_json(nlohmann::json& j, const MonteCarloResult& r);

}  // namespace qimage
