#include "qimage/simulate.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qimage/errors.hpp"
#include "qimage/parallel.hpp"

namespace qimage {

ImageSampler::ImageSampler(const ImageStatistics& stats, std::uint64_t seed, SampleModel model)
    : mean_(stats.rho_bar), seed_(seed) {
  poisson_ = model == SampleModel::Poisson ||
             (model == SampleModel::Auto && stats.is_poisson());
  if (poisson_) {
    if ((mean_.array() < 0.0).any()) throw InvalidParameter("Poisson means must be non-negative");
    return;
  }
  const Eigen::MatrixXd P = 0.5 * (stats.cov + stats.cov.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(P);
  if (eig.info() != Eigen::Success) {
    throw NotPositiveDefinite("covariance factorization failed", std::nan(""));
  }
  const Eigen::VectorXd lam = eig.eigenvalues();
  const double lmin = lam.minCoeff();
  if (lmin < -1e-9 * std::abs(P.trace())) {
    std::ostringstream msg;
    msg << "covariance has a negative eigenvalue " << lmin << " beyond the floor";
    throw NotPositiveDefinite(msg.str(), lmin);
  }
  factor_ = eig.eigenvectors() * lam.cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

std::mt19937_64 ImageSampler::block_engine(std::uint64_t block) const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  return std::mt19937_64(seq);
}

void ImageSampler::draw(std::mt19937_64& engine, Eigen::VectorXd& out) const {
  const Eigen::Index m = mean_.size();
  out.resize(m);
  if (poisson_) {
    for (Eigen::Index i = 0; i < m; ++i) {
      if (mean_(i) > 0.0) {
        std::poisson_distribution<long long> d(mean_(i));
        out(i) = static_cast<double>(d(engine));
      } else {
        out(i) = 0.0;
      }
    }
    return;
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(m);
  for (Eigen::Index i = 0; i < m; ++i) z(i) = normal(engine);
  out = mean_ + factor_ * z;
}

std::vector<ImageSample> sample_images(const ImageStatistics& stats, std::size_t count,
                                       std::uint64_t seed, unsigned jobs, SampleModel model) {
  const ImageSampler sampler(stats, seed, model);
  std::vector<ImageSample> out(count);
  const std::size_t blocks = (count + kSampleBlock - 1) / kSampleBlock;
  parallel_for(blocks, jobs, [&](std::size_t b) {
    auto engine = sampler.block_engine(b);
    const std::size_t end = std::min(count, (b + 1) * kSampleBlock);
    for (std::size_t i = b * kSampleBlock; i < end; ++i) {
      sampler.draw(engine, out[i].counts);
      out[i].q_true = stats.q;
      out[i].seed = seed;
      out[i].index = i;
    }
  });
  return out;
}

Calibration calibrate(const ImageStatistics& stats, const Eigen::VectorXd& drho_dq,
                      const GainFunction& gain) {
  Calibration c;
  c.dx = stats.grid.dx();
  c.slope = c.dx * gain.values.dot(drho_dq);
  c.baseline = c.dx * gain.values.dot(stats.rho_bar);
  if (!(std::abs(c.slope) > 0.0)) throw InvalidParameter("calibration slope is zero");
  return c;
}

double estimate_position(const Eigen::VectorXd& counts, const GainFunction& gain,
                         const Calibration& calibration) {
  if (!(std::abs(calibration.slope) > 0.0)) throw InvalidParameter("calibration slope is zero");
  if (counts.size() != gain.values.size()) throw InvalidParameter("sample and gain lengths differ");
  const double S = calibration.dx * gain.values.dot(counts);
  return (S - calibration.baseline) / calibration.slope;
}

double estimate_position(const ImageSample& sample, const GainFunction& gain,
                         const Calibration& calibration) {
  return estimate_position(sample.counts, gain, calibration);
}

namespace {

// Central moments up to fourth order of a block, combined pairwise.
struct Moments {
  double n = 0.0, mean = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;

  void add(double x) {
    const double n1 = n;
    n += 1.0;
    const double delta = x - mean;
    const double dn = delta / n;
    const double dn2 = dn * dn;
    const double t1 = delta * dn * n1;
    mean += dn;
    m4 += t1 * dn2 * (n * n - 3.0 * n + 3.0) + 6.0 * dn2 * m2 - 4.0 * dn * m3;
    m3 += t1 * dn * (n - 2.0) - 3.0 * dn * m2;
    m2 += t1;
  }

  void merge(const Moments& o) {
    if (o.n == 0.0) return;
    if (n == 0.0) {
      *this = o;
      return;
    }
    const double na = n, nb = o.n, nt = na + nb;
    const double d = o.mean - mean;
    const double d2 = d * d, d3 = d2 * d, d4 = d2 * d2;
    const double m2t = m2 + o.m2 + d2 * na * nb / nt;
    const double m3t = m3 + o.m3 + d3 * na * nb * (na - nb) / (nt * nt) +
                       3.0 * d * (na * o.m2 - nb * m2) / nt;
    const double m4t = m4 + o.m4 +
                       d4 * na * nb * (na * na - na * nb + nb * nb) / (nt * nt * nt) +
                       6.0 * d2 * (na * na * o.m2 + nb * nb * m2) / (nt * nt) +
                       4.0 * d * (na * o.m3 - nb * m3) / nt;
    n = nt;
    mean += d * nb / nt;
    m2 = m2t;
    m3 = m3t;
    m4 = m4t;
  }
};

}  // namespace

MonteCarloResult run_crb_experiment(const ImageStatistics& stats, const Eigen::VectorXd& drho_dq,
                                    const GainFunction& gain, double fisher, std::size_t count,
                                    std::uint64_t seed, unsigned jobs, SampleModel model) {
  if (count < 2) throw InvalidParameter("Monte Carlo needs at least two samples");
  if (!(fisher > 0.0)) throw InvalidParameter("Fisher information must be positive");
  const ImageSampler sampler(stats, seed, model);
  const Calibration cal = calibrate(stats, drho_dq, gain);
  const std::size_t blocks = (count + kSampleBlock - 1) / kSampleBlock;
  std::vector<Moments> partial(blocks);
  parallel_for(blocks, jobs, [&](std::size_t b) {
    auto engine = sampler.block_engine(b);
    Eigen::VectorXd img;
    const std::size_t end = std::min(count, (b + 1) * kSampleBlock);
    for (std::size_t i = b * kSampleBlock; i < end; ++i) {
      sampler.draw(engine, img);
      partial[b].add(estimate_position(img, gain, cal));
    }
  });
  Moments total;
  for (const auto& p : partial) total.merge(p);
  MonteCarloResult r;
  r.count = count;
  r.seed = seed;
  r.poisson = sampler.poisson();
  r.mean_q = total.mean;
  const double n = total.n;
  r.var_q = total.m2 / (n - 1.0);
  const double mu2 = total.m2 / n, mu4 = total.m4 / n;
  r.var_q_stderr = std::sqrt(std::max(0.0, (mu4 - (n - 3.0) / (n - 1.0) * mu2 * mu2) / n));
  r.fisher = fisher;
  r.ratio = r.var_q * fisher;
  r.ratio_stderr = r.var_q_stderr * fisher;
  return r;
}

void to_json(nlohmann::json& j, const MonteCarloResult& r) {
  j = {{"count", r.count},         {"seed", r.seed},
       {"mean_q", r.mean_q},       {"var_q", r.var_q},
       {"var_q_stderr", r.var_q_stderr}, {"fisher", r.fisher},
       {"ratio", r.ratio},         {"ratio_stderr", r.ratio_stderr},
       {"model", r.poisson ? "poisson" : "gaussian"},
       {"rng", kRngAlgorithm}};
}

}  // namespace qimage
