#include "carpet/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <thread>

#include "carpet/dimensions.hpp"
#include "carpet/errors.hpp"

namespace carpet {

SelfAffineMeasure::SelfAffineMeasure(CarpetSpec spec, std::vector<double> weights)
    : spec_(std::move(spec)), profile_(column_profile(spec_)), weights_(std::move(weights)) {
  column_weights_.assign(profile_.M, 0.0);
  for (std::size_t d = 0; d < weights_.size(); ++d) column_weights_[profile_.digit_column[d]] += weights_[d];
  log_weights_.reserve(weights_.size());
  for (double p : weights_) log_weights_.push_back(std::log(p));
  log_column_weights_.reserve(column_weights_.size());
  for (double q : column_weights_) log_column_weights_.push_back(std::log(q));
}

SelfAffineMeasure SelfAffineMeasure::make(const CarpetSpec& spec, std::vector<double> weights) {
  if (weights.size() != spec.size()) {
    throw WeightError("expected " + std::to_string(spec.size()) + " weights, got " + std::to_string(weights.size()));
  }
  for (std::size_t d = 0; d < weights.size(); ++d) {
    if (!(weights[d] > 0.0 && weights[d] < 1.0)) {
      throw WeightError("weight " + std::to_string(d) + " = " + std::to_string(weights[d]) + " is not in (0, 1)");
    }
  }
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-9) {
    throw WeightError("weights sum to " + std::to_string(sum) + ", not 1 (tolerance 1e-9)");
  }
  for (double& p : weights) p /= sum;
  return SelfAffineMeasure(spec, std::move(weights));
}

SelfAffineMeasure make_measure(const CarpetSpec& spec, std::vector<double> weights) {
  return SelfAffineMeasure::make(spec, std::move(weights));
}

SelfAffineMeasure uniform_measure(const CarpetSpec& spec) {
  return make_measure(spec, std::vector<double>(spec.size(), 1.0 / static_cast<double>(spec.size())));
}

EntropyPair entropies(const SelfAffineMeasure& measure) {
  EntropyPair h;
  for (double p : measure.weights()) h.h_mu -= p * std::log(p);
  for (double q : measure.column_weights()) h.h_pi_mu -= q * std::log(q);
  return h;
}

double ly_dimension(const SelfAffineMeasure& measure) {
  const auto h = entropies(measure);
  const double lm = std::log(static_cast<double>(measure.spec().m()));
  const double ln = std::log(static_cast<double>(measure.spec().n()));
  return h.h_pi_mu / lm + (h.h_mu - h.h_pi_mu) / ln;
}

std::vector<double> mcmullen_raw_weights(const CarpetSpec& spec) {
  const auto profile = column_profile(spec);
  const double lm = std::log(static_cast<double>(spec.m()));
  const double ln = std::log(static_cast<double>(spec.n()));
  const double dim_h = dimension_report(profile, spec.m(), spec.n()).hausdorff;
  const double scale = std::exp(-dim_h * lm);
  std::vector<double> weights;
  weights.reserve(spec.size());
  for (std::size_t d = 0; d < spec.size(); ++d) {
    const auto count = static_cast<double>(profile.counts[profile.digit_column[d]]);
    weights.push_back(std::pow(count, lm / ln - 1.0) * scale);
  }
  return weights;
}

SelfAffineMeasure mcmullen_weights(const CarpetSpec& spec) { return make_measure(spec, mcmullen_raw_weights(spec)); }

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

// Inverse-CDF sampling on 53-bit uniforms; std::discrete_distribution is not
// reproducible across standard libraries.
class LetterSampler {
 public:
  explicit LetterSampler(const std::vector<double>& weights) {
    cdf_.reserve(weights.size());
    double acc = 0.0;
    for (double p : weights) cdf_.push_back(acc += p);
  }

  std::uint32_t operator()(std::mt19937_64& rng) const {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const auto index = static_cast<std::size_t>(it - cdf_.begin());
    return static_cast<std::uint32_t>(std::min(index, cdf_.size() - 1));
  }

 private:
  std::vector<double> cdf_;
};

}  // namespace

SymbolicWord sample_word(const SelfAffineMeasure& measure, std::size_t length, std::uint64_t seed) {
  if (length < 1) throw DepthError("sampled word length must be at least 1");
  const LetterSampler sampler(measure.weights());
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> letters(length);
  for (auto& letter : letters) letter = sampler(rng);
  return SymbolicWord(std::move(letters));
}

double approx_square_measure(const SelfAffineMeasure& measure, const SymbolicWord& word, int k) {
  if (k < 1) throw DepthError("approximate-square depth must be at least 1 (got " + std::to_string(k) + ")");
  const auto l = approx_depth(measure.spec().m(), measure.spec().n(), k);
  if (word.size() < static_cast<std::size_t>(l)) {
    throw DepthError("word of length " + std::to_string(word.size()) + " is shorter than l(k) = " +
                     std::to_string(l) + " for k = " + std::to_string(k));
  }
  check_word(measure.spec(), word);
  const auto& digit_column = measure.profile().digit_column;
  double log_mu = 0.0;
  for (int t = 0; t < k; ++t) log_mu += measure.log_weight(word[t]);
  for (std::int64_t t = k; t < l; ++t) log_mu += measure.log_column_weight(digit_column[word[t]]);
  return log_mu;
}

double approx_square_measure(const SelfAffineMeasure& measure, const ApproxSquare& square) {
  double log_mu = 0.0;
  for (auto d : square.prefix) log_mu += measure.log_weight(d);
  for (auto i : square.suffix) log_mu += measure.log_column_weight(i);
  return log_mu;
}

Estimate local_dimension_estimate(const SelfAffineMeasure& measure, int k, std::size_t samples, std::uint64_t seed,
                                  unsigned threads) {
  if (k < 1) throw DepthError("local dimension depth k must be at least 1 (got " + std::to_string(k) + ")");
  if (samples < 1) throw DomainError("local dimension estimate needs at least one sample");
  const auto l = static_cast<std::size_t>(approx_depth(measure.spec().m(), measure.spec().n(), k));
  const double scale = static_cast<double>(k) * std::log(static_cast<double>(measure.spec().n()));

  std::vector<double> values(samples);
  auto run_block = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto word = sample_word(measure, l, split_seed(seed, i));
      values[i] = -approx_square_measure(measure, word, k) / scale;
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(samples)));
  if (threads == 1) {
    run_block(0, samples);
  } else {
    std::vector<std::thread> pool;
    const std::size_t block = (samples + threads - 1) / threads;
    for (std::size_t begin = 0; begin < samples; begin += block) {
      pool.emplace_back(run_block, begin, std::min(samples, begin + block));
    }
    for (auto& t : pool) t.join();
  }

  Estimate e;
  e.method = "local-dim";
  e.samples = samples;
  double sum = 0.0;
  for (double v : values) sum += v;
  e.value = sum / static_cast<double>(samples);
  if (samples > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - e.value) * (v - e.value);
    e.std_error = std::sqrt(ss / static_cast<double>(samples - 1) / static_cast<double>(samples));
  }
  return e;
}

double local_dimension_expectation(const SelfAffineMeasure& measure, int k) {
  if (k < 1) throw DepthError("local dimension depth k must be at least 1 (got " + std::to_string(k) + ")");
  const auto h = entropies(measure);
  const auto l = approx_depth(measure.spec().m(), measure.spec().n(), k);
  const double kd = static_cast<double>(k);
  return (kd * h.h_mu + static_cast<double>(l - k) * h.h_pi_mu) /
         (kd * std::log(static_cast<double>(measure.spec().n())));
}

}  // namespace carpet
