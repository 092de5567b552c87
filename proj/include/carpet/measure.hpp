#pragma once

// Bernoulli (self-affine) measures on a carpet.

#include <cstdint>
#include <vector>

#include "carpet/carpet.hpp"
#include "carpet/estimate.hpp"

namespace carpet {

class SelfAffineMeasure {
 public:
  // Throws WeightError on wrong length, an entry outside (0, 1), or |sum - 1| > 1e-9.
  // Accepted weights are renormalized to sum to one.
  static SelfAffineMeasure make(const CarpetSpec& spec, std::vector<double> weights);

  const CarpetSpec& spec() const noexcept { return spec_; }
  const ColumnProfile& profile() const noexcept { return profile_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  // q_i: total weight of the i-th non-empty column.
  const std::vector<double>& column_weights() const noexcept { return column_weights_; }

  double log_weight(std::uint32_t digit) const { return log_weights_[digit]; }
  double log_column_weight(std::size_t column) const { return log_column_weights_[column]; }

 private:
  SelfAffineMeasure(CarpetSpec spec, std::vector<double> weights);

  CarpetSpec spec_;
  ColumnProfile profile_;
  std::vector<double> weights_;
  std::vector<double> column_weights_;
  std::vector<double> log_weights_;
  std::vector<double> log_column_weights_;
};

SelfAffineMeasure make_measure(const CarpetSpec& spec, std::vector<double> weights);
SelfAffineMeasure uniform_measure(const CarpetSpec& spec);

struct EntropyPair {
  double h_mu = 0.0;     // nats
  double h_pi_mu = 0.0;  // entropy of the column projection, nats
};

EntropyPair entropies(const SelfAffineMeasure& measure);

// h(pi mu) / log m + (h(mu) - h(pi mu)) / log n.
double ly_dimension(const SelfAffineMeasure& measure);

// N_i^(log m / log n - 1) / m^(dim_H F) per digit, before renormalization.
std::vector<double> mcmullen_raw_weights(const CarpetSpec& spec);
SelfAffineMeasure mcmullen_weights(const CarpetSpec& spec);

// Seed of the index-th independent stream derived from a base seed (splitmix64).
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

// i.i.d. letters from the measure's weights, driven by mt19937_64. Throws DepthError if length < 1.
SymbolicWord sample_word(const SelfAffineMeasure& measure, std::size_t length, std::uint64_t seed);

// log mu(Q) for the depth-k approximate square containing the point coded by word.
// Throws DepthError if the word is shorter than l(k).
double approx_square_measure(const SelfAffineMeasure& measure, const SymbolicWord& word, int k);
double approx_square_measure(const SelfAffineMeasure& measure, const ApproxSquare& square);

// Monte Carlo mean and standard error of -log mu(Q) / (k log n). Sample i uses
// split_seed(seed, i), so the result does not depend on the thread count.
Estimate local_dimension_estimate(const SelfAffineMeasure& measure, int k, std::size_t samples, std::uint64_t seed,
                                  unsigned threads = 1);

// Exact expectation of the estimator: (k h(mu) + (l - k) h(pi mu)) / (k log n).
double local_dimension_expectation(const SelfAffineMeasure& measure, int k);

}  // namespace carpet
