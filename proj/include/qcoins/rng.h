#ifndef QCOINS_RNG_H
#define QCOINS_RNG_H

#include <cstdint>
#include <random>

namespace qcoins {

using Rng = std::mt19937_64;

/// Independent stream for trial `index` under `master_seed` (splitmix64 mixing).
uint64_t derive_seed(uint64_t master_seed, uint64_t index);
Rng trial_rng(uint64_t master_seed, uint64_t index);

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
double uniform01(Rng &rng);
bool bernoulli(Rng &rng, double p);

}  // namespace qcoins

#endif
