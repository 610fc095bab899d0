#include <random>

#include "qcoin/kernels.hpp"

namespace qcoin::kernels {

namespace {

std::uint64_t count_shard(const PhotonSource& source, std::uint64_t n_pulses, std::uint64_t seed,
                          std::uint64_t shard) {
  const std::uint64_t begin = n_pulses * shard / kFillShards;
  const std::uint64_t end = n_pulses * (shard + 1) / kFillShards;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(shard)};
  std::mt19937_64 rng(seq);
  std::uint64_t filled = 0;
  for (std::uint64_t i = begin; i < end; ++i)
    if (source.sample(rng) > 0) ++filled;
  return filled;
}

}  // namespace

std::uint64_t count_filled_serial(const PhotonSource& source, std::uint64_t n_pulses,
                                  std::uint64_t seed) {
  std::uint64_t filled = 0;
  for (std::uint64_t shard = 0; shard < kFillShards; ++shard)
    filled += count_shard(source, n_pulses, seed, shard);
  return filled;
}

std::uint64_t count_filled_omp(const PhotonSource& source, std::uint64_t n_pulses,
                               std::uint64_t seed) {
  std::uint64_t filled = 0;
  const auto shards = static_cast<std::int64_t>(kFillShards);
#pragma omp parallel for reduction(+ : filled) schedule(dynamic, 4)
  for (std::int64_t shard = 0; shard < shards; ++shard)
    filled += count_shard(source, n_pulses, seed, static_cast<std::uint64_t>(shard));
  return filled;
}

}  // namespace qcoin::kernels
