#include "dsub/baselines.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace dsub {

std::vector<Index> random_subsample(Index rows, Index n, Rng& rng) {
  if (n < 0 || n > rows) {
    throw Error("subsample size " + std::to_string(n) + " not in [0, " + std::to_string(rows) + "]");
  }
  std::vector<Index> order(static_cast<std::size_t>(rows));
  std::iota(order.begin(), order.end(), Index{0});
  for (Index i = 0; i < n; ++i) {
    std::uniform_int_distribution<Index> pick(i, rows - 1);
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(pick(rng))]);
  }
  order.resize(static_cast<std::size_t>(n));
  return order;
}

std::vector<Index> farthest_point_from(const Matrix& data, std::span<const Index> candidates, Index n,
                                       Index start) {
  const auto m = static_cast<Index>(candidates.size());
  if (n < 0 || n > m) throw Error("farthest point: more picks than candidates");
  std::vector<Index> picked;
  if (n == 0) return picked;
  if (start < 0 || start >= m) throw Error("farthest point: start out of range");
  picked.reserve(static_cast<std::size_t>(n));

  // squared distance from each candidate to its nearest picked point
  std::vector<double> nearest(static_cast<std::size_t>(m), std::numeric_limits<double>::infinity());
  std::vector<bool> taken(static_cast<std::size_t>(m), false);
  Index current = start;
  for (Index step = 0; step < n; ++step) {
    taken[static_cast<std::size_t>(current)] = true;
    picked.push_back(candidates[static_cast<std::size_t>(current)]);
    if (step + 1 == n) break;
    const auto anchor = data.row(candidates[static_cast<std::size_t>(current)]);
    Index best = -1;
    double best_dist = -1.0;
    for (Index c = 0; c < m; ++c) {
      const auto at = static_cast<std::size_t>(c);
      if (taken[at]) continue;
      nearest[at] = std::min(nearest[at], (data.row(candidates[at]) - anchor).squaredNorm());
      if (nearest[at] > best_dist) {
        best_dist = nearest[at];
        best = c;
      }
    }
    current = best;
  }
  return picked;
}

std::vector<Index> farthest_point_subsample(const Matrix& data, Index n, Index splits, Rng& rng) {
  const Index rows = data.rows();
  if (n < 0 || n > rows) {
    throw Error("subsample size " + std::to_string(n) + " not in [0, " + std::to_string(rows) + "]");
  }
  if (splits < 1) throw Error("splits must be >= 1");
  splits = std::min(splits, std::max<Index>(rows, 1));

  std::vector<Index> order(static_cast<std::size_t>(rows));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);

  // near-equal contiguous blocks of the shuffled order
  std::vector<std::span<const Index>> blocks;
  const Index base = rows / splits;
  const Index extra = rows % splits;
  Index offset = 0;
  for (Index b = 0; b < splits; ++b) {
    const Index size = base + (b < extra ? 1 : 0);
    blocks.emplace_back(order.data() + offset, static_cast<std::size_t>(size));
    offset += size;
  }

  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(n));
  Index carry = 0;
  for (Index b = 0; b < splits; ++b) {
    const Index quota = n / splits + (b < n % splits ? 1 : 0) + carry;
    const auto block_size = static_cast<Index>(blocks[static_cast<std::size_t>(b)].size());
    const Index take = std::min(quota, block_size);
    carry = quota - take;
    if (take == 0) continue;
    std::uniform_int_distribution<Index> seed_pick(0, block_size - 1);
    const auto chosen = farthest_point_from(data, blocks[static_cast<std::size_t>(b)], take, seed_pick(rng));
    out.insert(out.end(), chosen.begin(), chosen.end());
  }
  return out;
}

}  // namespace dsub
