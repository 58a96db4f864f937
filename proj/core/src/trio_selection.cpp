// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#include "facegen/trio_selection.hpp"

#include <algorithm>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <string>

#include "facegen/parallel.hpp"

namespace facegen {
namespace {

double score_rows(const Eigen::MatrixXd& g, Eigen::Index i, Eigen::Index j, Eigen::Index k) {
  std::array<double, 6> terms{g(i, j), g(j, i), g(i, k), g(k, i), g(j, k), g(k, j)};
  std::sort(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += t;
  return sum / 6.0;
}

}  // namespace

bool ranks_before(const TrioScore& a, const TrioScore& b) {
  if (a.shape_difference != b.shape_difference) return a.shape_difference > b.shape_difference;
  return a.ids < b.ids;
}

TrioScore trio_score(const PairwiseEnergyTable& table, std::int64_t i, std::int64_t j, std::int64_t k) {
  if (i == j || j == k || i == k)
    throw std::invalid_argument("trio identities must be distinct: (" + std::to_string(i) + ", " +
                                std::to_string(j) + ", " + std::to_string(k) + ")");
  TrioScore out;
  out.category = table.category;
  out.ids = {i, j, k};
  std::sort(out.ids.begin(), out.ids.end());
  const auto r = [&](std::int64_t id) { return static_cast<Eigen::Index>(table.index_of(id)); };
  out.shape_difference = score_rows(table.gamma, r(out.ids[0]), r(out.ids[1]), r(out.ids[2]));
  return out;
}

std::uint64_t trio_count(std::uint64_t n) {
  if (n < 3) return 0;
  return n * (n - 1) * (n - 2) / 6;
}

std::vector<TrioScore> select_top_trios(const PairwiseEnergyTable& table, std::size_t max_trios,
                                        unsigned workers) {
  const auto n = static_cast<Eigen::Index>(table.size());
  if (n < 3) throw std::invalid_argument("trio selection needs at least 3 faces");
  if (max_trios == 0) return {};

  // Worst retained trio on top, so it is the one evicted.
  const auto heap_order = [](const TrioScore& a, const TrioScore& b) { return ranks_before(a, b); };
  using Heap = std::priority_queue<TrioScore, std::vector<TrioScore>, decltype(heap_order)>;

  const auto outer = static_cast<std::size_t>(n - 2);
  std::vector<std::vector<TrioScore>> partial(outer);
  parallel_for(outer, workers, [&](std::size_t first) {
    Heap heap(heap_order);
    const auto i = static_cast<Eigen::Index>(first);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      for (Eigen::Index k = j + 1; k < n; ++k) {
        TrioScore candidate;
        candidate.category = table.category;
        candidate.ids = {table.identities[static_cast<std::size_t>(i)], table.identities[static_cast<std::size_t>(j)],
                         table.identities[static_cast<std::size_t>(k)]};
        candidate.shape_difference = score_rows(table.gamma, i, j, k);
        if (heap.size() < max_trios) {
          heap.push(candidate);
        } else if (ranks_before(candidate, heap.top())) {
          heap.pop();
          heap.push(candidate);
        }
      }
    }
    auto& out = partial[first];
    out.reserve(heap.size());
    while (!heap.empty()) {
      out.push_back(heap.top());
      heap.pop();
    }
  });

  std::vector<TrioScore> merged;
  for (auto& p : partial) merged.insert(merged.end(), p.begin(), p.end());
  const std::size_t keep = std::min(max_trios, merged.size());
  std::partial_sort(merged.begin(), merged.begin() + static_cast<std::ptrdiff_t>(keep), merged.end(), ranks_before);
  merged.resize(keep);
  return merged;
}

void write_trio_csv(const std::vector<TrioScore>& trios, std::ostream& out) {
  const auto prec = out.precision(17);
  out << "category,i,j,k,D\n";
  for (const auto& t : trios)
    out << t.category.name() << ',' << t.ids[0] << ',' << t.ids[1] << ',' << t.ids[2] << ',' << t.shape_difference
        << '\n';
  out.precision(prec);
}

}  // namespace facegen
