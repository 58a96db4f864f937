// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "facegen/bending_energy.hpp"

namespace facegen {

using TrioIds = std::array<std::int64_t, 3>;

struct TrioScore {
  ExpressionLabel category = ExpressionLabel::neutral();
  TrioIds ids{};  // strictly increasing
  double shape_difference = 0.0;

  friend bool operator==(const TrioScore&, const TrioScore&) = default;
};

/// Canonical ranking: larger shape difference first, then ascending ids.
bool ranks_before(const TrioScore& a, const TrioScore& b);

/// Mean of the six directed energies among three distinct identities. The six
/// terms are summed in sorted order, so the result is bitwise independent of
/// argument order and equal multisets of energies give equal scores.
TrioScore trio_score(const PairwiseEnergyTable& table, std::int64_t i, std::int64_t j,
                     std::int64_t k);

/// C(n, 3).
std::uint64_t trio_count(std::uint64_t n);

/// The min(M, C(N,3)) highest-ranked trios, in ranking order. Enumeration is
/// split over `workers` with bounded per-worker buffers; the merged result is
/// identical for any worker count.
std::vector<TrioScore> select_top_trios(const PairwiseEnergyTable& table, std::size_t max_trios,
                                        unsigned workers = 1);

/// `category,i,j,k,D` rows with a header.
void write_trio_csv(const std::vector<TrioScore>& trios, std::ostream& out);

}  // namespace facegen
