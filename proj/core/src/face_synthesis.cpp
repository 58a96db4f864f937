// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#include "facegen/face_synthesis.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "facegen/error.hpp"
#include "facegen/hashing.hpp"

namespace facegen {

std::int64_t synthetic_identity(const ExpressionLabel& category, const TrioIds& ids) {
  TrioIds sorted = ids;
  std::sort(sorted.begin(), sorted.end());
  StableHasher h;
  h.add(category.name());
  for (auto id : sorted) h.add(id);
  return static_cast<std::int64_t>(h.digest() >> 1);
}

Face synthesize_face(const Corpus& corpus, const TrioScore& trio) {
  std::array<const Face*, 3> inputs{};
  for (std::size_t m = 0; m < 3; ++m) {
    inputs[m] = corpus.find(trio.category, trio.ids[m]);
    if (inputs[m] == nullptr)
      throw CorpusError("no face for identity " + std::to_string(trio.ids[m]) + " in " + trio.category.name());
  }

  Face out;
  out.identity = synthetic_identity(trio.category, trio.ids);
  out.expression = trio.category;
  const std::size_t count = corpus.vertex_count();
  out.vertices.resize(count);
  for (std::size_t p = 0; p < count; ++p) {
    for (int d = 0; d < 3; ++d) {
      std::array<double, 3> v{inputs[0]->vertices[p][d], inputs[1]->vertices[p][d], inputs[2]->vertices[p][d]};
      std::sort(v.begin(), v.end());
      const double mean = v[0] + ((v[1] - v[0]) + (v[2] - v[0])) / 3.0;
      out.vertices[p][d] = std::clamp(mean, v[0], v[2]);
    }
  }
  return out;
}

}  // namespace facegen
