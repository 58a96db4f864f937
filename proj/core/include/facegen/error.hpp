// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace facegen {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent face data (bad files, broken correspondence).
class CorpusError : public Error {
 public:
  using Error::Error;
};

/// A linear system that cannot be solved: duplicate or coplanar TPS samples,
/// or scattered data that does not pin the grid regularizer's null space.
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

/// Geometric preconditions violated (degenerate normals, undersized grids,
/// genuinely negative bending energy).
class GeometryError : public Error {
 public:
  using Error::Error;
};

class PipelineError : public Error {
 public:
  using Error::Error;
};

}  // namespace facegen
