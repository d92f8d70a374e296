#pragma once

#include <cstddef>
#include <cstdint>

#include "protoselect/dataset.hpp"

namespace protoselect {

/// Isotropic Gaussian blobs, one per class. Centers are uniform in
/// [0, extent]^dims; every coordinate gets N(0, spread^2) noise. Labels are
/// dealt round-robin so class sizes differ by at most one. Output depends only
/// on the spec (portable RNG).
struct BlobSpec {
  std::size_t size = 20000;
  std::size_t classes = 10;
  std::size_t dims = 16;
  double spread = 0.5;
  double extent = 10.0;
  std::uint64_t seed = 42;
};

Dataset make_blobs(const BlobSpec& spec);

}  // namespace protoselect
