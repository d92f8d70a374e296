#include "protoselect/synthetic.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "random.hpp"

namespace protoselect {

Dataset make_blobs(const BlobSpec& spec) {
  if (spec.size == 0 || spec.classes == 0 || spec.dims == 0) {
    throw std::invalid_argument("make_blobs: size, classes and dims must be positive");
  }
  if (!(spec.spread >= 0.0) || !(spec.extent >= 0.0)) {
    throw std::invalid_argument("make_blobs: spread and extent must be non-negative");
  }
  std::mt19937_64 rng(spec.seed);
  std::vector<double> centers(spec.classes * spec.dims);
  for (double& c : centers) c = spec.extent * detail::uniform01(rng);

  std::vector<std::string> names;
  for (std::size_t c = 0; c < spec.classes; ++c) names.push_back("c" + std::to_string(c));
  Dataset ds("blobs", spec.dims, std::move(names));
  ds.reserve(spec.size);

  detail::NormalSource normal;
  std::vector<double> x(spec.dims);
  for (std::size_t i = 0; i < spec.size; ++i) {
    const std::size_t c = i % spec.classes;
    for (std::size_t j = 0; j < spec.dims; ++j) {
      x[j] = centers[c * spec.dims + j] + spec.spread * normal(rng);
    }
    ds.add(x, static_cast<Label>(c), static_cast<InstanceId>(i));
  }
  return ds;
}

}  // namespace protoselect
