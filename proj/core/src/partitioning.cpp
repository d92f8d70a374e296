#include "protoselect/partitioning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace protoselect {

double GridSpec::lower(std::size_t j, std::uint32_t index) const {
  return mins[j] + static_cast<double>(index) * ranges[j];
}

double GridSpec::upper(std::size_t j, std::uint32_t index) const {
  return mins[j] + static_cast<double>(index + 1) * ranges[j];
}

std::size_t PartitionKeyHash::operator()(const PartitionKey& key) const noexcept {
  // FNV-1a over the index words.
  std::uint64_t h = 1469598103934665603ull;
  for (std::uint32_t x : key.indices) {
    h ^= x;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

GridSpec grid_spec(const Dataset& points, std::size_t n) {
  if (points.empty()) throw std::invalid_argument("grid_spec: empty point set");
  if (n == 0) throw std::invalid_argument("grid_spec: n must be at least 1");
  const std::size_t m = points.dim();
  std::vector<double> lo(m, std::numeric_limits<double>::infinity());
  std::vector<double> hi(m, -std::numeric_limits<double>::infinity());
  for (std::size_t r = 0; r < points.size(); ++r) {
    const auto v = points.values(r);
    for (std::size_t j = 0; j < m; ++j) {
      lo[j] = std::min(lo[j], v[j]);
      hi[j] = std::max(hi[j], v[j]);
    }
  }
  GridSpec spec;
  spec.n = n;
  spec.mins = lo;
  spec.ranges.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    spec.ranges[j] = std::abs(hi[j] - lo[j]) / static_cast<double>(n);
  }
  return spec;
}

std::uint32_t interval_index(double v, double min, double range,
                             std::size_t n) noexcept {
  if (!(range > 0.0)) return 0;
  const double x = std::floor((v - min) / range);
  if (!(x > 0.0)) return 0;
  const double last = static_cast<double>(n - 1);
  return static_cast<std::uint32_t>(std::min(x, last));
}

PartitionKey cell_of(const GridSpec& spec, std::span<const double> values) {
  PartitionKey key;
  key.indices.resize(spec.dim());
  for (std::size_t j = 0; j < spec.dim(); ++j) {
    key.indices[j] = interval_index(values[j], spec.mins[j], spec.ranges[j], spec.n);
  }
  return key;
}

PartitionSet partition(const Dataset& points, std::size_t n) {
  PartitionSet out;
  out.source = points.name();
  out.spec = grid_spec(points, n);

  std::unordered_map<PartitionKey, std::vector<std::size_t>, PartitionKeyHash> region;
  for (std::size_t r = 0; r < points.size(); ++r) {
    region[cell_of(out.spec, points.values(r))].push_back(r);
  }
  out.groups.reserve(region.size());
  for (auto& [key, rows] : region) {
    out.groups.push_back({key, std::move(rows)});
  }
  std::sort(out.groups.begin(), out.groups.end(),
            [](const PartitionGroup& a, const PartitionGroup& b) { return a.key < b.key; });
  return out;
}

Prototype extract_prototype(const Dataset& points, std::span<const std::size_t> rows,
                            PartitionKey source_key) {
  if (rows.empty()) throw std::invalid_argument("extract_prototype: empty member set");
  Prototype p;
  p.label = points.label(rows.front());
  p.member_count = rows.size();
  p.source_key = std::move(source_key);
  p.values.assign(points.dim(), 0.0);
  for (std::size_t r : rows) {
    if (points.label(r) != p.label) {
      throw std::invalid_argument("extract_prototype: members carry different labels");
    }
    const auto v = points.values(r);
    for (std::size_t j = 0; j < v.size(); ++j) p.values[j] += v[j];
  }
  const double count = static_cast<double>(rows.size());
  for (double& x : p.values) x /= count;
  return p;
}

std::vector<Prototype> psasa(const Dataset& points, std::size_t n) {
  const PartitionSet cells = partition(points, n);
  std::vector<Prototype> out;
  std::vector<std::vector<std::size_t>> by_label(points.label_names().size());
  for (const auto& group : cells.groups) {
    for (auto& rows : by_label) rows.clear();
    for (std::size_t r : group.rows) by_label[points.label(r)].push_back(r);
    // Labels absent from this cell produce no centroid.
    for (const auto& rows : by_label) {
      if (!rows.empty()) out.push_back(extract_prototype(points, rows, group.key));
    }
  }
  return out;
}

Dataset prototypes_to_dataset(std::span<const Prototype> prototypes, const Dataset& like,
                              std::string name) {
  Dataset out = like.empty_like(std::move(name));
  out.reserve(prototypes.size());
  InstanceId next = 0;
  for (const auto& p : prototypes) out.add(p.values, p.label, next++);
  return out;
}

std::vector<std::size_t> snap_to_instances(std::span<const Prototype> prototypes,
                                           const Dataset& points) {
  std::vector<std::size_t> rows;
  rows.reserve(prototypes.size());
  for (const auto& p : prototypes) {
    if (p.values.size() != points.dim()) {
      throw std::invalid_argument("snap_to_instances: dimension mismatch");
    }
    std::size_t best = points.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < points.size(); ++r) {
      if (points.label(r) != p.label) continue;
      const double d = squared_distance(p.values.data(), points.values(r).data(), points.dim());
      if (best == points.size() || d < best_d ||
          (d == best_d && points.id(r) < points.id(best))) {
        best = r;
        best_d = d;
      }
    }
    if (best == points.size()) {
      throw std::invalid_argument("snap_to_instances: no instance carries label " +
                                  std::to_string(p.label));
    }
    rows.push_back(best);
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return rows;
}

std::string partition_to_json(const PartitionSet& partitions, const Dataset& points) {
  nlohmann::ordered_json doc;
  doc["source"] = partitions.source;
  doc["n"] = partitions.spec.n;
  doc["mins"] = partitions.spec.mins;
  doc["ranges"] = partitions.spec.ranges;
  auto cells = nlohmann::ordered_json::array();
  for (const auto& group : partitions.groups) {
    std::vector<std::size_t> counts(points.label_names().size(), 0);
    for (std::size_t r : group.rows) ++counts[points.label(r)];
    nlohmann::ordered_json labels = nlohmann::ordered_json::object();
    for (Label l = 0; l < counts.size(); ++l) {
      if (counts[l]) labels[points.label_name(l)] = counts[l];
    }
    nlohmann::ordered_json cell;
    cell["key"] = group.key.indices;
    cell["count"] = group.rows.size();
    cell["labels"] = std::move(labels);
    cells.push_back(std::move(cell));
  }
  doc["cells"] = std::move(cells);
  return doc.dump(2);
}

}  // namespace protoselect
