#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace protoselect {

/// Interned class label. Indexes into Dataset::label_names().
using Label = std::uint32_t;

/// Stable ordinal of an instance within the dataset it was loaded from.
using InstanceId = std::uint32_t;

/// Raised for malformed input data. Row and column are 1-based when known.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what,
                     std::optional<std::size_t> row = std::nullopt,
                     std::optional<std::size_t> column = std::nullopt);

  std::optional<std::size_t> row() const noexcept { return row_; }
  std::optional<std::size_t> column() const noexcept { return column_; }

 private:
  std::optional<std::size_t> row_;
  std::optional<std::size_t> column_;
};

/// Non-owning view of one instance.
struct InstanceView {
  std::span<const double> values;
  Label label;
  InstanceId id;
};

/// Ordered collection of labeled m-dimensional points.
///
/// Values are stored row-major in one contiguous buffer. Labels are interned
/// against a vocabulary (label_names) that subsets share with their parent, so
/// a label id means the same class in a training fold, its prototypes and the
/// held-out fold. Rows are positions; ids are the stable identities used for
/// tie-breaking and for tracking which fold an instance belongs to.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::string name, std::size_t dim,
          std::vector<std::string> label_names = {});

  /// Appends an instance. Throws DataError on dimension mismatch, non-finite
  /// values or an unknown label.
  void add(std::span<const double> values, Label label, InstanceId id);

  /// Interns `name` into the vocabulary, returning its label id.
  Label intern_label(std::string_view name);

  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  std::size_t dim() const noexcept { return dim_; }

  std::span<const double> values(std::size_t row) const {
    return {values_.data() + row * dim_, dim_};
  }
  Label label(std::size_t row) const { return labels_[row]; }
  InstanceId id(std::size_t row) const { return ids_[row]; }
  InstanceView operator[](std::size_t row) const {
    return {values(row), labels_[row], ids_[row]};
  }

  std::span<const double> raw_values() const noexcept { return values_; }
  std::span<const Label> label_column() const noexcept { return labels_; }
  std::span<const InstanceId> id_column() const noexcept { return ids_; }

  const std::vector<std::string>& label_names() const noexcept {
    return label_names_;
  }
  const std::string& label_name(Label l) const { return label_names_.at(l); }

  /// Distinct labels occurring in the instances, ascending.
  std::vector<Label> labels() const;
  std::size_t class_count() const { return labels().size(); }

  /// Rows copied in the given order; ids and vocabulary are preserved.
  Dataset subset(std::span<const std::size_t> rows) const;

  /// Empty dataset with the same dim and vocabulary.
  Dataset empty_like(std::string name) const;

  void reserve(std::size_t rows);

 private:
  std::string name_;
  std::size_t dim_ = 0;
  std::vector<double> values_;
  std::vector<Label> labels_;
  std::vector<InstanceId> ids_;
  std::vector<std::string> label_names_;
};

struct CsvOptions {
  /// Column holding the class: a header name, a 0-based index, or "last".
  std::string label_column = "last";
  /// Dataset name; defaults to the file stem.
  std::string name;
};

/// Parses comma-separated text. A header row is recognised when the label
/// cell of the first row is non-numeric and at least one feature cell fails
/// to parse. Ids follow row order from 0; labels are interned in order of
/// first appearance.
Dataset parse_csv(std::istream& in, const CsvOptions& options = {});
Dataset load_csv(const std::filesystem::path& path, CsvOptions options = {});

/// Writes the dataset as CSV (features then label name), 17 significant
/// digits, with an optional header line.
void write_csv(const Dataset& ds, std::ostream& out,
               std::span<const std::string> header = {});

/// Euclidean distance. Throws std::invalid_argument on dimension mismatch.
double distance(std::span<const double> a, std::span<const double> b);

/// Unchecked squared Euclidean distance for inner loops.
inline double squared_distance(const double* a, const double* b,
                               std::size_t dim) noexcept {
  double sum = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    const double d = a[j] - b[j];
    sum += d * d;
  }
  return sum;
}

/// Rescales each dimension to [0, 1] using the dataset's own min/max.
/// Constant dimensions become 0.
Dataset minmax_scaled(const Dataset& ds);

struct FoldAssignment {
  std::size_t n_folds = 0;
  std::uint64_t seed = 0;
  /// fold_of[row] for the dataset the assignment was built from.
  std::vector<std::size_t> fold_of;

  std::vector<std::size_t> test_rows(std::size_t fold) const;
  std::vector<std::size_t> train_rows(std::size_t fold) const;
};

/// Stratified k-fold split. Each class is shuffled with a seeded
/// Fisher-Yates pass and dealt round-robin, continuing the deal across
/// classes so global fold sizes also differ by at most one.
FoldAssignment stratified_folds(const Dataset& ds, std::size_t n_folds,
                                std::uint64_t seed);

}  // namespace protoselect
