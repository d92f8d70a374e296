#include "protoselect/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "random.hpp"

namespace protoselect {

namespace {

std::string describe(const std::string& what, std::optional<std::size_t> row,
                     std::optional<std::size_t> column) {
  std::ostringstream os;
  os << what;
  if (row) os << " (row " << *row;
  if (row && column) os << ", column " << *column;
  if (row) os << ")";
  return os.str();
}

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  s = s.substr(b, e - b + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_real(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

bool is_blank(std::string_view line) { return trim(line).empty(); }

}  // namespace

DataError::DataError(const std::string& what, std::optional<std::size_t> row,
                     std::optional<std::size_t> column)
    : std::runtime_error(describe(what, row, column)),
      row_(row),
      column_(column) {}

Dataset::Dataset(std::string name, std::size_t dim,
                 std::vector<std::string> label_names)
    : name_(std::move(name)), dim_(dim), label_names_(std::move(label_names)) {
  if (dim_ == 0) throw DataError("dataset needs at least one feature dimension");
}

void Dataset::add(std::span<const double> values, Label label, InstanceId id) {
  if (values.size() != dim_) {
    throw DataError("instance has " + std::to_string(values.size()) +
                    " values, dataset expects " + std::to_string(dim_));
  }
  if (!std::all_of(values.begin(), values.end(),
                   [](double v) { return std::isfinite(v); })) {
    throw DataError("instance values must be finite");
  }
  if (label >= label_names_.size()) {
    throw DataError("label id " + std::to_string(label) + " is not interned");
  }
  values_.insert(values_.end(), values.begin(), values.end());
  labels_.push_back(label);
  ids_.push_back(id);
}

Label Dataset::intern_label(std::string_view name) {
  const auto it = std::find(label_names_.begin(), label_names_.end(), name);
  if (it != label_names_.end()) {
    return static_cast<Label>(it - label_names_.begin());
  }
  label_names_.emplace_back(name);
  return static_cast<Label>(label_names_.size() - 1);
}

std::vector<Label> Dataset::labels() const {
  std::vector<char> seen(label_names_.size(), 0);
  for (Label l : labels_) seen[l] = 1;
  std::vector<Label> out;
  for (Label l = 0; l < seen.size(); ++l) {
    if (seen[l]) out.push_back(l);
  }
  return out;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out = empty_like(name_);
  out.reserve(rows.size());
  for (std::size_t r : rows) {
    const auto v = values(r);
    out.values_.insert(out.values_.end(), v.begin(), v.end());
    out.labels_.push_back(labels_[r]);
    out.ids_.push_back(ids_[r]);
  }
  return out;
}

Dataset Dataset::empty_like(std::string name) const {
  Dataset out;
  out.name_ = std::move(name);
  out.dim_ = dim_;
  out.label_names_ = label_names_;
  return out;
}

void Dataset::reserve(std::size_t rows) {
  values_.reserve(rows * dim_);
  labels_.reserve(rows);
  ids_.reserve(rows);
}

Dataset parse_csv(std::istream& in, const CsvOptions& options) {
  std::vector<std::pair<std::size_t, std::string>> lines;
  {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (lineno == 1 && line.size() >= 3 &&
          line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
        line.erase(0, 3);
      }
      if (!is_blank(line)) lines.emplace_back(lineno, std::move(line));
    }
  }
  if (lines.empty()) throw DataError("empty file");

  const auto first = split_cells(lines.front().second);
  const std::size_t columns = first.size();
  if (columns < 2) {
    throw DataError("need at least one feature column and a label column",
                    lines.front().first);
  }

  std::optional<std::size_t> label_col;
  const std::string& sel = options.label_column;
  if (sel.empty() || sel == "last") {
    label_col = columns - 1;
  } else if (std::all_of(sel.begin(), sel.end(),
                         [](char c) { return c >= '0' && c <= '9'; })) {
    label_col = std::stoul(sel);
    if (*label_col >= columns) {
      throw DataError("label column index " + sel + " out of range");
    }
  }

  auto looks_like_header = [&](std::size_t lc) {
    if (parse_real(first[lc])) return false;
    for (std::size_t c = 0; c < columns; ++c) {
      if (c != lc && !parse_real(first[c])) return true;
    }
    return false;
  };

  bool has_header = false;
  if (label_col) {
    has_header = looks_like_header(*label_col);
  } else {
    const auto it = std::find(first.begin(), first.end(), sel);
    if (it == first.end()) {
      throw DataError("label column '" + sel + "' not found in header");
    }
    label_col = static_cast<std::size_t>(it - first.begin());
    has_header = true;
  }

  std::string name = options.name;
  Dataset ds(name, columns - 1);
  std::vector<double> row_values(columns - 1);
  InstanceId next_id = 0;
  for (std::size_t i = has_header ? 1 : 0; i < lines.size(); ++i) {
    const auto& [lineno, text] = lines[i];
    const auto cells = split_cells(text);
    if (cells.size() != columns) {
      throw DataError("expected " + std::to_string(columns) + " columns, found " +
                          std::to_string(cells.size()),
                      lineno);
    }
    std::size_t f = 0;
    for (std::size_t c = 0; c < columns; ++c) {
      if (c == *label_col) continue;
      const auto v = parse_real(cells[c]);
      if (!v) {
        throw DataError("non-numeric feature value '" + std::string(cells[c]) +
                            "'",
                        lineno, c + 1);
      }
      row_values[f++] = *v;
    }
    if (cells[*label_col].empty()) {
      throw DataError("empty label", lineno, *label_col + 1);
    }
    const Label l = ds.intern_label(cells[*label_col]);
    ds.add(row_values, l, next_id++);
  }
  if (ds.empty()) throw DataError("no data rows");
  return ds;
}

Dataset load_csv(const std::filesystem::path& path, CsvOptions options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  if (options.name.empty()) options.name = path.stem().string();
  return parse_csv(in, options);
}

void write_csv(const Dataset& ds, std::ostream& out,
               std::span<const std::string> header) {
  if (!header.empty()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      out << (i ? "," : "") << header[i];
    }
    out << '\n';
  }
  char buf[64];
  for (std::size_t r = 0; r < ds.size(); ++r) {
    for (double v : ds.values(r)) {
      const auto res = std::to_chars(buf, buf + sizeof buf, v,
                                     std::chars_format::general, 17);
      out.write(buf, res.ptr - buf);
      out << ',';
    }
    out << ds.label_name(ds.label(r)) << '\n';
  }
}

double distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("distance: dimension mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
  return std::sqrt(squared_distance(a.data(), b.data(), a.size()));
}

Dataset minmax_scaled(const Dataset& ds) {
  const std::size_t m = ds.dim();
  std::vector<double> lo(m, std::numeric_limits<double>::infinity());
  std::vector<double> hi(m, -std::numeric_limits<double>::infinity());
  for (std::size_t r = 0; r < ds.size(); ++r) {
    const auto v = ds.values(r);
    for (std::size_t j = 0; j < m; ++j) {
      lo[j] = std::min(lo[j], v[j]);
      hi[j] = std::max(hi[j], v[j]);
    }
  }
  Dataset out = ds.empty_like(ds.name());
  out.reserve(ds.size());
  std::vector<double> scaled(m);
  for (std::size_t r = 0; r < ds.size(); ++r) {
    const auto v = ds.values(r);
    for (std::size_t j = 0; j < m; ++j) {
      const double span = hi[j] - lo[j];
      scaled[j] = span > 0.0 ? (v[j] - lo[j]) / span : 0.0;
    }
    out.add(scaled, ds.label(r), ds.id(r));
  }
  return out;
}

std::vector<std::size_t> FoldAssignment::test_rows(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < fold_of.size(); ++r) {
    if (fold_of[r] == fold) rows.push_back(r);
  }
  return rows;
}

std::vector<std::size_t> FoldAssignment::train_rows(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < fold_of.size(); ++r) {
    if (fold_of[r] != fold) rows.push_back(r);
  }
  return rows;
}

FoldAssignment stratified_folds(const Dataset& ds, std::size_t n_folds,
                                std::uint64_t seed) {
  if (n_folds < 2) throw std::invalid_argument("n_folds must be at least 2");
  if (n_folds > ds.size()) {
    throw std::invalid_argument("n_folds (" + std::to_string(n_folds) +
                                ") exceeds dataset size (" +
                                std::to_string(ds.size()) + ")");
  }
  std::vector<std::vector<std::size_t>> by_class(ds.label_names().size());
  for (std::size_t r = 0; r < ds.size(); ++r) {
    by_class[ds.label(r)].push_back(r);
  }

  FoldAssignment fa;
  fa.n_folds = n_folds;
  fa.seed = seed;
  fa.fold_of.assign(ds.size(), 0);

  std::mt19937_64 rng(seed);
  std::size_t deal = 0;
  for (auto& rows : by_class) {
    detail::shuffle(rows, rng);
    for (std::size_t r : rows) {
      fa.fold_of[r] = deal % n_folds;
      ++deal;
    }
  }
  return fa;
}

}  // namespace protoselect
