#include "acthull/io.hpp"

#include "acthull/errors.hpp"
#include "binary.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace acthull {

namespace {

constexpr std::uint32_t kIdxImages = 0x00000803;
constexpr std::uint32_t kIdxLabels = 0x00000801;
constexpr char kAvecMagic[4] = {'A', 'V', 'E', 'C'};
constexpr std::uint32_t kAvecVersion = 1;

std::ifstream open_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

std::uintmax_t file_size(const std::string& path) {
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec) throw IoError("cannot stat " + path + ": " + ec.message());
  return size;
}

std::uint32_t read_be32(std::istream& in, const std::string& path) {
  const auto at = static_cast<long long>(in.tellg());
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (in.gcount() != 4) throw ParseError(path + ": truncated header at byte " + std::to_string(at));
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

std::string hex(std::uint32_t v) {
  std::ostringstream s;
  s << "0x" << std::hex << v;
  return s.str();
}

void check_payload(const std::string& path, std::uintmax_t expected) {
  const auto actual = file_size(path);
  if (actual != expected) {
    throw ParseError(path + ": expected " + std::to_string(expected) + " bytes, found " + std::to_string(actual));
  }
}

double parse_cell(const std::string& cell, const std::string& path, Index row, Index col) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\r')) --last;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last || !std::isfinite(v)) {
    throw ParseError(path + ": non-numeric cell '" + cell + "' at row " + std::to_string(row) + ", column " +
                     std::to_string(col));
  }
  return v;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream s(line);
  while (std::getline(s, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

LabeledVectors load_idx(const std::string& images_path, const std::string& labels_path, std::optional<Index> limit) {
  auto images = open_binary(images_path);
  auto labels = open_binary(labels_path);

  const auto img_magic = read_be32(images, images_path);
  if (img_magic != kIdxImages) {
    throw ParseError(images_path + ": bad magic " + hex(img_magic) + " at byte 0 (expected 0x803)");
  }
  const auto n = read_be32(images, images_path);
  const auto rows = read_be32(images, images_path);
  const auto cols = read_be32(images, images_path);
  const auto lbl_magic = read_be32(labels, labels_path);
  if (lbl_magic != kIdxLabels) {
    throw ParseError(labels_path + ": bad magic " + hex(lbl_magic) + " at byte 0 (expected 0x801)");
  }
  const auto n_labels = read_be32(labels, labels_path);
  if (n != n_labels) {
    throw ParseError("image count " + std::to_string(n) + " in " + images_path + " does not match label count " +
                     std::to_string(n_labels) + " in " + labels_path);
  }
  const std::uintmax_t pixels = std::uintmax_t{rows} * cols;
  if (pixels == 0) throw ParseError(images_path + ": zero image size");
  check_payload(images_path, 16 + std::uintmax_t{n} * pixels);
  check_payload(labels_path, 8 + std::uintmax_t{n});

  const Index keep = std::min<Index>(n, limit.value_or(n));
  if (keep == 0) throw InputError("IDX subset would be empty");
  RowMatrix x(static_cast<Eigen::Index>(keep), static_cast<Eigen::Index>(pixels));
  std::vector<unsigned char> buffer(pixels);
  for (Index i = 0; i < keep; ++i) {
    images.read(reinterpret_cast<char*>(buffer.data()), static_cast<std::streamsize>(pixels));
    for (std::uintmax_t j = 0; j < pixels; ++j) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = buffer[j] / 255.0;
    }
  }
  std::vector<unsigned char> raw(keep);
  labels.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(keep));

  LabeledVectors out;
  out.vectors = PointSet(std::move(x));
  out.labels.assign(raw.begin(), raw.end());
  out.validate();
  return out;
}

LabeledVectors load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file, expected a header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_line(line);
  Index label_col = header.size();
  for (Index c = 0; c < header.size(); ++c) {
    if (header[c] == "label") label_col = c;
  }
  if (label_col == header.size()) throw ParseError(path + ": no column named \"label\" in the header");
  if (header.size() < 2) throw ParseError(path + ": no feature columns");

  std::vector<double> values;
  std::vector<int> labels;
  Index row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size()) {
      throw ParseError(path + ": row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                       " cells, header has " + std::to_string(header.size()));
    }
    for (Index c = 0; c < cells.size(); ++c) {
      const double v = parse_cell(cells[c], path, row, c + 1);
      if (c == label_col) {
        if (v != std::floor(v) || v < 0 || v > std::numeric_limits<int>::max()) {
          throw ParseError(path + ": label '" + cells[c] + "' at row " + std::to_string(row) +
                           " is not a nonnegative integer");
        }
        labels.push_back(static_cast<int>(v));
      } else {
        values.push_back(v);
      }
    }
  }
  if (labels.empty()) throw ParseError(path + ": no data rows");
  const auto d = static_cast<Eigen::Index>(header.size() - 1);
  RowMatrix x = Eigen::Map<RowMatrix>(values.data(), static_cast<Eigen::Index>(labels.size()), d);
  LabeledVectors out;
  out.vectors = PointSet(std::move(x));
  out.labels = std::move(labels);
  out.validate();
  return out;
}

void save_csv(const LabeledVectors& data, const std::string& path) {
  data.validate();
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.precision(std::numeric_limits<double>::max_digits10);
  out << "label";
  for (Index j = 0; j < data.dim(); ++j) out << ",f" << j;
  out << '\n';
  for (Index i = 0; i < data.size(); ++i) {
    out << data.labels[i];
    const auto row = data.vectors.row(i);
    for (Eigen::Index j = 0; j < row.size(); ++j) out << ',' << row(j);
    out << '\n';
  }
  if (!out) throw IoError("short write to " + path);
}

LabeledVectors load_avec(const std::string& path) {
  auto in = open_binary(path);
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() != 4 || !std::equal(magic, magic + 4, kAvecMagic)) {
    throw ParseError(path + ": bad magic at byte 0 (expected AVEC)");
  }
  const auto version = detail::read_le<std::uint32_t>(in, path);
  if (version != kAvecVersion) {
    throw ParseError(path + ": unsupported AVEC version " + std::to_string(version) + " at byte 4");
  }
  const auto n = detail::read_le<std::uint32_t>(in, path);
  const auto d = detail::read_le<std::uint32_t>(in, path);
  const auto has_labels = detail::read_le<std::uint32_t>(in, path);
  if (n == 0 || d == 0) throw ParseError(path + ": empty AVEC payload (n or d is zero)");
  if (has_labels > 1) throw ParseError(path + ": has_labels must be 0 or 1 at byte 16");
  const std::uintmax_t expected = 20 + std::uintmax_t{n} * d * 4 + (has_labels ? std::uintmax_t{n} * 4 : 0);
  check_payload(path, expected);

  RowMatrix x(n, d);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < d; ++j) x(i, j) = detail::read_le<float>(in, path);
  }
  LabeledVectors out;
  out.labels.assign(n, 0);
  if (has_labels) {
    for (auto& y : out.labels) {
      const auto v = detail::read_le<std::uint32_t>(in, path);
      if (v > static_cast<std::uint32_t>(std::numeric_limits<int>::max())) throw ParseError(path + ": label overflow");
      y = static_cast<int>(v);
    }
  }
  out.vectors = PointSet(std::move(x));
  out.validate();
  return out;
}

void save_avec(const LabeledVectors& data, const std::string& path) {
  data.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(kAvecMagic, 4);
  detail::write_le<std::uint32_t>(out, kAvecVersion);
  detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(data.size()));
  detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(data.dim()));
  detail::write_le<std::uint32_t>(out, 1);
  const auto& m = data.vectors.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) detail::write_le<float>(out, static_cast<float>(m(i, j)));
  }
  for (int y : data.labels) detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(y));
  if (!out) throw IoError("short write to " + path);
}

LabeledVectors load_vectors(const std::string& path) {
  return has_suffix(path, ".csv") ? load_csv(path) : load_avec(path);
}

void save_vectors(const LabeledVectors& data, const std::string& path) {
  if (has_suffix(path, ".csv")) {
    save_csv(data, path);
  } else {
    save_avec(data, path);
  }
}

}  // namespace acthull
