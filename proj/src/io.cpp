/* Copyright 2026 The Saliency Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "saliency/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "saliency/error.hpp"

namespace saliency {
namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::kIo, "write to '" + path.string() + "' failed");
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(const std::string& in, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[offset + i]))
         << (8 * i);
  return v;
}

std::uint64_t get_u64(const std::string& in, std::size_t offset) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[offset + i]))
         << (8 * i);
  return v;
}

std::uint32_t checked_u32(Index v, const char* what) {
  if (v < 0 || v > static_cast<Index>(UINT32_MAX))
    fail(ErrorCode::kInvalidArgument, std::string(what) + " does not fit in u32");
  return static_cast<std::uint32_t>(v);
}

// Header of a raw tensor; validates the payload size.
std::pair<std::uint32_t, std::uint32_t> read_header(const std::string& bytes,
                                                    std::size_t element_size,
                                                    const std::string& name) {
  if (bytes.size() < 8)
    throw ParseError("'" + name + "' is shorter than the 8-byte header", 0,
                     bytes.size());
  const std::uint32_t count = get_u32(bytes, 0);
  const std::uint32_t dim = get_u32(bytes, 4);
  const std::uint64_t expected =
      8 + static_cast<std::uint64_t>(count) * dim * element_size;
  if (bytes.size() != expected)
    throw ParseError("'" + name + "' has " + std::to_string(bytes.size()) +
                         " bytes, header implies " + std::to_string(expected),
                     0, std::min<std::uint64_t>(bytes.size(), expected));
  return {count, dim};
}

bool parse_double(std::string_view field, double* out) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
    field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' ||
                            field.back() == '\r'))
    field.remove_suffix(1);
  if (field.empty()) return false;
  if (field.front() == '+') field.remove_prefix(1);
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), *out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

json layer_to_json(const Layer& layer) {
  json j;
  j["in"] = layer.in();
  j["out"] = layer.out();
  j["activation"] = std::string(activation_name(layer.activation));
  std::vector<double> weights;
  weights.reserve(static_cast<std::size_t>(layer.weight.size()));
  for (Index r = 0; r < layer.out(); ++r)
    for (Index c = 0; c < layer.in(); ++c) weights.push_back(layer.weight(r, c));
  j["weights"] = weights;
  j["bias"] = std::vector<double>(layer.bias.data(),
                                  layer.bias.data() + layer.bias.size());
  return j;
}

}  // namespace

double percentile(std::vector<double> values, double q) {
  require(!values.empty(), ErrorCode::kInvalidArgument,
          "percentile of an empty set");
  require(q >= 0.0 && q <= 100.0, ErrorCode::kInvalidArgument,
          "percentile must be in [0, 100]");
  std::sort(values.begin(), values.end());
  const double h = static_cast<double>(values.size() - 1) * q / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

DisplayMap normalize_for_display(const VectorXd& delta, Index width,
                                 Index height, Index channels) {
  require(width > 0 && height > 0 && channels > 0,
          ErrorCode::kInvalidArgument, "map dimensions must be positive");
  if (delta.size() != width * height * channels)
    fail(ErrorCode::kDimensionMismatch,
         "attribution has " + std::to_string(delta.size()) +
             " entries, expected " + std::to_string(width * height * channels));
  DisplayMap map;
  map.width = width;
  map.height = height;
  map.values.assign(static_cast<std::size_t>(width * height), 0.0);
  for (Index p = 0; p < width * height; ++p) {
    double sum = 0.0;
    for (Index ch = 0; ch < channels; ++ch)
      sum += std::abs(delta[p * channels + ch]);
    map.values[static_cast<std::size_t>(p)] = sum;
  }
  const double cap = percentile(map.values, 99.0);
  for (double& v : map.values)
    v = cap > 0.0 ? std::clamp(std::min(v, cap) / cap, 0.0, 1.0) : 0.0;
  return map;
}

void write_pgm(const DisplayMap& map, const std::filesystem::path& path,
               const std::vector<std::string>& comments) {
  require(map.width > 0 && map.height > 0 &&
              map.values.size() == static_cast<std::size_t>(map.width * map.height),
          ErrorCode::kInvalidArgument, "malformed display map");
  std::string bytes = "P5\n";
  for (const std::string& c : comments) {
    std::string line = c;
    std::replace(line.begin(), line.end(), '\n', ' ');
    bytes += "# " + line + "\n";
  }
  bytes += std::to_string(map.width) + " " + std::to_string(map.height) + "\n255\n";
  for (double v : map.values) {
    require(v >= 0.0 && v <= 1.0, ErrorCode::kInvalidArgument,
            "display values must lie in [0, 1]");
    bytes.push_back(static_cast<char>(
        static_cast<unsigned char>(std::floor(v * 255.0 + 0.5))));
  }
  write_file(path, bytes);
}

DisplayMap read_pgm(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  std::size_t pos = 0;
  std::size_t line = 1;
  const auto skip_space = [&]() {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        if (bytes[pos] == '\n') ++line;
        ++pos;
      } else {
        break;
      }
    }
  };
  const auto read_int = [&]() {
    skip_space();
    std::size_t start = pos;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos])))
      ++pos;
    if (start == pos) throw ParseError("expected integer in PGM header", line, pos);
    return std::stol(bytes.substr(start, pos - start));
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
    throw ParseError("not a binary PGM (P5) file", 1, 0);
  pos = 2;
  DisplayMap map;
  map.width = read_int();
  map.height = read_int();
  const long maxval = read_int();
  if (maxval != 255) throw ParseError("only maxval 255 is supported", line, pos);
  ++pos;  // single whitespace before the raster
  const std::size_t n = static_cast<std::size_t>(map.width * map.height);
  if (bytes.size() < pos + n) throw ParseError("truncated PGM raster", line, bytes.size());
  map.values.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    map.values[i] = static_cast<unsigned char>(bytes[pos + i]) / 255.0;
  return map;
}

std::string model_to_json(const Network& net) {
  json doc;
  doc["layers"] = json::array();
  for (const Layer& layer : net.layers()) doc["layers"].push_back(layer_to_json(layer));
  return doc.dump(1);
}

Network model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // Count lines up to the failing byte.
    const std::size_t offset = std::min<std::size_t>(e.byte, text.size());
    const std::size_t line =
        1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
    throw ParseError(std::string("malformed model JSON: ") + e.what(), line, offset);
  }
  try {
    if (!doc.is_object() || !doc.contains("layers") || !doc["layers"].is_array())
      throw ParseError("model JSON needs a 'layers' array", 0, 0);
    std::vector<Layer> layers;
    for (std::size_t i = 0; i < doc["layers"].size(); ++i) {
      const json& j = doc["layers"][i];
      const std::string where = "layer " + std::to_string(i) + ": ";
      for (const char* key : {"in", "out", "activation", "weights", "bias"})
        if (!j.contains(key))
          throw ParseError(where + "missing key '" + key + "'", 0, 0);
      const Index in = j.at("in").get<Index>();
      const Index out = j.at("out").get<Index>();
      const auto weights = j.at("weights").get<std::vector<double>>();
      const auto bias = j.at("bias").get<std::vector<double>>();
      if (in <= 0 || out <= 0)
        throw ParseError(where + "dimensions must be positive", 0, 0);
      if (static_cast<Index>(weights.size()) != in * out)
        throw ParseError(where + "expected " + std::to_string(in * out) +
                             " weights, found " + std::to_string(weights.size()),
                         0, 0);
      if (static_cast<Index>(bias.size()) != out)
        throw ParseError(where + "expected " + std::to_string(out) +
                             " biases, found " + std::to_string(bias.size()),
                         0, 0);
      Layer layer;
      layer.activation = parse_activation(j.at("activation").get<std::string>());
      layer.weight.resize(out, in);
      for (Index r = 0; r < out; ++r)
        for (Index c = 0; c < in; ++c)
          layer.weight(r, c) = weights[static_cast<std::size_t>(r * in + c)];
      layer.bias = Eigen::Map<const VectorXd>(bias.data(), out);
      layers.push_back(std::move(layer));
    }
    return Network(std::move(layers));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed model JSON: ") + e.what(), 0, 0);
  }
}

void save_model(const Network& net, const std::filesystem::path& path) {
  write_file(path, model_to_json(net));
}

Network load_model(const std::filesystem::path& path) {
  return model_from_json(read_file(path));
}

Dataset load_csv_dataset(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  Dataset data;
  std::size_t line_no = 0;
  std::size_t offset = 0;
  bool seen_row = false;
  Index dim = -1;
  while (offset < text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + offset, end - offset);
    const std::size_t line_offset = offset;
    offset = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    const auto fields = split_csv(line);
    std::vector<double> values(fields.size());
    bool numeric = true;
    for (std::size_t i = 0; i < fields.size(); ++i)
      numeric = numeric && parse_double(fields[i], &values[i]);
    if (!numeric) {
      if (!seen_row) {
        seen_row = true;  // header
        continue;
      }
      throw ParseError("non-numeric field in '" + path.string() + "'", line_no,
                       line_offset);
    }
    seen_row = true;
    if (fields.size() < 2)
      throw ParseError("row needs at least one feature and a label", line_no,
                       line_offset);
    const Index row_dim = static_cast<Index>(fields.size()) - 1;
    if (dim < 0) dim = row_dim;
    if (row_dim != dim)
      throw ParseError("row has " + std::to_string(row_dim) +
                           " features, expected " + std::to_string(dim),
                       line_no, line_offset);
    const double label = values.back();
    if (label < 0.0 || label != std::floor(label) || label > 2147483647.0)
      throw ParseError("label must be a non-negative integer", line_no,
                       line_offset);
    Sample s;
    s.x = Eigen::Map<const VectorXd>(values.data(), dim);
    s.label = static_cast<int>(label);
    data.push_back(std::move(s));
  }
  return data;
}

void save_csv_dataset(const Dataset& data, const std::filesystem::path& path) {
  std::ostringstream out;
  out.precision(17);
  for (const Sample& s : data) {
    for (Index i = 0; i < s.x.size(); ++i) out << s.x[i] << ',';
    out << s.label << '\n';
  }
  write_file(path, out.str());
}

Dataset load_raw_dataset(const std::filesystem::path& tensor_path,
                         const std::filesystem::path& label_path) {
  const std::string tensor = read_file(tensor_path);
  const std::string labels = read_file(label_path);
  const auto [count, dim] = read_header(tensor, 4, tensor_path.string());
  const auto [label_count, label_dim] = read_header(labels, 4, label_path.string());
  if (label_count != count || label_dim != 1)
    throw ParseError("label file header (" + std::to_string(label_count) + ", " +
                         std::to_string(label_dim) + ") does not match " +
                         std::to_string(count) + " samples",
                     0, 0);
  Dataset data;
  data.reserve(count);
  for (std::uint32_t n = 0; n < count; ++n) {
    Sample s;
    s.x.resize(dim);
    for (std::uint32_t i = 0; i < dim; ++i)
      s.x[i] = static_cast<double>(
          std::bit_cast<float>(get_u32(tensor, 8 + 4 * (std::size_t{n} * dim + i))));
    const auto label = static_cast<std::int32_t>(get_u32(labels, 8 + 4 * std::size_t{n}));
    if (label < 0)
      throw ParseError("negative label", 0, 8 + 4 * std::size_t{n});
    s.label = label;
    data.push_back(std::move(s));
  }
  return data;
}

void save_raw_dataset(const Dataset& data,
                      const std::filesystem::path& tensor_path,
                      const std::filesystem::path& label_path) {
  const Index dim = data.empty() ? 0 : data.front().x.size();
  std::string tensor;
  std::string labels;
  put_u32(tensor, checked_u32(static_cast<Index>(data.size()), "count"));
  put_u32(tensor, checked_u32(dim, "dim"));
  put_u32(labels, static_cast<std::uint32_t>(data.size()));
  put_u32(labels, 1);
  for (const Sample& s : data) {
    if (s.x.size() != dim)
      fail(ErrorCode::kDimensionMismatch, "samples differ in dimension");
    for (Index i = 0; i < dim; ++i)
      put_u32(tensor, std::bit_cast<std::uint32_t>(static_cast<float>(s.x[i])));
    put_u32(labels, static_cast<std::uint32_t>(s.label));
  }
  write_file(tensor_path, tensor);
  write_file(label_path, labels);
}

void write_raw_f64(const std::filesystem::path& path, Index count, Index dim,
                   const double* data) {
  std::string bytes;
  put_u32(bytes, checked_u32(count, "count"));
  put_u32(bytes, checked_u32(dim, "dim"));
  for (Index i = 0; i < count * dim; ++i)
    put_u64(bytes, std::bit_cast<std::uint64_t>(data[i]));
  write_file(path, bytes);
}

std::vector<double> read_raw_f64(const std::filesystem::path& path,
                                  Index* count, Index* dim) {
  const std::string bytes = read_file(path);
  const auto [c, d] = read_header(bytes, 8, path.string());
  std::vector<double> out(static_cast<std::size_t>(c) * d);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::bit_cast<double>(get_u64(bytes, 8 + 8 * i));
  if (count) *count = c;
  if (dim) *dim = d;
  return out;
}

}  // namespace saliency
