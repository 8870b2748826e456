#include "hccal/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <type_traits>
#include <unistd.h>

#include "hccal/error.hpp"

namespace hccal {

namespace fs = std::filesystem;

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::io, "short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::io, "cannot rename onto '" + path.string() + "'");
  }
}

namespace {

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::corrupt_file, source + ": " + e.what());
  }
}

template <typename T>
T field(const Json& j, const char* key, const std::string& context) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorKind::data, context + ": missing key '" + key + "'");
  }
  if constexpr (std::is_same_v<T, std::size_t>) {
    if (!j.at(key).is_number_unsigned()) {
      throw Error(ErrorKind::data, context + ": key '" + key + "' must be a non-negative integer");
    }
  }
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw Error(ErrorKind::data, context + ": key '" + key + "' has the wrong type");
  }
}

std::uint32_t to_little_endian(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    v = ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) | (v >> 24);
  }
  return v;
}

}  // namespace

FeatureMatrix load_feature_matrix(const fs::path& header_path, const fs::path& data_path) {
  const Json header = parse_json(read_text_file(header_path), header_path.string());
  const std::string ctx = header_path.string();
  if (field<std::string>(header, "dtype", ctx) != "f32le") {
    throw Error(ErrorKind::corrupt_file, ctx + ": only dtype f32le is supported");
  }
  const auto rows = field<std::size_t>(header, "rows", ctx);
  const auto dim = field<std::size_t>(header, "dim", ctx);
  const std::string payload = read_text_file(data_path);
  if (payload.size() != rows * dim * sizeof(float)) {
    std::ostringstream msg;
    msg << data_path.string() << ": " << payload.size() << " bytes, header implies "
        << rows * dim * sizeof(float);
    throw Error(ErrorKind::corrupt_file, msg.str());
  }
  std::vector<double> values(rows * dim);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint32_t bits;
    std::memcpy(&bits, payload.data() + i * sizeof(float), sizeof(bits));
    values[i] = static_cast<double>(std::bit_cast<float>(to_little_endian(bits)));
  }
  try {
    return FeatureMatrix(rows, dim, std::move(values));
  } catch (const Error& e) {
    throw Error(e.kind(), data_path.string() + ": " + e.what());
  }
}

FeatureMatrix load_feature_matrix(const fs::path& path) {
  fs::path stem = path;
  if (stem.extension() == ".json" || stem.extension() == ".f32") stem.replace_extension();
  fs::path header = stem, data = stem;
  header += ".json";
  data += ".f32";
  return load_feature_matrix(header, data);
}

void save_feature_matrix(const FeatureMatrix& m, const fs::path& header_path,
                         const fs::path& data_path) {
  std::string payload(m.data().size() * sizeof(float), '\0');
  for (std::size_t i = 0; i < m.data().size(); ++i) {
    const auto bits = to_little_endian(std::bit_cast<std::uint32_t>(static_cast<float>(m.data()[i])));
    std::memcpy(payload.data() + i * sizeof(float), &bits, sizeof(bits));
  }
  Json header = {{"dtype", "f32le"}, {"rows", m.rows()}, {"dim", m.dim()}};
  write_file_atomic(data_path, payload);
  write_file_atomic(header_path, header.dump() + "\n");
}

Json to_json(const RegionRecord& r) {
  Json j = {{"image_id", r.image_id},
            {"region_id", r.region_id},
            {"box", {r.box.x1, r.box.y1, r.box.x2, r.box.y2}}};
  if (r.feature_row) j["feature_row"] = *r.feature_row;
  return j;
}

RegionRecord region_from_json(const Json& j) {
  const std::string ctx = "region";
  RegionRecord r;
  r.image_id = field<std::string>(j, "image_id", ctx);
  r.region_id = field<std::string>(j, "region_id", ctx);
  const auto box = field<std::vector<double>>(j, "box", ctx + " " + r.region_id);
  if (box.size() != 4) {
    throw Error(ErrorKind::data, "region " + r.region_id + ": box needs 4 coordinates");
  }
  r.box = {box[0], box[1], box[2], box[3]};
  try {
    validate_box(r.box);
  } catch (const Error& e) {
    throw Error(ErrorKind::data, "region " + r.region_id + ": " + e.what());
  }
  if (j.contains("feature_row") && !j.at("feature_row").is_null()) {
    r.feature_row = field<std::size_t>(j, "feature_row", ctx + " " + r.region_id);
  }
  return r;
}

Json to_json(const Annotation& a) {
  Json j = to_json(a.region);
  j["class"] = a.category ? Json(*a.category) : Json(nullptr);
  return j;
}

Annotation annotation_from_json(const Json& j) {
  Annotation a{region_from_json(j), std::nullopt};
  if (j.contains("class") && !j.at("class").is_null()) {
    a.category = field<std::string>(j, "class", "annotation " + a.region.region_id);
  }
  return a;
}

Json to_json(const PseudoLabel& label) {
  return {{"region", to_json(label.region)},
          {"class_index", label.class_index},
          {"confidence", label.confidence},
          {"objectness", label.objectness}};
}

PseudoLabel pseudo_label_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("region")) {
    throw Error(ErrorKind::data, "pseudo label: missing key 'region'");
  }
  PseudoLabel label;
  label.region = region_from_json(j.at("region"));
  const std::string ctx = "pseudo label " + label.region.region_id;
  label.class_index = field<std::size_t>(j, "class_index", ctx);
  label.confidence = field<double>(j, "confidence", ctx);
  label.objectness = field<double>(j, "objectness", ctx);
  return label;
}

Json to_json(const Hierarchy& h) {
  Json doc = Json::object();
  for (const auto& c : h.classes) {
    Json node = {{"row", c.text_row}, {"supers", Json::array()}, {"subs", Json::array()}};
    for (const auto& e : c.supers) node["supers"].push_back({{"name", e.name}, {"row", e.row}});
    for (const auto& e : c.subs) node["subs"].push_back({{"name", e.name}, {"row", e.row}});
    doc[c.name] = std::move(node);
  }
  return doc;
}

Hierarchy hierarchy_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::data, "hierarchy must be a JSON object");
  Hierarchy h;
  std::size_t position = 0;
  for (const auto& [name, node] : j.items()) {
    ClassNode c;
    c.name = name;
    c.text_row = node.contains("row") ? field<std::size_t>(node, "row", "class " + name) : position;
    for (auto [key, list] : {std::pair{"supers", &c.supers}, std::pair{"subs", &c.subs}}) {
      if (!node.contains(key)) continue;
      for (const auto& e : node.at(key)) {
        const std::string ctx = "class " + name + " " + key;
        list->push_back({field<std::string>(e, "name", ctx), field<std::size_t>(e, "row", ctx)});
      }
    }
    h.classes.push_back(std::move(c));
    ++position;
  }
  return h;
}

Hierarchy load_hierarchy(const fs::path& path) {
  try {
    return hierarchy_from_json(parse_json(read_text_file(path), path.string()));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::io) throw;
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

ClassVocabulary vocabulary_from_json(const Json& j) {
  return ClassVocabulary(field<std::vector<std::string>>(j, "novel", "vocabulary"),
                         j.contains("base")
                             ? field<std::vector<std::string>>(j, "base", "vocabulary")
                             : std::vector<std::string>{});
}

std::vector<Json> parse_ndjson(const std::string& text, const std::string& source) {
  std::vector<Json> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(Json::parse(line));
    } catch (const Json::parse_error&) {
      throw Error(ErrorKind::corrupt_file, source + ":" + std::to_string(line_no) + ": invalid JSON");
    }
  }
  return out;
}

namespace {

template <typename T, typename Fn>
std::vector<T> load_records(const fs::path& path, Fn&& convert) {
  std::vector<T> out;
  std::size_t line = 0;
  for (const auto& j : parse_ndjson(read_text_file(path), path.string())) {
    ++line;
    try {
      out.push_back(convert(j));
    } catch (const Error& e) {
      throw Error(e.kind(), path.string() + " record " + std::to_string(line) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

std::vector<RegionRecord> load_regions(const fs::path& path) {
  return load_records<RegionRecord>(path, region_from_json);
}

std::vector<Annotation> load_annotations(const fs::path& path) {
  return load_records<Annotation>(path, annotation_from_json);
}

std::vector<PseudoLabel> load_pseudo_labels(const fs::path& path) {
  return load_records<PseudoLabel>(path, pseudo_label_from_json);
}

std::string to_ndjson(const std::vector<Json>& records) {
  std::string out;
  for (const auto& r : records) {
    out += r.dump();
    out += '\n';
  }
  return out;
}

}  // namespace hccal
