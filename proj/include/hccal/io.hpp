#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hccal/types.hpp"

namespace hccal {

using Json = nlohmann::ordered_json;

std::string read_text_file(const std::filesystem::path& path);

/// Writes `content` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Feature files are a JSON header {"dtype":"f32le","rows":R,"dim":D} next to a
// raw payload of R*D little-endian floats.
FeatureMatrix load_feature_matrix(const std::filesystem::path& header_path,
                                  const std::filesystem::path& data_path);
/// Loads `<stem>.json` + `<stem>.f32`; `path` may name the header or the stem.
FeatureMatrix load_feature_matrix(const std::filesystem::path& path);
void save_feature_matrix(const FeatureMatrix& m, const std::filesystem::path& header_path,
                         const std::filesystem::path& data_path);

Json to_json(const RegionRecord& r);
RegionRecord region_from_json(const Json& j);
Json to_json(const Annotation& a);
Annotation annotation_from_json(const Json& j);
Json to_json(const PseudoLabel& label);
PseudoLabel pseudo_label_from_json(const Json& j);

Json to_json(const Hierarchy& h);
Hierarchy hierarchy_from_json(const Json& j);
Hierarchy load_hierarchy(const std::filesystem::path& path);

ClassVocabulary vocabulary_from_json(const Json& j);

/// Parses one JSON object per non-blank line; errors carry the line number.
std::vector<Json> parse_ndjson(const std::string& text, const std::string& source);
std::vector<RegionRecord> load_regions(const std::filesystem::path& path);
std::vector<Annotation> load_annotations(const std::filesystem::path& path);
std::vector<PseudoLabel> load_pseudo_labels(const std::filesystem::path& path);

std::string to_ndjson(const std::vector<Json>& records);

}  // namespace hccal
