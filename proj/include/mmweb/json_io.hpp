#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmweb/document.hpp"

namespace mmweb {

using json = nlohmann::json;

json to_json(const MultimodalDocument& doc);
/// Throws Error on schema violations. Does not run validate().
MultimodalDocument document_from_json(const json& j);

/// Calls `fn` for every non-empty line of a line-delimited JSON file.
void for_each_jsonl(const std::filesystem::path& path, const std::function<void(const json&)>& fn);
std::vector<json> read_jsonl(const std::filesystem::path& path);
void write_jsonl(const std::filesystem::path& path, const std::vector<json>& rows);

/// Writes to a sibling temp file and renames into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace mmweb
