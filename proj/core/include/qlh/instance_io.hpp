#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "qlh/pauli.hpp"

namespace qlh {

/// Canonical on-disk form:
///   {"n": int, "kind": string,
///    "terms": [{"i": int, "j": int, "weight": float, "alpha": [[float x4] x4]}]}
/// Writers emit shortest round-trip doubles; readers reject NaN/Inf and
/// non-numeric entries with ValidationError.
std::string instance_to_json(const Instance& inst, int indent = 2);
Instance instance_from_json(std::string_view text);

void write_instance(const std::filesystem::path& path, const Instance& inst);
Instance read_instance(const std::filesystem::path& path);

/// Whole-file helpers shared by the report writers.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace qlh
