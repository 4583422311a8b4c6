#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "growthlab/indices.hpp"
#include "growthlab/seqcore.hpp"
#include "growthlab/verdict.hpp"
#include "growthlab/verify.hpp"
#include "growthlab/window.hpp"

namespace growthlab {

using Json = nlohmann::json;

/// Value of the "schema" field of every document.
inline constexpr std::string_view kSchemaVersion = "v1";

/// 17 significant digits ("inf", "-inf", "nan" for non-finite values), so
/// that parse_real(format_real(v)) == v bit for bit.
std::string format_real(double v);
/// Throws ParameterError on malformed input.
double parse_real(std::string_view s);

// Sequences store every real as a decimal string and every index as a
// decimal integer string.
Json to_json(const BlockSequence& seq);
/// Throws ParameterError on schema mismatch or malformed fields and
/// DomainError when the blocks are not a valid layout.
BlockSequence sequence_from_json(const Json& j);

void save_sequence(const BlockSequence& seq, const std::filesystem::path& path);
BlockSequence load_sequence(const std::filesystem::path& path);

// Report documents use JSON numbers; non-finite values become the strings
// "inf", "-inf" and unset values null.
Json to_json(const Window& w);
Json to_json(const Verdict& v);
Json to_json(const IndexEstimate& e);
Json to_json(const ScenarioReport& r, bool timing = false);
Json to_json(const FullReport& r, bool timing = false);

}  // namespace growthlab
