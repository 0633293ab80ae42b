#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tgcast::templates {

// Canonical prompt templates. Versioned and checksummed: every artifact meta
// records the checksum and `report` refuses to merge artifacts produced from
// different templates.

extern const std::string_view kForecastVersion;
extern const std::string_view kForecastTemplate;  // placeholders {context} {source} {time}

extern const std::string_view kJudgeVersion;
extern const std::string_view kJudgeTemplate;  // placeholders {context} {predicted} {reasoning}

std::string forecast_checksum();
std::string judge_checksum();

// Replaces every occurrence of each {key} placeholder.
std::string render(std::string_view templ,
                   const std::vector<std::pair<std::string_view, std::string>>& substitutions);

}  // namespace tgcast::templates
