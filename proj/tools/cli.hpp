#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace rs::cli {

enum class Format { json, csv, text };

// data is the JSON report; the CSV view is a flat table
struct Report {
    nlohmann::json data = nlohmann::json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

// sorted keys, two-space indent, trailing newline
std::string emit(const Report& r, Format f);

// exit codes: 0 success, 1 usage or input error, 2 verification mismatch
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rs::cli
