#pragma once

// Minimal structural validation of emitted JSON artifacts against the schema
// files shipped under schemas/. Supports the subset those schemas use:
// type tags (object, array, number, integer, string, boolean), required
// members, per-property schemas and uniform array items.

#include <string>
#include <vector>

namespace rvf {

struct SchemaIssue {
    std::string path;
    std::string message;
};

// returns the issues found; empty means the document validates
std::vector<SchemaIssue> validate_json(const std::string& document_text,
                                       const std::string& schema_text);

std::vector<SchemaIssue> validate_json_file(const std::string& document_path,
                                            const std::string& schema_path);

} // namespace rvf
