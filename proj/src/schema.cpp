#include "rvf/schema.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rvf/errors.hpp"

namespace rvf {

namespace {

using nlohmann::json;

bool type_matches(const json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "number") return v.is_number();
    if (t == "integer") return v.is_number_integer();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    return false;
}

void check(const json& v, const json& schema, const std::string& path,
           std::vector<SchemaIssue>& issues) {
    if (schema.contains("type")) {
        const std::string t = schema["type"].get<std::string>();
        if (!type_matches(v, t)) {
            issues.push_back({path, "expected " + t});
            return;
        }
    }
    if (schema.contains("required"))
        for (const auto& r : schema["required"]) {
            const std::string name = r.get<std::string>();
            if (!v.contains(name)) issues.push_back({path, "missing required member '" + name + "'"});
        }
    if (schema.contains("properties") && v.is_object())
        for (const auto& [name, sub] : schema["properties"].items())
            if (v.contains(name)) check(v[name], sub, path + "/" + name, issues);
    if (schema.contains("items") && v.is_array())
        for (size_t i = 0; i < v.size(); ++i)
            check(v[i], schema["items"], path + "/" + std::to_string(i), issues);
}

} // namespace

std::vector<SchemaIssue> validate_json(const std::string& document_text,
                                       const std::string& schema_text) {
    json doc, schema;
    try {
        doc = json::parse(document_text);
    } catch (const std::exception& e) {
        return {{"/", std::string("document is not valid JSON: ") + e.what()}};
    }
    try {
        schema = json::parse(schema_text);
    } catch (const std::exception& e) {
        return {{"/", std::string("schema is not valid JSON: ") + e.what()}};
    }
    std::vector<SchemaIssue> issues;
    check(doc, schema, "", issues);
    return issues;
}

std::vector<SchemaIssue> validate_json_file(const std::string& document_path,
                                            const std::string& schema_path) {
    std::ifstream d(document_path), s(schema_path);
    if (!d) throw ConfigError("cannot open document: " + document_path);
    if (!s) throw ConfigError("cannot open schema: " + schema_path);
    std::ostringstream ds, ss;
    ds << d.rdbuf();
    ss << s.rdbuf();
    return validate_json(ds.str(), ss.str());
}

} // namespace rvf
