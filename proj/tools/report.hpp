#pragma once

#include <json.hpp>
#include <string>

namespace rsvd::cli {

using Json = nlohmann::json;

/// Every report carries the schema version and the command that produced it.
inline Json make_report(const std::string& command) {
    Json j;
    j["schema_version"] = "1";
    j["command"] = command;
    return j;
}

/// Reports go to stdout, or to a file when --report is given. Numbers are
/// serialized with full round-trip precision by the JSON library.
void emit_report(const Json& j, const std::string& path);

}  // namespace rsvd::cli
