#include "posttitle/protocol.hpp"

#include "json.hpp"
#include "posttitle/error.hpp"

namespace posttitle::protocol {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json parse_object(std::string_view line) {
  ordered_json obj;
  try {
    obj = ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("malformed protocol line: ") + e.what());
  }
  if (!obj.is_object()) throw ProtocolError("protocol line is not a JSON object");
  return obj;
}

const ordered_json& field(const ordered_json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ProtocolError(std::string("protocol line lacks field '") + key + "'");
  }
  return *it;
}

std::string string_field(const ordered_json& obj, const char* key) {
  const auto& v = field(obj, key);
  if (!v.is_string()) {
    throw ProtocolError(std::string("field '") + key + "' must be a string");
  }
  return v.get<std::string>();
}

std::string dump(const ordered_json& obj) {
  try {
    return obj.dump();
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("cannot encode protocol line: ") + e.what());
  }
}

}  // namespace

std::string serialize(const Request& request) {
  ordered_json obj;
  obj["id"] = request.id;
  obj["input"] = request.input;
  obj["n"] = request.n;
  return dump(obj);
}

std::string serialize(const Response& response) {
  ordered_json obj;
  obj["id"] = response.id;
  obj["candidates"] = response.candidates;
  if (response.error) obj["error"] = *response.error;
  return dump(obj);
}

Request parse_request(std::string_view line) {
  const auto obj = parse_object(line);
  Request req;
  req.id = string_field(obj, "id");
  req.input = string_field(obj, "input");
  const auto& n = field(obj, "n");
  if (!n.is_number_integer()) throw ProtocolError("field 'n' must be an integer");
  const auto value = n.get<long long>();
  if (value < 1 || value > 1'000'000) {
    throw ProtocolError("field 'n' out of range: " + std::to_string(value));
  }
  req.n = static_cast<int>(value);
  return req;
}

Response parse_response(std::string_view line) {
  const auto obj = parse_object(line);
  Response resp;
  resp.id = string_field(obj, "id");
  const auto& candidates = field(obj, "candidates");
  if (!candidates.is_array()) throw ProtocolError("field 'candidates' must be an array");
  resp.candidates.reserve(candidates.size());
  for (const auto& c : candidates) {
    if (!c.is_string()) throw ProtocolError("candidates must be strings");
    resp.candidates.push_back(c.get<std::string>());
  }
  if (const auto it = obj.find("error"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) throw ProtocolError("field 'error' must be a string");
    resp.error = it->get<std::string>();
  }
  return resp;
}

}  // namespace posttitle::protocol
