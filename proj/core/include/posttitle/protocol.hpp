#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Newline-delimited JSON spoken with external generators, over a child
// process's standard streams or as HTTP bodies on POST /generate.
//
//   request:  {"id":"<post id>","input":"<formatted input>","n":<int>}
//   response: {"id":"<post id>","candidates":["...", ...]}
//
// A response may carry an extra "error" string when the generator failed
// on that request. Serialization is compact with fields in the order shown,
// so serialize(parse(line)) reproduces any line in that canonical form.
namespace posttitle::protocol {

struct Request {
  std::string id;
  std::string input;
  int n = 1;

  friend bool operator==(const Request&, const Request&) = default;
};

struct Response {
  std::string id;
  std::vector<std::string> candidates;
  std::optional<std::string> error;

  friend bool operator==(const Response&, const Response&) = default;
};

// Neither function appends the trailing newline.
std::string serialize(const Request& request);
std::string serialize(const Response& response);

// Throw ProtocolError on malformed JSON, missing fields or wrong types.
Request parse_request(std::string_view line);
Response parse_response(std::string_view line);

}  // namespace posttitle::protocol
