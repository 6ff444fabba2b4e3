#include <utility>

#include "httplib.h"
#include "posttitle/error.hpp"
#include "posttitle/generator.hpp"
#include "posttitle/protocol.hpp"

namespace posttitle {

namespace {

using Clock = std::chrono::steady_clock;

// POST /generate with the line-protocol request as body. 2xx carries a
// response object; 5xx and transport failures mean the backend is down.
class HttpGenerator final : public Generator {
 public:
  HttpGenerator(std::string url, std::chrono::milliseconds timeout)
      : url_(std::move(url)), timeout_(timeout), client_(url_) {
    if (!client_.is_valid()) throw InvalidArg("invalid generator url '" + url_ + "'");
    client_.set_connection_timeout(timeout_);
    client_.set_read_timeout(timeout_);
    client_.set_write_timeout(timeout_);
  }

  GenerationResponse generate(const GenerationRequest& request) override {
    if (request.num_candidates < 1) throw InvalidArg("num_candidates must be >= 1");
    const auto body = protocol::serialize(
        protocol::Request{request.post_id, request.input, request.num_candidates});

    const auto started = Clock::now();
    const auto res = client_.Post("/generate", body, "application/json");
    if (!res) {
      const auto err = res.error();
      if (err == httplib::Error::ConnectionTimeout ||
          (err == httplib::Error::Read && Clock::now() - started >= timeout_)) {
        throw Timeout("generator at " + url_ + " did not answer within " +
                      std::to_string(timeout_.count()) + " ms");
      }
      throw GeneratorUnavailable("generator at " + url_ + ": " + httplib::to_string(err));
    }
    if (res->status >= 500) {
      throw GeneratorUnavailable("generator at " + url_ + " returned HTTP " +
                                 std::to_string(res->status));
    }
    if (res->status != 200) {
      throw ProtocolError("generator at " + url_ + " returned HTTP " +
                          std::to_string(res->status));
    }

    auto response = protocol::parse_response(res->body);
    if (response.id != request.post_id) {
      throw ProtocolError("response id '" + response.id + "' does not match request '" +
                          request.post_id + "'");
    }
    if (response.error) {
      throw GeneratorUnavailable("generator failed on '" + request.post_id +
                                 "': " + *response.error);
    }
    return {sanitize_candidates(std::move(response.candidates), request.num_candidates),
            id()};
  }

  std::string id() const override { return "http:" + url_; }

 private:
  std::string url_;
  std::chrono::milliseconds timeout_;
  httplib::Client client_;
};

}  // namespace

std::unique_ptr<Generator> make_http_generator(std::string url,
                                               std::chrono::milliseconds timeout) {
  return std::make_unique<HttpGenerator>(std::move(url), timeout);
}

}  // namespace posttitle
