#include "posttitle/error.hpp"

#include <utility>

namespace posttitle {

namespace {

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ", ";
    out += id;
  }
  return out;
}

std::string at_line(std::size_t line, const std::string& what) {
  if (line == 0) return what;
  return "line " + std::to_string(line) + ": " + what;
}

std::string mismatch_message(const std::vector<std::string>& missing,
                             const std::vector<std::string>& unexpected) {
  std::string msg = "prediction/gold id mismatch";
  if (!missing.empty()) msg += "; no prediction for: " + join_ids(missing);
  if (!unexpected.empty()) msg += "; no gold title for: " + join_ids(unexpected);
  return msg;
}

}  // namespace

UnknownLanguage::UnknownLanguage(std::string tag)
    : Error("unknown language tag '" + tag + "'"), tag_(std::move(tag)) {}

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error(at_line(line, what)), line_(line) {}

SchemaError::SchemaError(std::size_t line, const std::string& what)
    : Error(at_line(line, what)), line_(line) {}

DuplicateId::DuplicateId(std::size_t line, std::string id)
    : Error(at_line(line, "duplicate post id '" + id + "'")),
      line_(line),
      id_(std::move(id)) {}

MissingPrediction::MissingPrediction(std::vector<std::string> missing,
                                     std::vector<std::string> unexpected)
    : Error(mismatch_message(missing, unexpected)),
      missing_(std::move(missing)),
      unexpected_(std::move(unexpected)) {}

}  // namespace posttitle
