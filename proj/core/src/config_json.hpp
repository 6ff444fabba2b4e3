#pragma once

#include "json.hpp"
#include "posttitle/config.hpp"

namespace posttitle {

nlohmann::ordered_json config_json(const PipelineConfig& config);

}  // namespace posttitle
