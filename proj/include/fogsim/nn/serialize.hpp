#pragma once

#include "fogsim/nn/lstm.hpp"
#include "fogsim/nn/network.hpp"

#include <json.hpp>

#include <string>

namespace fogsim::nn {

nlohmann::json to_json(const Network& net);
Network network_from_json(const nlohmann::json& j);

nlohmann::json to_json(const LstmPredictor& p);
LstmPredictor lstm_from_json(const nlohmann::json& j);

void save_json(const std::string& path, const nlohmann::json& j);
nlohmann::json load_json(const std::string& path);

}  // namespace fogsim::nn
