#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "beliefnet/mlp.hpp"

namespace beliefnet {

/// A trained network together with its output classes and input scaling.
struct Model {
  Network<double> network;
  Frame classes;
  FeatureScaling scaling;

  std::size_t predict(const Eigen::VectorXd& features, DecisionCriterion criterion = DecisionCriterion::max_betp) const {
    return classify(network, scaling.apply(features), criterion, classes);
  }
};

/// {"sizes":[..],"c":..,"bias":..,"weights":[[row-major in x out]..],"biases":[[..]..],
///  "classes":[..],"scaling":{"mean":[..],"scale":[..]}}
nlohmann::json model_to_json(const Model& model);
Model model_from_json(const nlohmann::json& j);

}  // namespace beliefnet
