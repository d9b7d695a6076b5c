#include "beliefnet/model.hpp"

#include "beliefnet/io.hpp"

namespace beliefnet {

using nlohmann::json;

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd vector_from(const json& j, Eigen::Index expected, const std::string& what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != expected)
    throw FormatError(what + " must be an array of " + std::to_string(expected) + " numbers");
  Eigen::VectorXd v(expected);
  for (Eigen::Index i = 0; i < expected; ++i) {
    const auto& x = j[static_cast<std::size_t>(i)];
    if (!x.is_number()) throw FormatError(what + " must contain numbers");
    v(i) = x.get<double>();
  }
  return v;
}

}  // namespace

json model_to_json(const Model& model) {
  const auto& net = model.network;
  json weights = json::array();
  json biases = json::array();
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const auto& w = net.weights(l);
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(w.size()));
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) flat.push_back(w(i, j));
    weights.push_back(flat);
    biases.push_back(to_std(net.biases(l)));
  }
  return json{{"sizes", net.sizes()},
              {"c", net.slope()},
              {"bias", net.use_bias()},
              {"weights", std::move(weights)},
              {"biases", std::move(biases)},
              {"classes", model.classes.labels()},
              {"scaling", {{"mean", to_std(model.scaling.mean)}, {"scale", to_std(model.scaling.scale)}}}};
}

Model model_from_json(const json& j) {
  try {
    const auto sizes = j.at("sizes").get<std::vector<int>>();
    Network<double> net(sizes, j.at("c").get<double>(), j.value("bias", true));
    const json& weights = j.at("weights");
    const json& biases = j.at("biases");
    if (weights.size() != net.layer_count() || biases.size() != net.layer_count())
      throw FormatError("model has the wrong number of layers");
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
      auto& w = net.weights(l);
      const Eigen::VectorXd flat = vector_from(weights[l], w.size(), "weights[" + std::to_string(l) + "]");
      for (Eigen::Index r = 0; r < w.rows(); ++r)
        for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = flat(r * w.cols() + c);
      net.biases(l) = vector_from(biases[l], net.biases(l).size(), "biases[" + std::to_string(l) + "]");
    }
    Model model{std::move(net), Frame(j.at("classes").get<std::vector<std::string>>()), {}};
    if (static_cast<int>(model.classes.size()) != model.network.output_size())
      throw FormatError("model classes do not match the output layer");
    const Eigen::Index n = model.network.input_size();
    if (j.contains("scaling")) {
      model.scaling.mean = vector_from(j["scaling"].at("mean"), n, "scaling.mean");
      model.scaling.scale = vector_from(j["scaling"].at("scale"), n, "scaling.scale");
    } else {
      model.scaling = FeatureScaling::identity(n);
    }
    return model;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed model: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("malformed model: ") + e.what());
  }
}

}  // namespace beliefnet
