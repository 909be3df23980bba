#include "mentalgen/intent/persistence.hpp"

#include <fstream>

namespace mentalgen::intent {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "mentalgen.intent_model";

json machine_json(const BinarySvm& m, Command c) {
  json svs = json::array();
  for (std::size_t r = 0; r < m.support_vectors.rows(); ++r) {
    auto row = m.support_vectors.row(r);
    svs.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return {{"command", to_string(c)},   {"bias", m.bias},
          {"gamma", m.gamma},          {"C", m.C},
          {"iterations", m.iterations}, {"converged", m.converged},
          {"support_indices", m.support_indices}, {"dual_coef", m.dual_coef},
          {"support_vectors", svs}};
}

BinarySvm machine_from_json(const json& j, std::size_t dims) {
  BinarySvm m;
  m.bias = j.at("bias").get<double>();
  m.gamma = j.at("gamma").get<double>();
  m.C = j.at("C").get<double>();
  m.iterations = j.at("iterations").get<std::size_t>();
  m.converged = j.at("converged").get<bool>();
  m.support_indices = j.at("support_indices").get<std::vector<std::size_t>>();
  m.dual_coef = j.at("dual_coef").get<std::vector<double>>();
  const auto rows = j.at("support_vectors").get<std::vector<std::vector<double>>>();
  m.support_vectors = rows.empty() ? Matrix(0, dims) : Matrix::from_rows(rows);
  if (m.dual_coef.size() != m.support_vectors.rows() || m.support_vectors.cols() != dims)
    throw ParseError("model machine dimensions are inconsistent", 0);
  return m;
}

}  // namespace

json to_json(const CvReport& cv) {
  json per_command = json::object();
  for (Command c : kAllCommands) per_command[std::string(to_string(c))] = cv.per_command[index_of(c)];
  return {{"folds", cv.folds},
          {"overall_accuracy", cv.overall_accuracy},
          {"per_command", per_command},
          {"fold_accuracy", cv.fold_accuracy},
          {"confusion", cv.confusion}};
}

json to_json(const Prediction& p) {
  return {{"command", to_string(p.command)}, {"confidence", p.confidence}, {"decision_values", p.decision_values}};
}

Prediction prediction_from_json(const json& j) {
  Prediction p;
  p.command = parse_command(j.at("command").get<std::string>());
  p.confidence = j.at("confidence").get<double>();
  p.decision_values = j.at("decision_values").get<std::array<double, kCommandCount>>();
  return p;
}

json to_json(const IntentModel& model) {
  json machines = json::array();
  for (Command c : kAllCommands) machines.push_back(machine_json(model.machines[index_of(c)], c));
  return {{"format", kFormat},
          {"v", kModelFormatVersion},
          {"dims", model.dims()},
          {"feature_fingerprint", model.feature_fingerprint},
          {"params",
           {{"C", model.params.C},
            {"gamma_mode", model.params.gamma_mode == GammaMode::scale ? "scale" : "fixed"},
            {"gamma", model.params.gamma},
            {"tol", model.params.tol}}},
          {"gamma", model.gamma},
          {"norm", {{"mean", model.norm.mean}, {"stddev", model.norm.stddev}}},
          {"machines", machines},
          {"cv", to_json(model.cv)}};
}

IntentModel model_from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != kFormat) throw ParseError("not an intent model file", 0);
    if (j.at("v").get<int>() != kModelFormatVersion)
      throw ParseError("unsupported model version " + j.at("v").dump(), 0);
    IntentModel m;
    const auto dims = j.at("dims").get<std::size_t>();
    m.feature_fingerprint = j.at("feature_fingerprint").get<std::string>();
    const auto& p = j.at("params");
    m.params.C = p.at("C").get<double>();
    m.params.gamma_mode = p.at("gamma_mode").get<std::string>() == "scale" ? GammaMode::scale : GammaMode::fixed;
    m.params.gamma = p.at("gamma").get<double>();
    m.params.tol = p.at("tol").get<double>();
    m.gamma = j.at("gamma").get<double>();
    m.norm.mean = j.at("norm").at("mean").get<std::vector<double>>();
    m.norm.stddev = j.at("norm").at("stddev").get<std::vector<double>>();
    if (m.norm.mean.size() != dims || m.norm.stddev.size() != dims) throw ParseError("norm stats length != dims", 0);
    const auto& machines = j.at("machines");
    if (machines.size() != kCommandCount) throw ParseError("model must hold exactly 3 machines", 0);
    for (const auto& mj : machines) {
      const Command c = parse_command(mj.at("command").get<std::string>());
      m.machines[index_of(c)] = machine_from_json(mj, dims);
    }
    const auto& cv = j.at("cv");
    m.cv.folds = cv.at("folds").get<std::size_t>();
    m.cv.overall_accuracy = cv.at("overall_accuracy").get<double>();
    for (Command c : kAllCommands) m.cv.per_command[index_of(c)] = cv.at("per_command").at(std::string(to_string(c)));
    m.cv.fold_accuracy = cv.at("fold_accuracy").get<std::vector<double>>();
    m.cv.confusion = cv.at("confusion").get<decltype(m.cv.confusion)>();
    return m;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid model document: ") + e.what(), 0);
  }
}

void save_model(const IntentModel& model, const std::filesystem::path& path, const json& extra) {
  json doc = to_json(model);
  if (extra.is_object())
    for (const auto& [k, v] : extra.items()) doc[k] = v;
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << doc.dump(1) << '\n';
}

IntentModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open model " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model is not valid JSON: ") + e.what(), 0);
  }
  return model_from_json(j);
}

}  // namespace mentalgen::intent
