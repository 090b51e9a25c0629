#include "regimevar/model_io.hpp"

#include "regimevar/errors.hpp"

#include <fstream>
#include <sstream>

namespace regimevar {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw InputError(path + ": " + msg);
}

const json& member(const json& obj, const std::string& path,
                   const char* key) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing field");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

long long integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<long long>();
}

std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

}  // namespace

RegimeModel model_from_json(const json& doc) {
  const std::string root = "$";
  if (!doc.is_object()) fail(root, "expected an object");

  const long long states = integer(member(doc, root, "states"), "$.states");
  if (states < 1) fail("$.states", "must be >= 1");
  const auto m = static_cast<std::size_t>(states);

  RegimeModel model;

  const json& gen = member(doc, root, "generator");
  if (!gen.is_array() || gen.size() != m)
    fail("$.generator", "expected an array of " + std::to_string(m) + " rows");
  model.generator.resize(static_cast<Eigen::Index>(m),
                         static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const std::string rp = index_path("$.generator", i);
    const json& row = gen[i];
    if (!row.is_array() || row.size() != m)
      fail(rp, "expected an array of " + std::to_string(m) + " numbers");
    for (std::size_t j = 0; j < m; ++j) {
      model.generator(static_cast<Eigen::Index>(i),
                      static_cast<Eigen::Index>(j)) =
          number(row[j], index_path(rp, j));
    }
  }

  const json& regs = member(doc, root, "regimes");
  if (!regs.is_array() || regs.size() != m)
    fail("$.regimes", "expected an array of " + std::to_string(m) + " regimes");
  for (std::size_t i = 0; i < m; ++i) {
    const std::string rp = index_path("$.regimes", i);
    const json& r = regs[i];
    RegimeParams p;
    p.mu = number(member(r, rp, "mu"), rp + ".mu");
    p.sigma = number(member(r, rp, "sigma"), rp + ".sigma");
    p.lambda = number(member(r, rp, "lambda"), rp + ".lambda");
    const json& j = member(r, rp, "jump");
    p.jump.mean = number(member(j, rp + ".jump", "a"), rp + ".jump.a");
    p.jump.stdev = number(member(j, rp + ".jump", "b"), rp + ".jump.b");
    model.regimes.push_back(p);
  }

  const long long init =
      integer(member(doc, root, "initial_state"), "$.initial_state");
  if (init < 1 || init > states)
    fail("$.initial_state", "must be in 1.." + std::to_string(m));
  model.initial_regime = static_cast<std::size_t>(init - 1);

  const json& meas = member(doc, root, "measure");
  if (meas.is_string()) {
    if (meas.get<std::string>() != "P")
      fail("$.measure", "expected \"P\" or {\"Q\": {\"r\": ...}}");
    model.measure = Historical{};
  } else if (meas.is_object()) {
    const json& q = member(meas, "$.measure", "Q");
    model.measure = RiskNeutral{number(member(q, "$.measure.Q", "r"),
                                       "$.measure.Q.r")};
  } else {
    fail("$.measure", "expected \"P\" or {\"Q\": {\"r\": ...}}");
  }

  const auto problems = validate(model);
  if (!problems.empty()) fail(root, problems.front());
  return model;
}

json model_to_json(const RegimeModel& model) {
  json doc;
  const auto m = static_cast<Eigen::Index>(model.states());
  doc["states"] = model.states();
  json gen = json::array();
  for (Eigen::Index i = 0; i < m; ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m; ++j) row.push_back(model.generator(i, j));
    gen.push_back(row);
  }
  doc["generator"] = gen;
  json regs = json::array();
  for (const auto& p : model.regimes) {
    regs.push_back({{"mu", p.mu},
                    {"sigma", p.sigma},
                    {"lambda", p.lambda},
                    {"jump", {{"a", p.jump.mean}, {"b", p.jump.stdev}}}});
  }
  doc["regimes"] = regs;
  doc["initial_state"] = model.initial_regime + 1;
  if (const auto* rn = std::get_if<RiskNeutral>(&model.measure)) {
    doc["measure"] = {{"Q", {{"r", rn->rate}}}};
  } else {
    doc["measure"] = "P";
  }
  return doc;
}

RegimeModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string() + ": cannot open file");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": malformed JSON (" + e.what() + ")");
  }
  try {
    return model_from_json(doc);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace regimevar
