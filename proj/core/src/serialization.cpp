#include "distillab/serialization.hpp"

#include <json.hpp>

#include "distillab/induced.hpp"
#include "distillab/json_writer.hpp"

namespace distillab {

std::string distribution_to_json(const NoisyDistribution& d) {
  JsonWriter w;
  w.begin_object();
  w.key_value("num_labels", d.num_labels());
  w.key("metric").begin_object();
  w.key_value("kind", d.metric().kind_name());
  w.key_value("dim", d.metric().dimension);
  w.end_object();
  w.key("atoms").begin_array();
  for (const Atom& a : d.atoms()) {
    w.begin_object();
    w.key("coords").begin_array();
    for (double c : a.point.coords) w.value(c);
    w.end_array();
    w.key_value("mass", a.mass);
    w.key("cond").begin_array();
    for (double p : a.cond) w.value(p);
    w.end_array();
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.take();
}

NoisyDistribution distribution_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  const int num_labels = j.at("num_labels").get<int>();
  const MetricSpace metric = MetricSpace::from_kind_name(
      j.at("metric").at("kind").get<std::string>(), j.at("metric").at("dim").get<int>());
  std::vector<Atom> atoms;
  for (const auto& ja : j.at("atoms")) {
    Atom a;
    a.point.coords = ja.at("coords").get<std::vector<double>>();
    a.mass = ja.at("mass").get<double>();
    a.cond = ja.at("cond").get<std::vector<double>>();
    atoms.push_back(std::move(a));
  }
  return NoisyDistribution(std::move(atoms), num_labels, metric);
}

std::string Certificate::to_json() const {
  JsonWriter w;
  w.begin_object();
  w.key("inputs").begin_object();
  w.key_value("alpha", alpha);
  w.key_value("epsilon", epsilon);
  w.key_value("m", m);
  w.key_value("seed", seed);
  if (has_tau) w.key_value("tau", tau);
  w.key_value("trials", trials);
  w.end_object();
  w.key_value("kind", kind);
  w.key("statistics").begin_object();
  for (const auto& [name, value] : statistics) w.key_value(name, value);
  w.end_object();
  w.key_value("verdict", verdict_name(verdict));
  w.end_object();
  return w.take();
}

}  // namespace distillab
