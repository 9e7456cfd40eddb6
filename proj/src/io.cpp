#include "roydennet/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <ostream>

#include "roydennet/error.hpp"

namespace roydennet {

namespace {

Label parse_label(const std::string& key) {
  std::size_t used = 0;
  Label value = 0;
  try {
    value = std::stoll(key, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != key.size()) throw InputError("'" + key + "' is not a vertex id");
  return value;
}

template <class T>
T get_field(const Json& doc, const char* name) {
  if (!doc.contains(name)) throw InputError(std::string("missing field '") + name + "'");
  try {
    return doc.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string("field '") + name + "' has the wrong type");
  }
}

}  // namespace

Json read_json_file(const std::string& path) {
  try {
    if (path == "-") return Json::parse(std::cin);
    std::ifstream in(path);
    if (!in) throw InputError(path + ": cannot open file");
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path + ": invalid JSON: " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& doc) {
  if (path == "-") {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError(path + ": cannot write file");
  out << doc.dump(2) << '\n';
  if (!out) throw InputError(path + ": write failed");
}

void check_schema(const Json& doc, const std::string& what) {
  if (!doc.is_object() || !doc.contains("schema") || doc["schema"] != kSchema)
    throw InputError(what + ": expected schema \"" + kSchema + "\"");
}

Json net_to_json(const ProxySpace& space, const KappaNet& net) {
  Json doc;
  doc["schema"] = kSchema;
  doc["kappa"] = net.kappa;
  doc["adjacency_factor"] = net.adjacency_factor;
  Json points = Json::array();
  for (Vertex g : net.points) points.push_back(space.label(g));
  doc["points"] = std::move(points);
  Json adjacency = Json::object();
  for (std::size_t i = 0; i < net.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j : net.adjacency[i]) row.push_back(space.label(net.points[j]));
    adjacency[std::to_string(space.label(net.points[i]))] = std::move(row);
  }
  doc["adjacency"] = std::move(adjacency);
  doc["degree_bound"] = net.degree_bound;
  doc["warnings"] = net.warnings;
  return doc;
}

KappaNet net_from_json(const ProxySpace& space, const Json& doc) {
  check_schema(doc, "net");
  const double kappa = get_field<double>(doc, "kappa");
  NetOptions options;
  if (doc.contains("adjacency_factor")) options.adjacency_factor = get_field<double>(doc, "adjacency_factor");
  std::vector<Vertex> points;
  for (Label id : get_field<std::vector<Label>>(doc, "points")) points.push_back(space.vertex(id));
  KappaNet net = make_net(space, std::move(points), kappa, options);
  if (doc.contains("adjacency")) {
    const Json& stored = doc["adjacency"];
    if (!stored.is_object() || stored.size() != net.size())
      throw InputError("net adjacency does not list every point");
    for (std::size_t i = 0; i < net.size(); ++i) {
      const std::string key = std::to_string(space.label(net.points[i]));
      if (!stored.contains(key)) throw InputError("net adjacency is missing point " + key);
      std::vector<Label> expected;
      for (std::size_t j : net.adjacency[i]) expected.push_back(space.label(net.points[j]));
      auto got = stored[key].get<std::vector<Label>>();
      std::sort(got.begin(), got.end());
      std::sort(expected.begin(), expected.end());
      if (got != expected) throw InputError("net adjacency of point " + key + " violates the adjacency rule");
    }
  }
  return net;
}

Json field_to_json(const ProxySpace& space, const KappaNet* net, const ScalarField& field) {
  Json doc;
  doc["schema"] = kSchema;
  doc["domain"] = to_string(field.domain);
  Json values = Json::object();
  if (field.domain == FieldDomain::net) {
    if (!net || net->size() != field.size()) throw InputError("net field does not match the net");
    for (std::size_t i = 0; i < field.size(); ++i)
      values[std::to_string(space.label(net->points[i]))] = field.values[i];
  } else {
    if (field.size() != space.size()) throw InputError("proxy field does not match the space");
    for (Vertex x = 0; x < space.size(); ++x) values[std::to_string(space.label(x))] = field.values[x];
  }
  doc["values"] = std::move(values);
  return doc;
}

ScalarField field_from_json(const ProxySpace& space, const KappaNet* net, const Json& doc) {
  check_schema(doc, "field");
  const auto domain = get_field<std::string>(doc, "domain");
  if (domain != "proxy" && domain != "net") throw InputError("field domain must be 'proxy' or 'net'");
  const Json& values = doc.contains("values") ? doc["values"] : Json();
  if (!values.is_object()) throw InputError("field values must be an object keyed by vertex id");

  if (domain == "proxy") {
    std::vector<double> out(space.size(), 0.0);
    std::vector<char> seen(space.size(), 0);
    for (const auto& [key, value] : values.items()) {
      const Vertex x = space.vertex(parse_label(key));
      if (!value.is_number()) throw InputError("value of vertex " + key + " is not a number");
      out[x] = value.get<double>();
      seen[x] = 1;
    }
    for (Vertex x = 0; x < space.size(); ++x)
      if (!seen[x]) throw InputError("field has no value for vertex " + std::to_string(space.label(x)));
    return proxy_field(std::move(out));
  }
  if (!net) throw InputError("a net field needs a net");
  std::vector<double> out(net->size(), 0.0);
  std::vector<char> seen(net->size(), 0);
  for (const auto& [key, value] : values.items()) {
    const Vertex x = space.vertex(parse_label(key));
    const auto i = net->index_of(x);
    if (!i) throw InputError("vertex " + key + " is not a net point");
    if (!value.is_number()) throw InputError("value of vertex " + key + " is not a number");
    out[*i] = value.get<double>();
    seen[*i] = 1;
  }
  for (std::size_t i = 0; i < net->size(); ++i)
    if (!seen[i]) throw InputError("field has no value for net point " + std::to_string(space.label(net->points[i])));
  return net_field(std::move(out));
}

PartialField partial_field_from_json(const ProxySpace& space, const Json& doc) {
  check_schema(doc, "boundary values");
  const Json& values = doc.contains("values") ? doc["values"] : Json();
  if (!values.is_object()) throw InputError("boundary values must be an object keyed by vertex id");
  std::vector<std::pair<Vertex, double>> rows;
  for (const auto& [key, value] : values.items()) {
    if (!value.is_number()) throw InputError("value of vertex " + key + " is not a number");
    rows.emplace_back(space.vertex(parse_label(key)), value.get<double>());
  }
  std::sort(rows.begin(), rows.end());
  PartialField out;
  for (const auto& [x, v] : rows) {
    out.vertices.push_back(x);
    out.values.push_back(v);
  }
  return out;
}

Json partial_field_to_json(const ProxySpace& space, const PartialField& field) {
  Json doc;
  doc["schema"] = kSchema;
  doc["domain"] = "proxy";
  Json values = Json::object();
  for (std::size_t i = 0; i < field.vertices.size(); ++i)
    values[std::to_string(space.label(field.vertices[i]))] = field.values[i];
  doc["values"] = std::move(values);
  return doc;
}

Json report_to_json(const VerificationReport& report, bool timing) {
  Json doc;
  doc["schema"] = kSchema;
  doc["check"] = report.check;
  Json constants = Json::object();
  for (const auto& c : report.constants) constants[c.name] = {{"value", c.value}, {"provenance", c.provenance}};
  doc["constants"] = std::move(constants);
  doc["measured"] = report.measured;
  doc["ceiling"] = report.ceiling ? Json(*report.ceiling) : Json(nullptr);
  doc["pass"] = report.pass;
  doc["seed"] = report.seed;
  doc["trials"] = report.trials;
  doc["skipped"] = report.skipped;
  if (timing) doc["runtime_ms"] = report.runtime_ms;
  doc["notes"] = report.notes;
  doc["curve"] = {{"columns", report.curve_columns}, {"rows", report.curve}};
  return doc;
}

VerificationReport report_from_json(const Json& doc) {
  check_schema(doc, "report");
  VerificationReport r;
  r.check = get_field<std::string>(doc, "check");
  for (const auto& [name, c] : doc.at("constants").items())
    r.add_constant(name, c.at("value").get<double>(), c.at("provenance").get<std::string>());
  r.measured = get_field<double>(doc, "measured");
  if (!doc.at("ceiling").is_null()) r.ceiling = doc["ceiling"].get<double>();
  r.pass = get_field<bool>(doc, "pass");
  r.seed = get_field<std::uint64_t>(doc, "seed");
  r.trials = get_field<std::size_t>(doc, "trials");
  r.skipped = get_field<std::size_t>(doc, "skipped");
  if (doc.contains("runtime_ms")) r.runtime_ms = doc["runtime_ms"].get<double>();
  r.notes = get_field<std::vector<std::string>>(doc, "notes");
  r.curve_columns = doc.at("curve").at("columns").get<std::vector<std::string>>();
  r.curve = doc.at("curve").at("rows").get<std::vector<std::vector<double>>>();
  return r;
}

void write_curve_csv(std::ostream& out, const VerificationReport& report) {
  for (std::size_t i = 0; i < report.curve_columns.size(); ++i)
    out << (i ? "," : "") << report.curve_columns[i];
  out << '\n' << std::setprecision(17);
  for (const auto& row : report.curve) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

}  // namespace roydennet
