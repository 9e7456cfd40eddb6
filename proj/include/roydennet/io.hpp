#pragma once
/*
 * JSON artifacts. Every document carries "schema": "roydennet/1"; vertices
 * are written by label, never by dense index.
 *
 *   net.json    {schema, kappa, adjacency_factor, points:[ids], adjacency:{id:[ids]}, degree_bound, warnings}
 *   field.json  {schema, domain, values:{id: real}}
 *   report.json {schema, check, constants:{name: {value, provenance}}, measured, ceiling, pass, seed, ...}
 */

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "roydennet/geometry.hpp"
#include "roydennet/net.hpp"
#include "roydennet/transfer.hpp"
#include "roydennet/verify.hpp"

namespace roydennet {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "roydennet/1";

/// Parses a file; "-" reads stdin. Throws InputError naming the path.
Json read_json_file(const std::string& path);
/// Writes with two-space indentation and a trailing newline; "-" is stdout.
void write_json_file(const std::string& path, const Json& doc);
/// Throws InputError unless doc.schema == kSchema.
void check_schema(const Json& doc, const std::string& what);

Json net_to_json(const ProxySpace& space, const KappaNet& net);
/// Rebuilds the net on `space` and checks the stored adjacency against the
/// recomputed one.
KappaNet net_from_json(const ProxySpace& space, const Json& doc);

Json field_to_json(const ProxySpace& space, const KappaNet* net, const ScalarField& field);
/// A net-domain field needs `net`. Every vertex (or net point) must be present.
ScalarField field_from_json(const ProxySpace& space, const KappaNet* net, const Json& doc);

/// Values on a subset of proxy vertices, ascending by vertex.
struct PartialField {
  std::vector<Vertex> vertices;
  std::vector<double> values;
};
PartialField partial_field_from_json(const ProxySpace& space, const Json& doc);
Json partial_field_to_json(const ProxySpace& space, const PartialField& field);

/// runtime_ms is written only when `timing` is set, so that repeated runs
/// produce identical bytes.
Json report_to_json(const VerificationReport& report, bool timing);
VerificationReport report_from_json(const Json& doc);

/// Curve as CSV with a header row.
void write_curve_csv(std::ostream& out, const VerificationReport& report);

}  // namespace roydennet
