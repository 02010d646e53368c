//===--- json_io.hpp - JSON forms of the artifact types ----------*- C++ -*-===//
//
// Readers are strict: unknown or missing fields raise CatalogError with the
// JSON pointer of the offending value.
//
//===----------------------------------------------------------------------===//

#ifndef DECOMPLAB_CATALOG_JSON_IO_HPP
#define DECOMPLAB_CATALOG_JSON_IO_HPP

#include "decomplab/analysis/analysis.hpp"
#include "decomplab/classifier/classifier.hpp"
#include "decomplab/interp/interpreter.hpp"
#include "decomplab/transform/transform.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace decomplab {

using Json = nlohmann::ordered_json;

class CatalogError : public std::runtime_error {
public:
  enum class Kind { SchemaVersionMismatch, MalformedCatalog, Io };

  CatalogError(Kind kind, std::string pointer, const std::string &message);

  Kind kind() const noexcept { return kind_; }
  /// JSON pointer of the offending value; empty for Io.
  const std::string &pointer() const noexcept { return pointer_; }

private:
  Kind kind_;
  std::string pointer_;
};

std::string_view to_string(CatalogError::Kind kind) noexcept;

Json to_json(const Value &v);
Value value_from_json(const Json &j, const std::string &ptr = "");

Json to_json(std::span<const InputTuple> inputs);
std::vector<InputTuple> inputs_from_json(const Json &j,
                                         const std::string &ptr = "");

Json to_json(const TaskAnnotation &ann);
TaskAnnotation annotation_from_json(const Json &j,
                                    const std::string &ptr = "");

Json to_json(const Provenance &prov);
Provenance provenance_from_json(const Json &j, const std::string &ptr = "");

Json to_json(const ComplexityLabel &label);
ComplexityLabel label_from_json(const Json &j, const std::string &ptr = "");

Json to_json(const Evidence &ev);
Json to_json(const Trace &t);
Json to_json(const EquivalenceReport &r);
Json to_json(const DefUse &du, const DepGraph &g);

/// Parses text, mapping syntax errors to MalformedCatalog.
Json parse_json(const std::string &text);

} // namespace decomplab

#endif // DECOMPLAB_CATALOG_JSON_IO_HPP
