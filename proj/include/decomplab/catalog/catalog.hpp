//===--- catalog.hpp - The labeled exercise repository -----------*- C++ -*-===//

#ifndef DECOMPLAB_CATALOG_CATALOG_HPP
#define DECOMPLAB_CATALOG_CATALOG_HPP

#include "decomplab/catalog/json_io.hpp"

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace decomplab {

inline constexpr int kSchemaVersion = 1;

struct ExerciseRecord {
  std::string id;
  std::string title;
  std::string description;
  std::string unstructured;
  std::string decomposed;
  TaskAnnotation annotation;
  ComplexityLabel label;
  /// Serialized Evidence.
  Json evidence;
  std::vector<InputTuple> input_suite;
  std::optional<Provenance> provenance;
  std::vector<std::string> tags;
};

bool operator==(const ExerciseRecord &a, const ExerciseRecord &b);

struct Catalog {
  int schema_version = kSchemaVersion;
  std::vector<ExerciseRecord> records;
};

bool operator==(const Catalog &a, const Catalog &b);

/// Every failed record invariant, one message each. Empty means valid.
std::vector<std::string> validate(const ExerciseRecord &rec);

struct CatalogIssue {
  std::string record;
  std::string message;
};

/// Record checks plus catalog-wide ones (unique ids).
std::vector<CatalogIssue> validate(const Catalog &c);

/// Empty sets match anything; tags are conjunctive.
struct Query {
  std::set<int> repetition;
  std::set<int> composition;
  std::set<int> data;
  std::vector<std::string> tags;
};

std::vector<const ExerciseRecord *> query(const Catalog &c, const Query &q);

Json to_json(const ExerciseRecord &rec);
ExerciseRecord record_from_json(const Json &j, const std::string &ptr = "");
Json to_json(const Catalog &c);
Catalog catalog_from_json(const Json &j);

/// Canonical on-disk text: two-space indented JSON with a final newline.
std::string catalog_text(const Catalog &c);

void save(const Catalog &c, const std::filesystem::path &path);
Catalog load(const std::filesystem::path &path);

/// Writes dir/catalog.json and dir/exercises/<id>.{unstructured,decomposed}.mp.
void export_site(const Catalog &c, const std::filesystem::path &dir);

/// Assembles a record from a seed directory holding meta.json,
/// decomposed.mp, unstructured.mp, annotation.json, inputs.json and
/// optionally provenance.json. Label and evidence are computed.
ExerciseRecord build_record(const std::filesystem::path &seed_dir);

/// One record per subdirectory, ordered by the `order` field of meta.json.
Catalog build_catalog(const std::filesystem::path &seeds_dir);

std::string read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, const std::string &text);

} // namespace decomplab

#endif // DECOMPLAB_CATALOG_CATALOG_HPP
