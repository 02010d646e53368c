#include "decomplab/catalog/catalog.hpp"

#include "decomplab/lang/parser.hpp"
#include "decomplab/lang/printer.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace decomplab {

namespace fs = std::filesystem;

bool operator==(const ExerciseRecord &a, const ExerciseRecord &b) {
  return a.id == b.id && a.title == b.title &&
         a.description == b.description && a.unstructured == b.unstructured &&
         a.decomposed == b.decomposed && a.annotation == b.annotation &&
         a.label == b.label && a.evidence == b.evidence &&
         a.input_suite == b.input_suite && a.provenance == b.provenance &&
         a.tags == b.tags;
}

bool operator==(const Catalog &a, const Catalog &b) {
  return a.schema_version == b.schema_version && a.records == b.records;
}

std::string read_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw CatalogError(CatalogError::Kind::Io, "",
                       "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text) || !out.flush())
    throw CatalogError(CatalogError::Kind::Io, "",
                       "cannot write " + path.string());
}

//===----------------------------------------------------------------------===//
// Validation
//===----------------------------------------------------------------------===//

namespace {

bool valid_slug(const std::string &id) {
  if (id.empty() || id.front() == '-' || id.back() == '-')
    return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
  });
}

std::string label_text(const ComplexityLabel &l) {
  return "(" + std::to_string(l.repetition) + "," +
         std::to_string(l.composition) + "," + std::to_string(l.data) + ")";
}

} // namespace

std::vector<std::string> validate(const ExerciseRecord &rec) {
  std::vector<std::string> issues;
  if (!valid_slug(rec.id))
    issues.push_back("id '" + rec.id + "' is not a URL-safe slug");
  if (rec.input_suite.empty())
    issues.push_back("input_suite is empty");

  std::optional<Program> unstructured, decomposed;
  try {
    unstructured = parse(rec.unstructured);
  } catch (const ParseError &e) {
    issues.push_back(std::string("unstructured does not parse: ") + e.what());
  }
  try {
    decomposed = parse(rec.decomposed);
  } catch (const ParseError &e) {
    issues.push_back(std::string("decomposed does not parse: ") + e.what());
  }
  if (decomposed) {
    auto normal = check_call_normal(*decomposed);
    for (const auto &d : normal.diagnostics)
      issues.push_back("decomposed is not call-normal: " + d.function + ": " +
                       d.message);
  }

  if (unstructured) {
    try {
      Classification c = classify(
          *unstructured, rec.annotation,
          rec.provenance ? &*rec.provenance : nullptr);
      if (!(c.label == rec.label))
        issues.push_back("label mismatch: stored " + label_text(rec.label) +
                         ", classifier says " + label_text(c.label));
      else if (to_json(c.evidence) != rec.evidence)
        issues.push_back("evidence is stale");
    } catch (const ClassifyError &e) {
      issues.push_back(std::string("classification failed: ") + e.what());
    }
  }

  if (unstructured && decomposed && !rec.input_suite.empty()) {
    try {
      for (const auto &in : rec.input_suite) {
        check_arguments(*unstructured, in);
        check_arguments(*decomposed, in);
      }
      EquivalenceReport r =
          equivalent(*unstructured, *decomposed, rec.input_suite);
      if (!r.equivalent) {
        const Divergence &d = *r.first_divergence;
        issues.push_back("not equivalent on input " +
                         std::to_string(d.input_index) + ": expected '" +
                         d.expected + "', got '" + d.actual + "'");
      }
    } catch (const RuntimeError &e) {
      issues.push_back(std::string("input suite does not fit main: ") +
                       e.what());
    }
  }

  if (rec.provenance && unstructured && decomposed) {
    try {
      GenerateResult g = replay(*decomposed, *rec.provenance);
      if (pretty_print(g.unstructured) != pretty_print(*unstructured))
        issues.push_back("provenance replay does not reproduce unstructured");
      else if (!(g.annotation == rec.annotation))
        issues.push_back("provenance replay does not reproduce annotation");
      else if (!(g.provenance == *rec.provenance))
        issues.push_back("provenance record is stale");
    } catch (const std::exception &e) {
      issues.push_back(std::string("provenance replay failed: ") + e.what());
    }
  }
  return issues;
}

std::vector<CatalogIssue> validate(const Catalog &c) {
  std::vector<CatalogIssue> out;
  if (c.schema_version != kSchemaVersion)
    out.push_back({"", "unsupported schema_version " +
                           std::to_string(c.schema_version)});
  std::set<std::string> seen;
  for (const auto &rec : c.records) {
    if (!seen.insert(rec.id).second)
      out.push_back({rec.id, "duplicate id"});
    for (auto &m : validate(rec))
      out.push_back({rec.id, std::move(m)});
  }
  return out;
}

std::vector<const ExerciseRecord *> query(const Catalog &c, const Query &q) {
  auto admits = [](const std::set<int> &s, int v) {
    return s.empty() || s.count(v);
  };
  std::vector<const ExerciseRecord *> out;
  for (const auto &rec : c.records) {
    if (!admits(q.repetition, rec.label.repetition) ||
        !admits(q.composition, rec.label.composition) ||
        !admits(q.data, rec.label.data))
      continue;
    bool tagged = std::all_of(q.tags.begin(), q.tags.end(), [&](auto &t) {
      return std::find(rec.tags.begin(), rec.tags.end(), t) != rec.tags.end();
    });
    if (tagged)
      out.push_back(&rec);
  }
  return out;
}

//===----------------------------------------------------------------------===//
// Serialization
//===----------------------------------------------------------------------===//

Json to_json(const ExerciseRecord &rec) {
  return Json{{"id", rec.id},
              {"title", rec.title},
              {"description", rec.description},
              {"unstructured", rec.unstructured},
              {"decomposed", rec.decomposed},
              {"annotation", to_json(rec.annotation)},
              {"label", to_json(rec.label)},
              {"evidence", rec.evidence},
              {"input_suite", to_json(rec.input_suite)},
              {"provenance",
               rec.provenance ? to_json(*rec.provenance) : Json()},
              {"tags", rec.tags}};
}

namespace {

[[noreturn]] void malformed(const std::string &ptr, const std::string &why) {
  throw CatalogError(CatalogError::Kind::MalformedCatalog, ptr, why);
}

std::string string_field(const Json &j, const std::string &ptr,
                         const char *key) {
  if (!j[key].is_string())
    malformed(ptr + "/" + key, "expected a string");
  return j[key].get<std::string>();
}

} // namespace

ExerciseRecord record_from_json(const Json &j, const std::string &ptr) {
  static const std::set<std::string> fields = {
      "id",    "title",    "description", "unstructured",
      "decomposed", "annotation", "label", "evidence",
      "input_suite", "provenance", "tags"};
  if (!j.is_object())
    malformed(ptr, "expected a record object");
  for (const auto &f : fields)
    if (!j.contains(f))
      malformed(ptr + "/" + f, "missing field");
  for (const auto &[k, v] : j.items())
    if (!fields.count(k))
      malformed(ptr + "/" + k, "unknown field");

  ExerciseRecord rec;
  rec.id = string_field(j, ptr, "id");
  rec.title = string_field(j, ptr, "title");
  rec.description = string_field(j, ptr, "description");
  rec.unstructured = string_field(j, ptr, "unstructured");
  rec.decomposed = string_field(j, ptr, "decomposed");
  rec.annotation = annotation_from_json(j["annotation"], ptr + "/annotation");
  rec.label = label_from_json(j["label"], ptr + "/label");
  if (!j["evidence"].is_object())
    malformed(ptr + "/evidence", "expected an object");
  rec.evidence = j["evidence"];
  rec.input_suite = inputs_from_json(j["input_suite"], ptr + "/input_suite");
  if (!j["provenance"].is_null())
    rec.provenance =
        provenance_from_json(j["provenance"], ptr + "/provenance");
  if (!j["tags"].is_array())
    malformed(ptr + "/tags", "expected an array");
  for (std::size_t i = 0; i < j["tags"].size(); ++i) {
    if (!j["tags"][i].is_string())
      malformed(ptr + "/tags/" + std::to_string(i), "expected a string");
    rec.tags.push_back(j["tags"][i].get<std::string>());
  }
  return rec;
}

Json to_json(const Catalog &c) {
  Json records = Json::array();
  for (const auto &r : c.records)
    records.push_back(to_json(r));
  return Json{{"schema_version", c.schema_version}, {"records", records}};
}

Catalog catalog_from_json(const Json &j) {
  if (!j.is_object())
    malformed("", "expected the catalog object");
  if (!j.contains("schema_version"))
    malformed("/schema_version", "missing field");
  if (!j["schema_version"].is_number_integer())
    malformed("/schema_version", "expected an integer");
  if (j["schema_version"].get<std::int64_t>() != kSchemaVersion)
    throw CatalogError(
        CatalogError::Kind::SchemaVersionMismatch, "/schema_version",
        "expected " + std::to_string(kSchemaVersion) + ", found " +
            j["schema_version"].dump());
  for (const auto &[k, v] : j.items())
    if (k != "schema_version" && k != "records")
      malformed("/" + k, "unknown field");
  if (!j.contains("records") || !j["records"].is_array())
    malformed("/records", "expected an array");
  Catalog c;
  for (std::size_t i = 0; i < j["records"].size(); ++i)
    c.records.push_back(
        record_from_json(j["records"][i], "/records/" + std::to_string(i)));
  return c;
}

std::string catalog_text(const Catalog &c) { return to_json(c).dump(2) + "\n"; }

void save(const Catalog &c, const fs::path &path) {
  write_file(path, catalog_text(c));
}

Catalog load(const fs::path &path) {
  return catalog_from_json(parse_json(read_file(path)));
}

void export_site(const Catalog &c, const fs::path &dir) {
  std::error_code ec;
  fs::create_directories(dir / "exercises", ec);
  if (ec)
    throw CatalogError(CatalogError::Kind::Io, "",
                       "cannot create " + (dir / "exercises").string() +
                           ": " + ec.message());
  save(c, dir / "catalog.json");
  for (const auto &rec : c.records) {
    // Sources are stored pretty-printed already; re-printing keeps the
    // exported files canonical even for hand-edited catalogs.
    auto canonical = [](const std::string &src) {
      try {
        return pretty_print(parse(src));
      } catch (const ParseError &) {
        return src;
      }
    };
    write_file(dir / "exercises" / (rec.id + ".unstructured.mp"),
               canonical(rec.unstructured));
    write_file(dir / "exercises" / (rec.id + ".decomposed.mp"),
               canonical(rec.decomposed));
  }
}

//===----------------------------------------------------------------------===//
// Seeds
//===----------------------------------------------------------------------===//

namespace {

struct SeedMeta {
  ExerciseRecord rec;
  int order = 0;
};

SeedMeta read_meta(const fs::path &dir) {
  std::string ptr = (dir / "meta.json").string();
  Json j = parse_json(read_file(dir / "meta.json"));
  if (!j.is_object())
    malformed(ptr, "expected an object");
  SeedMeta m;
  for (const auto &[k, v] : j.items()) {
    if (k == "order" && v.is_number_integer())
      m.order = v.get<int>();
    else if (k == "tags" && v.is_array())
      for (const auto &t : v)
        m.rec.tags.push_back(t.get<std::string>());
    else if ((k == "id" || k == "title" || k == "description") &&
             v.is_string())
      (k == "id" ? m.rec.id : k == "title" ? m.rec.title : m.rec.description) =
          v.get<std::string>();
    else
      malformed(ptr + "#/" + k, "unexpected meta field");
  }
  return m;
}

} // namespace

ExerciseRecord build_record(const fs::path &seed_dir) {
  ExerciseRecord rec = read_meta(seed_dir).rec;
  Program unstructured = parse(read_file(seed_dir / "unstructured.mp"));
  Program decomposed = parse(read_file(seed_dir / "decomposed.mp"));
  rec.unstructured = pretty_print(unstructured);
  rec.decomposed = pretty_print(decomposed);
  rec.annotation =
      annotation_from_json(parse_json(read_file(seed_dir / "annotation.json")));
  rec.input_suite =
      inputs_from_json(parse_json(read_file(seed_dir / "inputs.json")));
  if (fs::exists(seed_dir / "provenance.json"))
    rec.provenance = provenance_from_json(
        parse_json(read_file(seed_dir / "provenance.json")));
  Classification c = classify(unstructured, rec.annotation,
                              rec.provenance ? &*rec.provenance : nullptr);
  rec.label = c.label;
  rec.evidence = to_json(c.evidence);
  return rec;
}

Catalog build_catalog(const fs::path &seeds_dir) {
  std::vector<std::pair<int, fs::path>> dirs;
  for (const auto &entry : fs::directory_iterator(seeds_dir))
    if (entry.is_directory())
      dirs.emplace_back(read_meta(entry.path()).order, entry.path());
  std::sort(dirs.begin(), dirs.end());
  Catalog c;
  for (const auto &[order, dir] : dirs)
    c.records.push_back(build_record(dir));
  return c;
}

} // namespace decomplab
