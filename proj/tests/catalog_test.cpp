#include "decomplab/catalog/catalog.hpp"

#include "support/seeds.hpp"

#include <gtest/gtest.h>

#include <random>

namespace decomplab {
namespace {

namespace fs = std::filesystem;
using testing::kRepoDir;
using testing::kSeedsDir;

fs::path scratch_dir(const std::string &tag) {
  static std::mt19937_64 rng(std::random_device{}());
  fs::path dir = fs::temp_directory_path() /
                 ("decomplab-" + tag + "-" + std::to_string(rng()));
  fs::create_directories(dir);
  return dir;
}

const Catalog &seed_catalog() {
  static const Catalog c = load(kRepoDir / "catalog.json");
  return c;
}

const ExerciseRecord &record(const Catalog &c, const std::string &id) {
  for (const auto &r : c.records)
    if (r.id == id)
      return r;
  throw std::runtime_error("no record " + id);
}

std::vector<std::string> ids(const std::vector<const ExerciseRecord *> &rs) {
  std::vector<std::string> out;
  for (const auto *r : rs)
    out.push_back(r->id);
  return out;
}

bool mentions(const std::vector<std::string> &issues, const std::string &s) {
  for (const auto &i : issues)
    if (i.find(s) != std::string::npos)
      return true;
  return false;
}

TEST(Catalog, CommittedCatalogMatchesSeeds) {
  Catalog built = build_catalog(kSeedsDir);
  EXPECT_EQ(catalog_text(built), read_file(kRepoDir / "catalog.json"));
  ASSERT_EQ(built.records.size(), testing::kSeedLabels.size());
  for (std::size_t k = 0; k < built.records.size(); ++k) {
    EXPECT_EQ(built.records[k].id, testing::kSeedLabels[k].id);
    EXPECT_EQ(built.records[k].label, testing::kSeedLabels[k].label);
  }
}

TEST(Validate, EverySeedPasses) {
  for (const auto &rec : seed_catalog().records)
    EXPECT_TRUE(validate(rec).empty()) << rec.id;
  EXPECT_TRUE(validate(seed_catalog()).empty());
}

TEST(Validate, StaleLabel) {
  ExerciseRecord rec = record(seed_catalog(), "rubiks");
  rec.label.data = 1;
  auto issues = validate(rec);
  ASSERT_FALSE(issues.empty());
  EXPECT_TRUE(mentions(issues, "label mismatch")) << issues[0];
  EXPECT_TRUE(mentions(issues, "classifier says (0,1,2)")) << issues[0];
}

TEST(Validate, EmptySuite) {
  ExerciseRecord rec = record(seed_catalog(), "garden");
  rec.input_suite.clear();
  EXPECT_TRUE(mentions(validate(rec), "input_suite is empty"));
}

TEST(Validate, BadSlugAndDuplicateIds) {
  Catalog c = seed_catalog();
  c.records[1].id = "Old MacDonald";
  c.records.push_back(c.records[0]);
  auto issues = validate(c);
  bool slug = false, dup = false;
  for (const auto &i : issues) {
    slug |= i.message.find("slug") != std::string::npos;
    dup |= i.record == "fish" && i.message == "duplicate id";
  }
  EXPECT_TRUE(slug);
  EXPECT_TRUE(dup);
}

TEST(Validate, BehaviorChange) {
  ExerciseRecord rec = record(seed_catalog(), "rubiks");
  auto at = rec.unstructured.find("fit_length * fit_width");
  ASSERT_NE(at, std::string::npos);
  rec.unstructured[at + 11] = '+';
  EXPECT_TRUE(mentions(validate(rec), "not equivalent"));
}

TEST(Validate, StaleEvidenceAndBrokenReplay) {
  ExerciseRecord rec = record(seed_catalog(), "garden");
  rec.evidence["data"]["level"] = 2;
  EXPECT_TRUE(mentions(validate(rec), "evidence is stale"));

  ExerciseRecord r2 = record(seed_catalog(), "old-macdonald");
  ASSERT_TRUE(r2.provenance);
  r2.provenance->instances.pop_back();
  EXPECT_TRUE(mentions(validate(r2), "provenance record is stale"));
  r2 = record(seed_catalog(), "old-macdonald");
  r2.provenance->hoisted = true;
  EXPECT_FALSE(validate(r2).empty());
}

TEST(Query, Examples) {
  const Catalog &c = seed_catalog();
  EXPECT_EQ(query(c, {}).size(), c.records.size());
  Query data3;
  data3.data = {3};
  EXPECT_EQ(ids(query(c, data3)), std::vector<std::string>{"garden"});
  Query none;
  none.repetition = {3};
  none.composition = {3};
  EXPECT_TRUE(query(c, none).empty());
  Query comp;
  comp.composition = {2, 3};
  EXPECT_EQ(ids(query(c, comp)),
            (std::vector<std::string>{"min-count-inclusion",
                                      "min-count-interleaved"}));
}

TEST(Query, TagsAreConjunctive) {
  const Catalog &c = seed_catalog();
  Query q;
  q.tags = {"lists"};
  EXPECT_EQ(query(c, q).size(), 3u);
  q.tags = {"lists", "strings"};
  EXPECT_TRUE(query(c, q).empty());
}

TEST(Query, ResultsFollowCatalogOrder) {
  const Catalog &c = seed_catalog();
  for (int level = 0; level < 4; ++level) {
    Query q;
    q.repetition = {0, level};
    auto rs = query(c, q);
    std::size_t last = 0;
    for (const auto *r : rs) {
      std::size_t at = static_cast<std::size_t>(r - c.records.data());
      EXPECT_GE(at, last);
      last = at;
    }
  }
}

TEST(Persistence, SaveLoadRoundTrip) {
  fs::path dir = scratch_dir("save");
  save(seed_catalog(), dir / "c.json");
  Catalog back = load(dir / "c.json");
  EXPECT_EQ(back, seed_catalog());
  EXPECT_EQ(read_file(dir / "c.json"), catalog_text(seed_catalog()));
  fs::remove_all(dir);
}

CatalogError load_error(const std::string &text) {
  fs::path dir = scratch_dir("bad");
  write_file(dir / "c.json", text);
  try {
    load(dir / "c.json");
  } catch (const CatalogError &e) {
    fs::remove_all(dir);
    return e;
  }
  fs::remove_all(dir);
  ADD_FAILURE() << "loaded: " << text.substr(0, 80);
  return CatalogError(CatalogError::Kind::Io, "", "");
}

TEST(Persistence, Rejections) {
  EXPECT_EQ(load_error("{\"schema_version\": 0, \"records\": []}").kind(),
            CatalogError::Kind::SchemaVersionMismatch);
  std::string text = catalog_text(seed_catalog());
  EXPECT_EQ(load_error(text.substr(0, text.size() / 2)).kind(),
            CatalogError::Kind::MalformedCatalog);

  Json j = to_json(seed_catalog());
  j["records"][2]["extra"] = 1;
  auto unknown = load_error(j.dump());
  EXPECT_EQ(unknown.kind(), CatalogError::Kind::MalformedCatalog);
  EXPECT_EQ(unknown.pointer(), "/records/2/extra");

  Json k = to_json(seed_catalog());
  k["records"][0]["label"]["data"] = "three";
  EXPECT_EQ(load_error(k.dump()).pointer(), "/records/0/label/data");

  Json m = to_json(seed_catalog());
  m["records"][1].erase("title");
  EXPECT_EQ(load_error(m.dump()).pointer(), "/records/1/title");

  try {
    load("/nonexistent/catalog.json");
    FAIL();
  } catch (const CatalogError &e) {
    EXPECT_EQ(e.kind(), CatalogError::Kind::Io);
  }
}

std::map<std::string, std::string> tree(const fs::path &root) {
  std::map<std::string, std::string> out;
  for (const auto &e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file())
      out[fs::relative(e.path(), root).string()] = read_file(e.path());
  return out;
}

TEST(ExportSite, LayoutAndDeterminism) {
  fs::path a = scratch_dir("site-a"), b = scratch_dir("site-b");
  export_site(seed_catalog(), a);
  export_site(seed_catalog(), b);
  auto ta = tree(a);
  EXPECT_EQ(ta.size(), 1 + 2 * seed_catalog().records.size());
  EXPECT_EQ(ta, tree(b));
  EXPECT_TRUE(ta.count("catalog.json"));
  EXPECT_TRUE(ta.count("exercises/garden.unstructured.mp"));
  EXPECT_TRUE(ta.count("exercises/garden.decomposed.mp"));
  EXPECT_EQ(load(a / "catalog.json"), seed_catalog());
  export_site(seed_catalog(), a);
  EXPECT_EQ(tree(a), ta);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(ExportSite, CommittedSiteIsCurrent) {
  fs::path fresh = scratch_dir("site-now");
  export_site(seed_catalog(), fresh);
  EXPECT_EQ(tree(kRepoDir / "site"), tree(fresh));
  fs::remove_all(fresh);
}

TEST(JsonIo, ValuesAndInputs) {
  Json j = parse_json(R"([[1, 2.5, true, "s", [1, 2]]])");
  auto in = inputs_from_json(j);
  ASSERT_EQ(in.size(), 1u);
  EXPECT_TRUE(in[0][0].is_int());
  EXPECT_TRUE(in[0][1].is_float());
  EXPECT_TRUE(in[0][4].is_list());
  EXPECT_EQ(to_json(std::span<const InputTuple>(in)), j);
  EXPECT_THROW(inputs_from_json(parse_json("[[null]]")), CatalogError);
  EXPECT_THROW(inputs_from_json(parse_json("[[[1, \"a\"]]]")), CatalogError);
}

TEST(JsonIo, AnnotationAndProvenanceRoundTrip) {
  for (const auto &id : testing::seed_ids()) {
    auto seed = testing::load_seed(id);
    EXPECT_EQ(annotation_from_json(to_json(seed.annotation)), seed.annotation);
    if (seed.provenance)
      EXPECT_EQ(provenance_from_json(to_json(*seed.provenance)),
                *seed.provenance);
  }
}

} // namespace
} // namespace decomplab
