#include "decomplab/cli/cli.hpp"

#include "decomplab/catalog/catalog.hpp"
#include "decomplab/lang/parser.hpp"
#include "decomplab/lang/printer.hpp"

#include <CLI11.hpp>

#include <cstring>
#include <filesystem>
#include <ostream>
#include <set>
#include <sstream>

namespace decomplab {

namespace fs = std::filesystem;

namespace {

/// Carries an exit code out of a command.
struct Exit {
  int code;
};

class Commands {
public:
  Commands(std::ostream &out, std::ostream &err) : out_(out), err_(err) {}

  std::string read(const std::string &path) {
    try {
      return read_file(path);
    } catch (const CatalogError &e) {
      fail(kExitIo, e.what());
    }
  }

  Program load_program(const std::string &path) {
    std::string text = read(path);
    try {
      return parse(text);
    } catch (const ParseError &e) {
      fail(kExitInvalid, path + ":" + std::to_string(e.pos().line) + ":" +
                             std::to_string(e.pos().column) + ": " +
                             e.what());
    }
  }

  Json load_json(const std::string &path) {
    std::string text = read(path);
    try {
      return parse_json(text);
    } catch (const CatalogError &e) {
      fail(kExitInvalid, path + ": " + e.what());
    }
  }

  template <class F> auto decode(const std::string &path, F f) {
    Json j = load_json(path);
    try {
      return f(j);
    } catch (const CatalogError &e) {
      fail(kExitInvalid, path + ": " + e.what());
    }
  }

  [[noreturn]] void fail(int code, const std::string &message) {
    err_ << "decomplab: " << message << "\n";
    throw Exit{code};
  }

  void emit(const Json &j) { out_ << j.dump(2) << "\n"; }

  void parse_cmd(const std::string &file) {
    out_ << pretty_print(load_program(file));
  }

  void run_cmd(const std::string &file, const std::string &args_json) {
    Program p = load_program(file);
    InputTuple args;
    try {
      Json j = parse_json(args_json);
      args = inputs_from_json(Json::array({j})).front();
    } catch (const CatalogError &e) {
      fail(kExitUsage, std::string("--args: ") + e.what());
    }
    try {
      emit(to_json(run(p, args)));
    } catch (const RuntimeError &e) {
      fail(kExitInvalid, file + ":" + std::to_string(e.pos().line) + ":" +
                             std::to_string(e.pos().column) + ": " +
                             e.what());
    }
  }

  void analyze_cmd(const std::string &file) {
    Program p = load_program(file);
    DefUse du = collect_def_use(p);
    emit(to_json(du, build_dep_graph(p, du)));
  }

  void classify_cmd(const std::string &file, const std::string &ann_file,
                    const std::string &prov_file) {
    Program p = load_program(file);
    TaskAnnotation ann = decode(
        ann_file, [](const Json &j) { return annotation_from_json(j); });
    std::optional<Provenance> prov;
    if (!prov_file.empty())
      prov = decode(prov_file,
                    [](const Json &j) { return provenance_from_json(j); });
    try {
      Classification c = classify(p, ann, prov ? &*prov : nullptr);
      emit(Json{{"label", to_json(c.label)},
                {"evidence", to_json(c.evidence)}});
    } catch (const ClassifyError &e) {
      fail(kExitClassify, e.what());
    }
  }

  int verify_cmd(const std::string &a_file, const std::string &b_file,
                 const std::string &inputs_file) {
    Program a = load_program(a_file);
    Program b = load_program(b_file);
    auto inputs = decode(inputs_file,
                         [](const Json &j) { return inputs_from_json(j); });
    for (std::size_t i = 0; i < inputs.size(); ++i)
      try {
        check_arguments(a, inputs[i]);
        check_arguments(b, inputs[i]);
      } catch (const RuntimeError &e) {
        fail(kExitInvalid,
             inputs_file + ": input " + std::to_string(i) + ": " + e.what());
      }
    EquivalenceReport r = equivalent(a, b, inputs);
    emit(to_json(r));
    return r.equivalent ? kExitOk : kExitNotEquivalent;
  }

  void generate_cmd(const std::string &file, const GenerateOptions &opt,
                    const std::string &out_dir) {
    Program ref = load_program(file);
    GenerateResult g;
    try {
      g = generate(ref, opt);
    } catch (const TransformError &e) {
      fail(kExitInvalid, file + ": " + e.what());
    } catch (const AnalysisError &e) {
      fail(kExitInvalid, file + ": " + e.what());
    }
    Classification c;
    try {
      c = classify(g.unstructured, g.annotation, &g.provenance);
    } catch (const ClassifyError &e) {
      fail(kExitClassify, e.what());
    }
    std::string name = fs::path(file).filename().string();
    for (const char *suffix : {".mp", ".decomposed", ".reference"})
      if (name.size() > std::strlen(suffix) &&
          name.ends_with(suffix))
        name.resize(name.size() - std::strlen(suffix));
    fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
    try {
      fs::create_directories(dir);
      write_file(dir / (name + ".unstructured.mp"),
                 pretty_print(g.unstructured));
      write_file(dir / (name + ".annotation.json"),
                 to_json(g.annotation).dump(2) + "\n");
      write_file(dir / (name + ".provenance.json"),
                 to_json(g.provenance).dump(2) + "\n");
    } catch (const std::exception &e) {
      fail(kExitIo, e.what());
    }
    emit(Json{{"label", to_json(c.label)}});
  }

  Catalog load_catalog(const std::string &path) {
    try {
      return load(path);
    } catch (const CatalogError &e) {
      fail(e.kind() == CatalogError::Kind::Io ? kExitIo : kExitInvalid,
           e.what());
    }
  }

  int catalog_validate(const std::string &path) {
    Catalog c = load_catalog(path);
    Json issues = Json::array();
    for (const auto &i : validate(c))
      issues.push_back({{"record", i.record}, {"message", i.message}});
    emit(Json{{"valid", issues.empty()},
              {"records", c.records.size()},
              {"issues", issues}});
    return issues.empty() ? kExitOk : kExitInvalid;
  }

  void catalog_query(const std::string &path, const Query &q) {
    Catalog c = load_catalog(path);
    Json ids = Json::array();
    for (const auto *rec : query(c, q))
      ids.push_back(rec->id);
    emit(ids);
  }

  void catalog_export(const std::string &path, const std::string &dir) {
    Catalog c = load_catalog(path);
    try {
      export_site(c, dir);
    } catch (const CatalogError &e) {
      fail(kExitIo, e.what());
    }
    emit(Json{{"exported", c.records.size()}, {"dir", dir}});
  }

  void catalog_build(const std::string &seeds, const std::string &path) {
    Catalog c;
    try {
      c = build_catalog(seeds);
    } catch (const CatalogError &e) {
      fail(e.kind() == CatalogError::Kind::Io ? kExitIo : kExitInvalid,
           e.what());
    } catch (const ParseError &e) {
      fail(kExitInvalid, e.what());
    } catch (const ClassifyError &e) {
      fail(kExitClassify, e.what());
    } catch (const fs::filesystem_error &e) {
      fail(kExitIo, e.what());
    }
    auto issues = validate(c);
    for (const auto &i : issues)
      err_ << "decomplab: " << i.record << ": " << i.message << "\n";
    if (!issues.empty())
      throw Exit{kExitInvalid};
    try {
      save(c, path);
    } catch (const CatalogError &e) {
      fail(kExitIo, e.what());
    }
    emit(Json{{"built", c.records.size()}, {"catalog", path}});
  }

private:
  std::ostream &out_;
  std::ostream &err_;
};

/// "any" or a comma list of levels 0..3.
std::set<int> parse_levels(const std::string &text, const char *flag) {
  std::set<int> out;
  if (text.empty() || text == "any")
    return out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.size() != 1 || part[0] < '0' || part[0] > '3')
      throw CLI::ValidationError(flag, "expected 'any' or levels 0..3");
    out.insert(part[0] - '0');
  }
  return out;
}

std::vector<std::int64_t> parse_scales(const std::string &text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::size_t used = 0;
    long long v = -1;
    try {
      v = std::stoll(part, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used == 0 || used != part.size() || v < 0)
      throw CLI::ValidationError("--scales",
                                 "expected non-negative integers");
    out.push_back(v);
  }
  return out;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out,
            std::ostream &err) {
  CLI::App app{"Labels and generates code structuring exercises.",
               "decomplab"};
  app.set_version_flag("--version", std::string("decomplab ") + kVersion);
  app.require_subcommand(1);

  std::string file, file_b, aux, aux2, dir;
  std::string args_json = "[]";
  auto *parse_c = app.add_subcommand("parse", "Pretty-print a program");
  parse_c->add_option("file", file, "MiniProc source")->required();

  auto *run_c = app.add_subcommand("run", "Run main and print its trace");
  run_c->add_option("file", file, "MiniProc source")->required();
  run_c->add_option("--args", args_json, "JSON array of arguments to main");

  auto *analyze_c =
      app.add_subcommand("analyze", "Print def/use sets and the dependency "
                                    "graph of main");
  analyze_c->add_option("file", file, "MiniProc source")->required();

  auto *classify_c =
      app.add_subcommand("classify", "Label an annotated program");
  classify_c->add_option("file", file, "Unstructured program")->required();
  classify_c->add_option("--annotation", aux, "Task annotation JSON")
      ->required();
  classify_c->add_option("--provenance", aux2, "Generator provenance JSON");

  auto *verify_c =
      app.add_subcommand("verify", "Compare two programs on an input suite");
  verify_c->add_option("a", file, "First program")->required();
  verify_c->add_option("b", file_b, "Second program")->required();
  verify_c->add_option("inputs", aux, "JSON array of input tuples")
      ->required();

  auto *generate_c = app.add_subcommand(
      "generate", "Produce an unstructured exercise from a reference");
  std::string scales;
  std::uint64_t seed = 0;
  bool hoist = false;
  generate_c->add_option("reference", file, "Reference program")->required();
  auto *seed_opt = generate_c->add_option("--reorder-seed", seed,
                                          "Shuffle top-level statements");
  generate_c->add_flag("--hoist", hoist, "Hoist a computation shared by tasks");
  generate_c->add_option("--scales", scales,
                         "Instantiate scaled templates at these scales");
  generate_c->add_option("--out-dir", dir, "Output directory (default .)");

  auto *catalog_c = app.add_subcommand("catalog", "Work with catalog.json");
  catalog_c->require_subcommand(1);
  auto *validate_c = catalog_c->add_subcommand("validate", "Check records");
  validate_c->add_option("catalog", file, "catalog.json")->required();
  auto *query_c = catalog_c->add_subcommand("query", "Find records by label");
  std::string rep = "any", comp = "any", data = "any";
  std::vector<std::string> tags;
  query_c->add_option("catalog", file, "catalog.json")->required();
  query_c->add_option("--repetition", rep, "Levels or 'any'");
  query_c->add_option("--composition", comp, "Levels or 'any'");
  query_c->add_option("--data", data, "Levels or 'any'");
  query_c->add_option("--tag", tags, "Required tag (repeatable)");
  auto *export_c = catalog_c->add_subcommand("export", "Write the site tree");
  export_c->add_option("catalog", file, "catalog.json")->required();
  export_c->add_option("--out", dir, "Output directory")->required();
  auto *build_c =
      catalog_c->add_subcommand("build", "Build catalog.json from seeds");
  build_c->add_option("seeds", file, "Seed directory")->required();
  build_c->add_option("--out", dir, "Output catalog path")->required();

  Commands cmd(out, err);
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);

    if (*parse_c) {
      cmd.parse_cmd(file);
    } else if (*run_c) {
      cmd.run_cmd(file, args_json);
    } else if (*analyze_c) {
      cmd.analyze_cmd(file);
    } else if (*classify_c) {
      cmd.classify_cmd(file, aux, aux2);
    } else if (*verify_c) {
      return cmd.verify_cmd(file, file_b, aux);
    } else if (*generate_c) {
      GenerateOptions opt;
      if (!scales.empty())
        opt.scales = parse_scales(scales);
      opt.hoist = hoist;
      if (seed_opt->count())
        opt.reorder_seed = seed;
      cmd.generate_cmd(file, opt, dir);
    } else if (*validate_c) {
      return cmd.catalog_validate(file);
    } else if (*query_c) {
      Query q;
      q.repetition = parse_levels(rep, "--repetition");
      q.composition = parse_levels(comp, "--composition");
      q.data = parse_levels(data, "--data");
      q.tags = tags;
      cmd.catalog_query(file, q);
    } else if (*export_c) {
      cmd.catalog_export(file, dir);
    } else if (*build_c) {
      cmd.catalog_build(file, dir);
    }
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const Exit &e) {
    return e.code;
  }
}

} // namespace decomplab
