#include "decomplab/catalog/json_io.hpp"

#include <initializer_list>
#include <set>

namespace decomplab {

CatalogError::CatalogError(Kind kind, std::string pointer,
                           const std::string &message)
    : std::runtime_error(std::string(to_string(kind)) +
                         (pointer.empty() ? "" : " at " + pointer) + ": " +
                         message),
      kind_(kind), pointer_(std::move(pointer)) {}

std::string_view to_string(CatalogError::Kind kind) noexcept {
  switch (kind) {
  case CatalogError::Kind::SchemaVersionMismatch:
    return "SchemaVersionMismatch";
  case CatalogError::Kind::MalformedCatalog:
    return "MalformedCatalog";
  case CatalogError::Kind::Io:
    return "Io";
  }
  return "CatalogError";
}

namespace {

[[noreturn]] void malformed(const std::string &ptr, const std::string &why) {
  throw CatalogError(CatalogError::Kind::MalformedCatalog,
                     ptr.empty() ? "/" : ptr, why);
}

std::string child(const std::string &ptr, const std::string &key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~')
      escaped += "~0";
    else if (c == '/')
      escaped += "~1";
    else
      escaped += c;
  }
  return ptr + "/" + escaped;
}

std::string child(const std::string &ptr, std::size_t i) {
  return ptr + "/" + std::to_string(i);
}

void expect_object(const Json &j, const std::string &ptr,
                   std::initializer_list<const char *> required,
                   std::initializer_list<const char *> optional = {}) {
  if (!j.is_object())
    malformed(ptr, "expected an object");
  std::set<std::string> known;
  for (const char *k : required) {
    known.insert(k);
    if (!j.contains(k))
      malformed(child(ptr, k), "missing field");
  }
  for (const char *k : optional)
    known.insert(k);
  for (const auto &[k, v] : j.items())
    if (!known.count(k))
      malformed(child(ptr, k), "unknown field");
}

std::int64_t get_int(const Json &j, const std::string &ptr) {
  if (!j.is_number_integer())
    malformed(ptr, "expected an integer");
  return j.get<std::int64_t>();
}

int get_small(const Json &j, const std::string &ptr) {
  std::int64_t v = get_int(j, ptr);
  if (v < 0 || v > 1'000'000)
    malformed(ptr, "integer out of range");
  return static_cast<int>(v);
}

std::string get_string(const Json &j, const std::string &ptr) {
  if (!j.is_string())
    malformed(ptr, "expected a string");
  return j.get<std::string>();
}

bool get_bool(const Json &j, const std::string &ptr) {
  if (!j.is_boolean())
    malformed(ptr, "expected a boolean");
  return j.get<bool>();
}

int key_int(const std::string &key, const std::string &ptr) {
  std::size_t used = 0;
  int v = -1;
  try {
    v = std::stoi(key, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used != key.size() || key.empty() || v < 0 ||
      std::to_string(v) != key)
    malformed(ptr, "key is not a non-negative integer");
  return v;
}

template <class T, class F>
Json int_keyed(const std::map<T, int> &m, F key) {
  Json out = Json::object();
  for (const auto &[k, v] : m)
    out[std::to_string(key(k))] = v;
  return out;
}

Json literal_json(const Literal &lit) {
  return std::visit([](const auto &v) { return Json(v); }, lit);
}

Json ids_json(const std::vector<StmtId> &ids) {
  Json out = Json::array();
  for (StmtId id : ids)
    out.push_back(to_int(id));
  return out;
}

} // namespace

Json parse_json(const std::string &text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error &e) {
    malformed("", e.what());
  }
}

//===----------------------------------------------------------------------===//
// Values and inputs
//===----------------------------------------------------------------------===//

Json to_json(const Value &v) {
  if (v.is_int())
    return v.as_int();
  if (v.is_float())
    return v.as_float();
  if (v.is_bool())
    return v.as_bool();
  if (v.is_str())
    return v.as_str();
  Json out = Json::array();
  for (const auto &item : v.as_list())
    out.push_back(to_json(item));
  return out;
}

Value value_from_json(const Json &j, const std::string &ptr) {
  if (j.is_number_integer())
    return Value(j.get<std::int64_t>());
  if (j.is_number_float())
    return Value(j.get<double>());
  if (j.is_boolean())
    return Value(j.get<bool>());
  if (j.is_string())
    return Value(j.get<std::string>());
  if (j.is_array()) {
    Value::List items;
    for (std::size_t i = 0; i < j.size(); ++i)
      items.push_back(value_from_json(j[i], child(ptr, i)));
    for (std::size_t i = 1; i < items.size(); ++i)
      if (items[i].data.index() != items[0].data.index())
        malformed(child(ptr, i), "list elements must share one type");
    return Value(std::move(items));
  }
  malformed(ptr, "not a MiniProc value");
}

Json to_json(std::span<const InputTuple> inputs) {
  Json out = Json::array();
  for (const auto &tuple : inputs) {
    Json t = Json::array();
    for (const auto &v : tuple)
      t.push_back(to_json(v));
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<InputTuple> inputs_from_json(const Json &j,
                                         const std::string &ptr) {
  if (!j.is_array())
    malformed(ptr, "expected an array of input tuples");
  std::vector<InputTuple> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array())
      malformed(child(ptr, i), "expected an array of arguments");
    InputTuple t;
    for (std::size_t k = 0; k < j[i].size(); ++k)
      t.push_back(value_from_json(j[i][k], child(child(ptr, i), k)));
    out.push_back(std::move(t));
  }
  return out;
}

//===----------------------------------------------------------------------===//
// Annotation, provenance, label
//===----------------------------------------------------------------------===//

Json to_json(const TaskAnnotation &ann) {
  auto id = [](StmtId s) { return to_int(s); };
  Json names = Json::object();
  for (const auto &[t, n] : ann.task_names)
    names[std::to_string(t)] = n;
  return Json{{"task_of", int_keyed(ann.task_of, id)},
              {"instance_of", int_keyed(ann.instance_of, id)},
              {"task_names", names}};
}

TaskAnnotation annotation_from_json(const Json &j, const std::string &ptr) {
  expect_object(j, ptr, {"task_of", "instance_of", "task_names"});
  TaskAnnotation ann;
  auto read_map = [&](const char *field, std::map<StmtId, int> &out) {
    std::string p = child(ptr, field);
    if (!j[field].is_object())
      malformed(p, "expected an object");
    for (const auto &[k, v] : j[field].items())
      out[StmtId{key_int(k, child(p, k))}] = get_small(v, child(p, k));
  };
  read_map("task_of", ann.task_of);
  read_map("instance_of", ann.instance_of);
  std::string p = child(ptr, "task_names");
  if (!j["task_names"].is_object())
    malformed(p, "expected an object");
  for (const auto &[k, v] : j["task_names"].items())
    ann.task_names[key_int(k, child(p, k))] = get_string(v, child(p, k));
  return ann;
}

Json to_json(const Provenance &prov) {
  Json instances = Json::array();
  for (const auto &i : prov.instances)
    instances.push_back({{"task", i.task},
                         {"instance", i.instance},
                         {"function", i.function},
                         {"scale", i.scale ? Json(*i.scale) : Json()}});
  Json renames = Json::array();
  for (const auto &r : prov.renames)
    renames.push_back({{"task", r.task},
                       {"instance", r.instance},
                       {"original", r.original},
                       {"fresh", r.fresh}});
  return Json{
      {"instances", instances},
      {"renames", renames},
      {"scaled", prov.scaled},
      {"scales", prov.scales},
      {"hoisted", prov.hoisted},
      {"reorder_seed",
       prov.reorder_seed ? Json(*prov.reorder_seed) : Json()},
      {"permutation", prov.permutation}};
}

Provenance provenance_from_json(const Json &j, const std::string &ptr) {
  expect_object(j, ptr,
                {"instances", "renames", "scaled", "scales", "hoisted",
                 "reorder_seed", "permutation"});
  Provenance prov;
  auto array_at = [&](const char *field) -> const Json & {
    if (!j[field].is_array())
      malformed(child(ptr, field), "expected an array");
    return j[field];
  };
  const Json &inst = array_at("instances");
  for (std::size_t i = 0; i < inst.size(); ++i) {
    std::string p = child(child(ptr, "instances"), i);
    expect_object(inst[i], p, {"task", "instance", "function", "scale"});
    Provenance::Instance x;
    x.task = get_small(inst[i]["task"], child(p, "task"));
    x.instance = get_small(inst[i]["instance"], child(p, "instance"));
    x.function = get_string(inst[i]["function"], child(p, "function"));
    if (!inst[i]["scale"].is_null())
      x.scale = get_int(inst[i]["scale"], child(p, "scale"));
    prov.instances.push_back(std::move(x));
  }
  const Json &ren = array_at("renames");
  for (std::size_t i = 0; i < ren.size(); ++i) {
    std::string p = child(child(ptr, "renames"), i);
    expect_object(ren[i], p, {"task", "instance", "original", "fresh"});
    prov.renames.push_back(
        {get_small(ren[i]["task"], child(p, "task")),
         get_small(ren[i]["instance"], child(p, "instance")),
         get_string(ren[i]["original"], child(p, "original")),
         get_string(ren[i]["fresh"], child(p, "fresh"))});
  }
  prov.scaled = get_bool(j["scaled"], child(ptr, "scaled"));
  const Json &scales = array_at("scales");
  for (std::size_t i = 0; i < scales.size(); ++i)
    prov.scales.push_back(get_int(scales[i], child(child(ptr, "scales"), i)));
  prov.hoisted = get_bool(j["hoisted"], child(ptr, "hoisted"));
  if (!j["reorder_seed"].is_null()) {
    if (!j["reorder_seed"].is_number_unsigned())
      malformed(child(ptr, "reorder_seed"), "expected an unsigned integer");
    prov.reorder_seed = j["reorder_seed"].get<std::uint64_t>();
  }
  const Json &perm = array_at("permutation");
  for (std::size_t i = 0; i < perm.size(); ++i)
    prov.permutation.push_back(static_cast<std::size_t>(
        get_small(perm[i], child(child(ptr, "permutation"), i))));
  return prov;
}

Json to_json(const ComplexityLabel &label) {
  return Json{{"repetition", label.repetition},
              {"composition", label.composition},
              {"data", label.data}};
}

ComplexityLabel label_from_json(const Json &j, const std::string &ptr) {
  expect_object(j, ptr, {"repetition", "composition", "data"});
  ComplexityLabel l;
  auto level = [&](const char *f) {
    int v = get_small(j[f], child(ptr, f));
    if (v > 3)
      malformed(child(ptr, f), "level must be 0..3");
    return v;
  };
  l.repetition = level("repetition");
  l.composition = level("composition");
  l.data = level("data");
  return l;
}

//===----------------------------------------------------------------------===//
// Reports
//===----------------------------------------------------------------------===//

Json to_json(const Evidence &ev) {
  Json rep_tasks = Json::array();
  for (const auto &t : ev.repetition.tasks) {
    Json instances = Json::object(), literals = Json::object();
    for (const auto &[i, ids] : t.instances)
      instances[std::to_string(i)] = ids_json(ids);
    for (const auto &[i, lits] : t.literals) {
      Json a = Json::array();
      for (const auto &l : lits)
        a.push_back(literal_json(l));
      literals[std::to_string(i)] = a;
    }
    Json fit;
    if (t.fit) {
      Json scale = Json::object(), coef = Json::object();
      for (const auto &[i, s] : t.fit->scale)
        scale[std::to_string(i)] = s;
      for (const auto &[p, ab] : t.fit->coefficients)
        coef[std::to_string(p)] = {ab.first, ab.second};
      fit = {{"positions", t.fit->positions},
             {"scale", scale},
             {"coefficients", coef}};
    }
    rep_tasks.push_back({{"task", t.task},
                         {"level", t.level},
                         {"instances", instances},
                         {"varying", t.varying},
                         {"literals", literals},
                         {"fit", fit}});
  }

  Json pairs = Json::array();
  for (const auto &p : ev.composition.pairs)
    pairs.push_back(
        {{"a", p.a},
         {"b", p.b},
         {"relation", std::string(to_string(p.relation))},
         {"inner", p.relation == Relation::Inclusion ? Json(p.inner) : Json()},
         {"witness", {to_int(p.witness.first), to_int(p.witness.second)}}});

  const DataEvidence &d = ev.data;
  Json shared, gap;
  if (d.shared) {
    Json consumers = Json::object();
    for (const auto &[t, ids] : d.shared->consumers)
      consumers[std::to_string(t)] = ids_json(ids);
    shared = {{"definition", to_int(d.shared->definition)},
              {"var", d.shared->var},
              {"task", d.shared->task},
              {"consumers", consumers}};
  }
  if (d.gap)
    gap = {{"task", d.gap->task},
           {"foreign", to_int(d.gap->foreign)},
           {"foreign_task", d.gap->foreign_task}};
  Json flow = Json::array();
  for (const auto &e : d.cross_task_flow)
    flow.push_back(
        {{"from", to_int(e.from)}, {"to", to_int(e.to)}, {"var", e.var}});

  return Json{{"repetition",
               {{"level", ev.repetition.level}, {"tasks", rep_tasks}}},
              {"composition",
               {{"level", ev.composition.level},
                {"tasks", ev.composition.tasks},
                {"pairs", pairs}}},
              {"data",
               {{"level", d.level},
                {"shared", shared},
                {"gap", gap},
                {"cross_task_flow", flow}}}};
}

Json to_json(const Trace &t) {
  return Json{{"lines", t.lines},
              {"result", t.result ? to_json(*t.result) : Json()}};
}

Json to_json(const EquivalenceReport &r) {
  Json div;
  if (r.first_divergence) {
    const Divergence &d = *r.first_divergence;
    Json input = Json::array();
    for (const auto &v : d.input)
      input.push_back(to_json(v));
    div = {{"input_index", d.input_index},
           {"input", input},
           {"line", d.line ? Json(*d.line) : Json()},
           {"expected", d.expected},
           {"actual", d.actual}};
  }
  return Json{{"equivalent", r.equivalent}, {"first_divergence", div}};
}

Json to_json(const DefUse &du, const DepGraph &g) {
  auto sets = [](const std::map<StmtId, std::set<std::string>> &m) {
    Json out = Json::object();
    for (const auto &[id, vars] : m)
      out[std::to_string(to_int(id))] = vars;
    return out;
  };
  Json nodes = Json::array();
  for (StmtId id : g.nodes)
    nodes.push_back(to_int(id));
  Json edges = Json::array();
  for (const auto &e : g.edges)
    edges.push_back({{"from", to_int(e.from)},
                     {"to", to_int(e.to)},
                     {"kind", std::string(to_string(e.kind))},
                     {"var", e.var}});
  return Json{{"defs", sets(du.defs)},
              {"uses", sets(du.uses)},
              {"nodes", nodes},
              {"edges", edges}};
}

} // namespace decomplab
