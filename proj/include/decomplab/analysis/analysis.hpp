//===--- analysis.hpp - Dataflow facts over an exercise's main ---*- C++ -*-===//
//
// Statement-level facts consumed by the classifier and the transforms:
// def/use sets, reaching definitions, the dependency graph, nesting regions
// and literal abstraction. Every analysis here looks at main only and treats
// a list variable as one unit.
//
//===----------------------------------------------------------------------===//

#ifndef DECOMPLAB_ANALYSIS_ANALYSIS_HPP
#define DECOMPLAB_ANALYSIS_ANALYSIS_HPP

#include "decomplab/lang/ast.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace decomplab {

/// Links statements of an unstructured main to the reference decomposition.
/// Task 0 is glue code that belongs to no extracted function.
struct TaskAnnotation {
  std::map<StmtId, int> task_of;
  /// Which copy of a repeated task a statement belongs to.
  std::map<StmtId, int> instance_of;
  std::map<int, std::string> task_names;

  friend bool operator==(const TaskAnnotation &,
                         const TaskAnnotation &) = default;
};

inline constexpr int kGlueTask = 0;

class AnalysisError : public std::runtime_error {
public:
  enum class Kind { UnboundVariable, AnnotationIncomplete, AnnotationInvalid };

  AnalysisError(Kind kind, const std::string &message,
                std::optional<StmtId> stmt = std::nullopt);

  Kind kind() const noexcept { return kind_; }
  std::optional<StmtId> stmt() const noexcept { return stmt_; }

private:
  Kind kind_;
  std::optional<StmtId> stmt_;
};

std::string_view to_string(AnalysisError::Kind kind) noexcept;

/// Maps each statement of main to its node.
std::map<StmtId, const Stmt *> index_main(const Program &p);

//===----------------------------------------------------------------------===//
// Def/use and reaching definitions
//===----------------------------------------------------------------------===//

struct DefUse {
  std::map<StmtId, std::set<std::string>> defs;
  std::map<StmtId, std::set<std::string>> uses;
};

/// Def/use sets without the unbound-variable check.
DefUse collect_def_use(const Program &p);

/// collect_def_use() plus a check that every use is reached by some
/// definition or a parameter of main. Throws AnalysisError(UnboundVariable).
DefUse compute_def_use(const Program &p);

/// (use site, variable) -> defining statements. Parameters of main are
/// defined by kEntryDef.
using ReachingDefs =
    std::map<std::pair<StmtId, std::string>, std::set<StmtId>>;

/// Forward may-analysis over the statement-level control-flow graph of main,
/// iterated to a fixed point.
ReachingDefs reaching_definitions(const Program &p, const DefUse &du);

/// Definitions reaching the entry of each statement of main, per variable.
using ReachingIn =
    std::map<StmtId, std::map<std::string, std::set<StmtId>>>;

ReachingIn reaching_in(const Program &p, const DefUse &du);

//===----------------------------------------------------------------------===//
// Dependency graph
//===----------------------------------------------------------------------===//

enum class DepKind { Flow, Anti, Output, Console };

std::string_view to_string(DepKind kind) noexcept;

struct DepEdge {
  StmtId from{0};
  StmtId to{0};
  DepKind kind = DepKind::Flow;
  /// Variable carrying the dependence; empty for console edges.
  std::string var;

  friend auto operator<=>(const DepEdge &, const DepEdge &) = default;
};

/// Edges always point forward in program order. A definition that reaches
/// an earlier statement only around a loop back edge produces no edge; both
/// ends then sit inside the same loop.
struct DepGraph {
  std::vector<StmtId> nodes;
  std::set<DepEdge> edges;
};

DepGraph build_dep_graph(const Program &p, const DefUse &du);

//===----------------------------------------------------------------------===//
// Regions
//===----------------------------------------------------------------------===//

struct RegionInfo {
  /// Innermost enclosing compound statement; absent at top level.
  std::map<StmtId, StmtId> owner;
  /// Smallest and largest StmtId of each task.
  std::map<int, std::pair<StmtId, StmtId>> interval;
};

/// Throws AnalysisError unless `ann` maps exactly the statements of main and
/// instance ids of each task are 0..k-1.
void check_annotation(const Program &p, const TaskAnnotation &ann);

RegionInfo regions(const Program &p, const TaskAnnotation &ann);

/// True if `inner` is nested (at any depth) inside `outer`.
bool nested_in(const RegionInfo &r, StmtId inner, StmtId outer);

//===----------------------------------------------------------------------===//
// Literal abstraction
//===----------------------------------------------------------------------===//

using Literal = std::variant<std::int64_t, double, bool, std::string>;

struct AbstractedStmts {
  std::vector<Stmt> shape;
  /// Removed literals in pre-order.
  std::vector<Literal> literals;
};

AbstractedStmts abstract_literals(std::span<const Stmt> stmts);

/// Inverse of abstract_literals: puts `literals` back into the holes.
std::vector<Stmt> fill_holes(std::span<const Stmt> shape,
                             std::span<const Literal> literals);

std::string format_literal(const Literal &lit);

} // namespace decomplab

#endif // DECOMPLAB_ANALYSIS_ANALYSIS_HPP
