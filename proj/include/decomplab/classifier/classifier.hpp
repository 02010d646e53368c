//===--- classifier.hpp - Three-dimension complexity labels ------*- C++ -*-===//
//
// Deciders for the repetition, composition and data-dependency dimensions
// of an annotated unstructured program. Each decider returns a level 0..3
// together with the witnesses that justify it.
//
//===----------------------------------------------------------------------===//

#ifndef DECOMPLAB_CLASSIFIER_CLASSIFIER_HPP
#define DECOMPLAB_CLASSIFIER_CLASSIFIER_HPP

#include "decomplab/analysis/analysis.hpp"
#include "decomplab/transform/transform.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace decomplab {

struct ComplexityLabel {
  int repetition = 0;
  int composition = 0;
  int data = 0;

  friend bool operator==(const ComplexityLabel &,
                         const ComplexityLabel &) = default;
};

class ClassifyError : public std::runtime_error {
public:
  enum class Kind { InstanceShapeMismatch, AnnotationIncomplete, AnalysisFailed };

  ClassifyError(Kind kind, const std::string &message);

  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

std::string_view to_string(ClassifyError::Kind kind) noexcept;

//===----------------------------------------------------------------------===//
// Evidence
//===----------------------------------------------------------------------===//

/// literal_p(i) = a_p * s_i + b_p for every varying position p.
struct ScaledFit {
  std::vector<std::size_t> positions;
  std::map<int, std::int64_t> scale;
  std::map<std::size_t, std::pair<std::int64_t, std::int64_t>> coefficients;

  friend bool operator==(const ScaledFit &, const ScaledFit &) = default;
};

struct TaskRepetition {
  int task = 0;
  int level = 0;
  /// Statements of each instance in program order.
  std::map<int, std::vector<StmtId>> instances;
  /// Hole indices whose literals differ between instances.
  std::vector<std::size_t> varying;
  /// Literals of each instance, in hole order.
  std::map<int, std::vector<Literal>> literals;
  std::optional<ScaledFit> fit;
};

struct RepetitionEvidence {
  int level = 0;
  std::vector<TaskRepetition> tasks;
};

enum class Relation { Concatenation, Inclusion, Interleaved };

std::string_view to_string(Relation r) noexcept;

struct TaskPair {
  int a = 0;
  int b = 0;
  Relation relation = Relation::Concatenation;
  /// For inclusion, the task whose statements are nested.
  int inner = 0;
  /// Concatenation: last of the earlier task, first of the later one.
  /// Inclusion: a nested statement and the enclosing header.
  /// Interleaved: a statement of one task inside the other's interval, and
  /// that interval's first statement.
  std::pair<StmtId, StmtId> witness{StmtId{0}, StmtId{0}};
};

struct CompositionEvidence {
  int level = 0;
  std::vector<int> tasks;
  std::vector<TaskPair> pairs;
};

struct SharedWitness {
  StmtId definition{0};
  std::string var;
  int task = 0;
  /// Consumer task -> consuming statements.
  std::map<int, std::vector<StmtId>> consumers;
};

struct GapWitness {
  int task = 0;
  StmtId foreign{0};
  int foreign_task = 0;
};

struct DataEvidence {
  int level = 0;
  std::optional<SharedWitness> shared;
  std::optional<GapWitness> gap;
  std::vector<DepEdge> cross_task_flow;
};

struct Evidence {
  RepetitionEvidence repetition;
  CompositionEvidence composition;
  DataEvidence data;
};

//===----------------------------------------------------------------------===//
// Deciders
//===----------------------------------------------------------------------===//

/// `prov` supplies scale annotations for tasks generated from templates.
RepetitionEvidence classify_repetition(const Program &p,
                                       const TaskAnnotation &ann,
                                       const Provenance *prov = nullptr);

CompositionEvidence classify_composition(const Program &p,
                                         const TaskAnnotation &ann);

DataEvidence classify_data_dependency(const Program &p,
                                      const TaskAnnotation &ann,
                                      const DepGraph &g);

struct Classification {
  ComplexityLabel label;
  Evidence evidence;
};

Classification classify(const Program &p, const TaskAnnotation &ann,
                        const Provenance *prov = nullptr);

/// Tries the normalized fit s_0 = 0, s_1 = 1 over the varying positions.
std::optional<ScaledFit>
fit_scales(const std::map<int, std::vector<Literal>> &literals,
           const std::vector<std::size_t> &varying);

/// True iff instantiating `t` at each scale reproduces the matching
/// instance. An instance is the inlined body: the template's tail return
/// appears as an assignment, optionally followed by a copy into the call
/// target. Names are compared up to consistent renaming.
bool verify_scaled(const ScaledTemplate &t,
                   const std::map<int, std::vector<Stmt>> &instances,
                   const std::map<int, std::int64_t> &scales);

} // namespace decomplab

#endif // DECOMPLAB_CLASSIFIER_CLASSIFIER_HPP
