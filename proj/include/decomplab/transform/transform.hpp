//===--- transform.hpp - De-structuring transforms ---------------*- C++ -*-===//
//
// Behavior-preserving rewrites that turn a reference decomposition into an
// unstructured exercise: inlining, affine folding, scaled templates,
// dependency-respecting reordering and common-computation hoisting.
//
//===----------------------------------------------------------------------===//

#ifndef DECOMPLAB_TRANSFORM_TRANSFORM_HPP
#define DECOMPLAB_TRANSFORM_TRANSFORM_HPP

#include "decomplab/analysis/analysis.hpp"
#include "decomplab/lang/ast.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace decomplab {

class TransformError : public std::runtime_error {
public:
  enum class Kind {
    NotCallNormal,
    NonTailReturn,
    IntOverflow,
    NotATemplate,
    ScaleMismatch,
    NameCollision,
    OnlyOneOrder,
    NoCommonComputation,
  };

  TransformError(Kind kind, const std::string &message);

  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

std::string_view to_string(TransformError::Kind kind) noexcept;

//===----------------------------------------------------------------------===//
// Call-normal form
//===----------------------------------------------------------------------===//

struct CallDiagnostic {
  std::string function;
  SourcePos pos;
  std::string message;
};

struct CallNormalReport {
  bool ok = true;
  std::vector<CallDiagnostic> diagnostics;
};

/// Calls may only appear in main, either as an expression statement or as
/// the whole right-hand side of an assignment.
CallNormalReport check_call_normal(const Program &p);

//===----------------------------------------------------------------------===//
// Affine folding and scaled templates
//===----------------------------------------------------------------------===//

/// Replaces integer-literal-only subtrees under +, - and * by their value.
/// Throws TransformError(IntOverflow).
Expr fold_affine(const Expr &e);
std::vector<Stmt> fold_affine(std::span<const Stmt> stmts);
Program fold_affine(const Program &p);

/// a*s + b.
struct AffineSite {
  std::int64_t a = 0;
  std::int64_t b = 0;

  friend bool operator==(const AffineSite &, const AffineSite &) = default;
};

struct ScaledTemplate {
  FuncDef base;
  std::string scale_param;
  /// Maximal {+,-,*} subtrees over literals and the scale parameter, in
  /// pre-order.
  std::vector<AffineSite> sites;
};

/// Throws TransformError(NotATemplate) unless `scale_param` is an int
/// parameter of `f` that is never assigned and only occurs inside affine
/// sites.
ScaledTemplate make_template(const FuncDef &f, std::string_view scale_param);

/// First int parameter of `f` that makes a valid template.
std::optional<std::string> find_scale_param(const FuncDef &f);

/// The template body with the scale parameter replaced by `s`, folded.
std::vector<Stmt> instantiate_template(const ScaledTemplate &t,
                                       std::int64_t s);

//===----------------------------------------------------------------------===//
// Generation
//===----------------------------------------------------------------------===//

/// Everything needed to regenerate an unstructured program from its
/// reference.
struct Provenance {
  struct Instance {
    int task = 0;
    int instance = 0;
    std::string function;
    std::optional<std::int64_t> scale;

    friend bool operator==(const Instance &, const Instance &) = default;
  };
  struct Rename {
    int task = 0;
    int instance = 0;
    std::string original;
    std::string fresh;

    friend bool operator==(const Rename &, const Rename &) = default;
  };

  /// In inlining order.
  std::vector<Instance> instances;
  std::vector<Rename> renames;
  /// Scales requested on the command line; empty unless templates were used.
  std::vector<std::int64_t> scales;
  bool scaled = false;
  bool hoisted = false;
  std::optional<std::uint64_t> reorder_seed;
  /// New top-level position -> old position.
  std::vector<std::size_t> permutation;

  friend bool operator==(const Provenance &, const Provenance &) = default;

  /// True if some instance of `task` came from a scaled template.
  bool has_scales(int task) const;
};

struct GenerateOptions {
  /// Instantiate eligible callees as scaled templates. When set, the
  /// literal scale arguments must equal this list in call order.
  std::optional<std::vector<std::int64_t>> scales;
  bool hoist = false;
  std::optional<std::uint64_t> reorder_seed;
};

struct GenerateResult {
  Program unstructured;
  TaskAnnotation annotation;
  Provenance provenance;
};

/// Inlines every call of main. With `scaled`, callees that form a scaled
/// template and receive integer literals for the scale parameter are
/// instantiated instead of bound.
GenerateResult inline_all(const Program &reference, bool scaled = false);

/// inline_all, then hoist_common, then reorder, as selected.
GenerateResult generate(const Program &reference, const GenerateOptions &opt);

/// Regenerates from the options recorded in `prov`.
GenerateResult replay(const Program &reference, const Provenance &prov);

//===----------------------------------------------------------------------===//
// Reordering and hoisting
//===----------------------------------------------------------------------===//

class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Value in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n) noexcept { return next() % n; }

private:
  std::uint64_t state_;
};

struct ReorderResult {
  Program program;
  /// New top-level position -> old position.
  std::vector<std::size_t> permutation;
  /// Previous StmtId of each new StmtId.
  std::vector<StmtId> previous_ids;
};

/// Shuffles the top-level statements of main into a random linear extension
/// of `g`. Compound statements move as units. The result always differs from
/// the input order; throws TransformError(OnlyOneOrder) if no other order
/// exists.
ReorderResult reorder(const Program &p, const DepGraph &g,
                      std::uint64_t seed);

/// Carries an annotation across a renumbering.
TaskAnnotation remap_annotation(const TaskAnnotation &ann,
                                std::span<const StmtId> previous_ids);

struct HoistResult {
  Program program;
  TaskAnnotation annotation;
  StmtId definition{0};
  std::string var;
};

/// Computes the largest pure expression shared by two or more tasks once, in
/// a fresh glue assignment before its first use. Throws
/// TransformError(NoCommonComputation).
HoistResult hoist_common(const Program &p, const TaskAnnotation &ann);

} // namespace decomplab

#endif // DECOMPLAB_TRANSFORM_TRANSFORM_HPP
