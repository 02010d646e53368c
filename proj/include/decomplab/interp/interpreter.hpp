#ifndef DECOMPLAB_INTERP_INTERPRETER_HPP
#define DECOMPLAB_INTERP_INTERPRETER_HPP

#include "decomplab/interp/value.hpp"
#include "decomplab/lang/ast.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace decomplab {

struct RunLimits {
  std::uint64_t max_steps = 10'000'000;
  std::size_t max_list_len = 1'000'000;
};

/// Observable behavior of one run.
struct Trace {
  std::vector<std::string> lines;
  /// Absent when main is void.
  std::optional<Value> result;

  friend bool operator==(const Trace &, const Trace &) = default;
};

class RuntimeError : public std::runtime_error {
public:
  enum class Kind {
    DivisionByZero,
    IntOverflow,
    IndexOutOfBounds,
    TypeMismatch,
    StepLimitExceeded,
    ArityMismatch,
    UndefinedVariable,
    ListLimitExceeded,
  };

  RuntimeError(Kind kind, SourcePos pos, const std::string &message);

  Kind kind() const noexcept { return kind_; }
  SourcePos pos() const noexcept { return pos_; }

private:
  Kind kind_;
  SourcePos pos_;
};

std::string_view to_string(RuntimeError::Kind kind) noexcept;

/// Evaluates main with `args`. Throws RuntimeError; each error carries the
/// position of the statement being executed.
Trace run(const Program &p, std::span<const Value> args,
          const RunLimits &limits = {});

/// A run that may have failed; printed lines before the failure are kept.
struct RunOutcome {
  std::vector<std::string> lines;
  std::variant<std::optional<Value>, RuntimeError> end;

  bool failed() const noexcept { return end.index() == 1; }
};

RunOutcome run_captured(const Program &p, std::span<const Value> args,
                        const RunLimits &limits = {});

/// Throws RuntimeError (ArityMismatch / TypeMismatch) if `args` cannot be
/// bound to main's parameters.
void check_arguments(const Program &p, std::span<const Value> args);

//===----------------------------------------------------------------------===//
// Behavioral equivalence
//===----------------------------------------------------------------------===//

using InputTuple = std::vector<Value>;

struct Divergence {
  std::size_t input_index = 0;
  InputTuple input;
  /// Index of the first differing output line; absent when the difference is
  /// in the result (or the error).
  std::optional<std::size_t> line;
  std::string expected;
  std::string actual;
};

struct EquivalenceReport {
  bool equivalent = true;
  std::optional<Divergence> first_divergence;
};

/// Runs both programs on every input in order and reports the first
/// difference. Runs that fail with the same error kind on the same input
/// count as equivalent.
EquivalenceReport equivalent(const Program &a, const Program &b,
                             std::span<const InputTuple> inputs,
                             const RunLimits &limits = {});

} // namespace decomplab

#endif // DECOMPLAB_INTERP_INTERPRETER_HPP
