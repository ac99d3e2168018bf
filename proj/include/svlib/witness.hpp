#pragma once

#include <optional>
#include <string>
#include <vector>

#include "svlib/ast.hpp"
#include "svlib/vcgen.hpp"

namespace svlib {

struct WitnessMeta {
  std::string producer = "svlib";
  std::vector<std::string> input_files;
};

/// Restates the loop invariants, contracts and ranking functions supplied
/// through annotate-tag commands before the verify-call.
Witness correctness_witness(const Script& script, std::size_t verify_index, const WitnessMeta& meta);

Witness violation_witness(const Trace& trace, const WitnessMeta& meta);

/// The trace with its violated property replaced by `(invalid-step step)`.
Witness invalid_step_witness(const Trace& trace, const Step& step, const WitnessMeta& meta);

/// Reconstructs a trace from a model of a failed entry obligation. Returns
/// nullopt (with a reason) when the path cannot be expressed as steps.
std::optional<Trace> trace_from_model(const Obligation& ob, const std::vector<SmtCommand>& model,
                                      std::string* why = nullptr);

/// Whether any symbol in the witness text starts with `#`.
bool uses_reserved_symbols(const std::string& witness_text);

}  // namespace svlib
