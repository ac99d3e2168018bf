#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "svlib/ast.hpp"

namespace svlib::corpus {

struct CorpusEntry {
  std::string id;
  std::string task;                      // script text
  std::optional<std::string> witness;    // witness text
  /// One verdict per verify-call of the task.
  std::vector<std::string> expected_verdicts;
  std::string provenance;
  std::filesystem::path task_file;
  std::optional<std::filesystem::path> witness_file;
};

std::filesystem::path default_dir();

std::vector<std::string> list(const std::filesystem::path& dir = default_dir());

/// Throws std::out_of_range for an id missing from the manifest.
CorpusEntry load(const std::string& id, const std::filesystem::path& dir = default_dir());

/// A well-formed script over Int built from assume, assign, sequence, if,
/// while, break, continue, havoc and choice. Same seed, same script.
Script generate_random_program(std::uint64_t seed, int size);

}  // namespace svlib::corpus
