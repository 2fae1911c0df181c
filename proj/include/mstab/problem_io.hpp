#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "mstab/matrix.hpp"

namespace mstab {

struct ProblemFile {
  Matrix h;
  std::optional<Vector> v;
  std::optional<Vector> w;
  std::optional<Matrix> c;
  std::optional<Matrix> k;
  std::string name;
  std::string description;

  bool operator==(const ProblemFile&) const = default;
};

// Two input formats, told apart by the first non-blank character:
//
//  '{'   JSON object with keys "H", "v", "w", "C", "K" (matrices are arrays of
//        row arrays), "name" and "description"; other keys are rejected.
//  else  plain text: the dimension n, then n rows of H. Optional blocks
//        "v:" / "w:" (n numbers) and "C:" / "K:" (n rows) follow; "name:"
//        takes the rest of its line. '#' starts a comment.
//
// ParseError carries the 1-based line and column of the offending token.
ProblemFile parse_problem(std::string_view text);
ProblemFile load_problem(const std::filesystem::path& path);

// JSON with %.17g numbers; parse_problem(to_json(p)) reproduces p exactly.
std::string to_json(const ProblemFile& p);

}  // namespace mstab
