#pragma once

// The acceptance suite (criteria 1-11), shared by the acceptance test and `verify`.

#include <functional>
#include <string>
#include <vector>

namespace curved2body {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
};

inline constexpr int kCriterionCount = 11;

CriterionResult run_criterion(int id);

/// Runs the given criteria (all when empty) in order, reporting each as it finishes.
std::vector<CriterionResult> run_criteria(const std::vector<int>& ids = {},
                                          const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace curved2body
