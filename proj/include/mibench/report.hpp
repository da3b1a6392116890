#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mibench/evaluation.hpp"

namespace mibench {

struct Winner {
  std::string design;
  std::string subject;
  std::size_t n = 0;
  Algorithm algorithm = Algorithm::Lda;
  double mean = 0.0;
};

/// Best mean per (design, subject, n), first-appearance order. Failed cells
/// are skipped; equal means resolve alphabetically (CART < KNN < LDA < SVM).
std::vector<Winner> extract_winners(const std::vector<AccuracySummary>& summaries);

std::string summary_csv(const std::vector<AccuracySummary>& summaries);
std::string winners_csv(const std::vector<Winner>& winners);
std::string accuracies_csv(const std::vector<AccuracySummary>& summaries);
/// Table-shaped, one decimal.
std::string summary_text(const std::vector<AccuracySummary>& summaries);

struct ReportFiles {
  std::filesystem::path summary, winners, accuracies, meta, text;
};

ReportFiles write_reports(const std::filesystem::path& dir, const std::vector<AccuracySummary>& summaries,
                          const std::map<std::string, std::string>& meta);

}  // namespace mibench
