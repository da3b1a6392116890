#include "mibench/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mibench {

namespace {

std::string full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string one_decimal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

std::string subject_field(const AccuracySummary& s) {
  return s.cell.design.subject.empty() ? "-" : s.cell.design.subject;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + p.string());
}

}  // namespace

std::vector<Winner> extract_winners(const std::vector<AccuracySummary>& summaries) {
  std::vector<Winner> out;
  auto find = [&](const AccuracySummary& s) {
    return std::find_if(out.begin(), out.end(), [&](const Winner& w) {
      return w.design == s.cell.design.tag() && w.subject == subject_field(s) && w.n == s.cell.n;
    });
  };
  for (const auto& s : summaries) {
    if (s.failed()) continue;
    auto it = find(s);
    if (it == out.end()) {
      out.push_back({s.cell.design.tag(), subject_field(s), s.cell.n, s.cell.algorithm, s.mean});
      continue;
    }
    if (s.mean > it->mean ||
        (s.mean == it->mean && to_string(s.cell.algorithm) < to_string(it->algorithm))) {
      it->algorithm = s.cell.algorithm;
      it->mean = s.mean;
    }
  }
  return out;
}

std::string summary_csv(const std::vector<AccuracySummary>& summaries) {
  std::ostringstream o;
  o << "design,subject,algorithm,n,mean,std,reps,failures,mode\n";
  for (const auto& s : summaries) {
    o << s.cell.design.tag() << ',' << subject_field(s) << ',' << to_string(s.cell.algorithm) << ','
      << s.cell.n << ',' << (s.failed() ? "NA" : full(s.mean)) << ',' << (s.failed() ? "NA" : full(s.std))
      << ',' << s.cell.repetitions << ',' << s.failures << ',' << to_string(s.mode) << '\n';
  }
  return o.str();
}

std::string winners_csv(const std::vector<Winner>& winners) {
  std::ostringstream o;
  o << "design,subject,n,algorithm,mean\n";
  for (const auto& w : winners)
    o << w.design << ',' << w.subject << ',' << w.n << ',' << to_string(w.algorithm) << ',' << full(w.mean)
      << '\n';
  return o.str();
}

std::string accuracies_csv(const std::vector<AccuracySummary>& summaries) {
  std::ostringstream o;
  o << "design,subject,algorithm,n,rep,accuracy\n";
  for (const auto& s : summaries)
    for (std::size_t r = 0; r < s.per_rep.size(); ++r)
      o << s.cell.design.tag() << ',' << subject_field(s) << ',' << to_string(s.cell.algorithm) << ','
        << s.cell.n << ',' << r << ',' << (s.per_rep[r] ? full(*s.per_rep[r]) : "NA") << '\n';
  return o.str();
}

std::string summary_text(const std::vector<AccuracySummary>& summaries) {
  // Rows: (design, subject, n); columns: algorithms in first-appearance order.
  std::vector<Algorithm> algs;
  for (const auto& s : summaries)
    if (std::find(algs.begin(), algs.end(), s.cell.algorithm) == algs.end()) algs.push_back(s.cell.algorithm);
  const auto winners = extract_winners(summaries);

  std::ostringstream o;
  o << "mean (std) percent accuracy\n\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-6s %-8s %5s", "design", "subject", "n");
  o << buf;
  for (auto a : algs) {
    std::snprintf(buf, sizeof buf, " %14s", std::string(to_string(a)).c_str());
    o << buf;
  }
  o << "  Max(acc)\n";

  for (const auto& w : winners) {
    std::snprintf(buf, sizeof buf, "%-6s %-8s %5zu", w.design.c_str(), w.subject.c_str(), w.n);
    o << buf;
    for (auto a : algs) {
      const auto it = std::find_if(summaries.begin(), summaries.end(), [&](const AccuracySummary& s) {
        return s.cell.design.tag() == w.design && subject_field(s) == w.subject && s.cell.n == w.n &&
               s.cell.algorithm == a;
      });
      std::string cell = "-";
      if (it != summaries.end()) cell = it->failed() ? "failed" : one_decimal(it->mean) + " (" + one_decimal(it->std) + ")";
      std::snprintf(buf, sizeof buf, " %14s", cell.c_str());
      o << buf;
    }
    o << "  " << to_string(w.algorithm) << '\n';
  }
  for (const auto& s : summaries)
    if (s.failed())
      o << "\nFAILED " << s.cell.design.tag() << ' ' << subject_field(s) << ' ' << to_string(s.cell.algorithm)
        << " n=" << s.cell.n << ": " << s.error;
  return o.str();
}

ReportFiles write_reports(const std::filesystem::path& dir, const std::vector<AccuracySummary>& summaries,
                          const std::map<std::string, std::string>& meta) {
  std::filesystem::create_directories(dir);
  ReportFiles f{dir / "summary.csv", dir / "winners.csv", dir / "accuracies.csv", dir / "run-meta.txt",
                dir / "summary.txt"};
  write_file(f.summary, summary_csv(summaries));
  write_file(f.winners, winners_csv(extract_winners(summaries)));
  write_file(f.accuracies, accuracies_csv(summaries));
  write_file(f.text, summary_text(summaries));
  std::ostringstream m;
  for (const auto& [k, v] : meta) m << k << " = " << v << '\n';
  write_file(f.meta, m.str());
  return f;
}

}  // namespace mibench
