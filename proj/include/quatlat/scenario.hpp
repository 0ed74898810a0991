#pragma once

// Scenario files: a line-oriented script of constructions and expectations,
// replayed against the library. See scenarios/README.md for the format.

#include <filesystem>
#include <string>
#include <vector>

namespace quatlat {

enum class EntryKind { Step, Expect, Observe, Note };

struct ScenarioEntry {
  EntryKind kind = EntryKind::Note;
  std::size_t line = 0;
  std::string text;  // the source line without the keyword
};

struct Scenario {
  std::string name;
  std::string source;
  std::string tier = "quick";  // quick | slow | stretch
  unsigned n = 0;
  std::string algebra_a = "-1";
  std::string algebra_b = "-1";
  unsigned embed = 0;  // 0: no d
  std::vector<ScenarioEntry> entries;
};

// SchemaError (with the line number) on malformed input.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

struct ReportEntry {
  EntryKind kind = EntryKind::Note;
  std::size_t line = 0;
  std::string text;
  bool ok = true;      // step succeeded / expectation held
  std::string value;   // summary of the result or the actual value
  std::string error;   // error message for failed steps and expectations
  double seconds = 0;  // steps only
};

struct Report {
  std::string name;
  std::string source;
  std::string tier;
  unsigned n = 0;
  std::vector<ReportEntry> entries;
  double seconds = 0;

  std::size_t failures() const;
  std::size_t expectations() const;
  bool passed() const { return failures() == 0; }
};

struct RunOptions {
  unsigned threads = 1;
  bool timing = true;  // include timing fields when rendering
};

Report run_scenario(const Scenario& sc, const RunOptions& opt = {});

std::string render_text(const Report& r, const RunOptions& opt = {});
std::string render_json(const Report& r, const RunOptions& opt = {});
std::string render_json(const std::vector<Report>& rs, const RunOptions& opt = {});

}  // namespace quatlat
