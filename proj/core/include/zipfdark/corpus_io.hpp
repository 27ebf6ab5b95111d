#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zipfdark/corpus_experiment.hpp"
#include "zipfdark/tokenizer.hpp"

namespace zipfdark {

struct ManifestEntry {
  std::string text_id;
  std::filesystem::path path;
  std::uintmax_t byte_size = 0;
  std::string language;
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;
  std::string source_notes;
};

/// Parses `text_id,path[,language]` with an optional header row. Relative
/// paths resolve against `base_dir`. Throws ParseError on duplicate ids.
/// Paths are not checked; see load_manifest.
CorpusManifest parse_manifest(std::istream& in, const std::filesystem::path& base_dir = {});

/// parse_manifest plus existence checks. Missing files throw ParseError
/// unless `allow_missing`, in which case they are kept and fail at run time.
CorpusManifest load_manifest(const std::filesystem::path& path, bool allow_missing = false);

struct StrippedText {
  std::string body;
  bool markers_found = false;
};

/// Body between the Project Gutenberg `*** START OF` / `*** END OF` marker
/// lines. Without both markers the input is returned unchanged and flagged.
StrippedText strip_boilerplate(std::string_view raw);

/// Text preparation ahead of tokenization. Gutenberg files are hard-wrapped
/// at ~70 columns with CRLF endings; those line breaks are layout, not
/// punctuation, and would otherwise outrank every mark but space.
struct IngestOptions {
  bool strip_boilerplate = true;
  /// CRLF and lone CR become LF.
  bool normalize_line_endings = true;
  /// A single LF between two non-LF characters becomes a space; blank-line
  /// paragraph breaks are kept.
  bool unwrap_lines = true;
};

struct PreparedText {
  std::string text;
  std::vector<std::string> flags;
};

PreparedText prepare_text(std::string_view raw, const IngestOptions& options);

/// How cutoffs are chosen for a corpus run.
struct CutoffSpec {
  std::size_t min = 2;
  std::size_t max = 100000;
  std::size_t count = 676;
  /// When set, used verbatim instead of log spacing.
  std::vector<std::size_t> explicit_cutoffs;

  std::vector<std::size_t> resolve() const;
};

struct RunOptions {
  std::filesystem::path output_dir;
  std::size_t workers = 0;  // 0 = hardware concurrency
  bool resume = true;
  /// Stop after this many newly analysed texts (simulates an interruption).
  std::optional<std::size_t> stop_after;
  double significance_level = 0.05;
  IngestOptions ingest;
  std::ostream* log = nullptr;
};

struct TextFailure {
  std::string text_id;
  std::string reason;
};

struct RunSummary {
  std::size_t analysed = 0;
  std::size_t resumed = 0;  // records already on disk
  std::vector<TextFailure> failures;
  std::optional<ScanResult> scan;
  std::string scan_error;
  bool interrupted = false;

  std::size_t records() const { return analysed + resumed; }
  /// 0 success, 1 partial (some texts failed), 2 fatal (no records).
  int exit_code() const;
};

/// Layout of the output directory.
///   records/<id>.json   one record per text, written as each finishes
///   errors.csv          text_id,reason
///   corpus.csv          all records, sorted by text_id
///   scan_result.json    ScanResult
///   fig2_*.csv          plot data (see write_scan_report)
std::filesystem::path record_path(const std::filesystem::path& output_dir,
                                  std::string_view text_id);

/// prepare -> tokenize -> analyse for every manifest entry, then scan. Records
/// are persisted as they complete; with `resume`, ids already on disk are
/// loaded instead of recomputed.
RunSummary run_corpus(const CorpusManifest& manifest, const TokenizerConfig& config,
                      const CutoffSpec& cutoffs, const RunOptions& options);

/// Loads every record JSON under `records_dir`, sorted by text_id.
std::vector<TextRecord> load_records(const std::filesystem::path& records_dir);

}  // namespace zipfdark
