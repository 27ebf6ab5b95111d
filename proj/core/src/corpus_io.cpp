#include "zipfdark/corpus_io.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "zipfdark/csv.hpp"
#include "zipfdark/errors.hpp"
#include "zipfdark/persistence.hpp"

namespace zipfdark {

namespace fs = std::filesystem;

CorpusManifest parse_manifest(std::istream& in, const fs::path& base_dir) {
  CorpusManifest manifest;
  std::set<std::string> seen;
  std::string line;
  bool first = true;
  std::size_t line_no = 0;
  while (csv::next_line(in, line)) {
    ++line_no;
    auto fields = csv::split_record(line);
    if (first) {
      first = false;
      if (fields.size() >= 2 && fields[0] == "text_id" && fields[1] == "path") continue;
    }
    if (fields.size() < 2 || fields.size() > 3)
      throw ParseError("manifest line " + std::to_string(line_no) +
                       ": expected text_id,path[,language]");
    if (fields[0].empty() || fields[1].empty())
      throw ParseError("manifest line " + std::to_string(line_no) + ": empty text_id or path");
    if (!seen.insert(fields[0]).second)
      throw ParseError("manifest line " + std::to_string(line_no) + ": duplicate text_id '" +
                       fields[0] + "'");
    ManifestEntry entry;
    entry.text_id = fields[0];
    entry.path = fields[1];
    if (entry.path.is_relative() && !base_dir.empty()) entry.path = base_dir / entry.path;
    if (fields.size() == 3) entry.language = fields[2];
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

CorpusManifest load_manifest(const fs::path& path, bool allow_missing) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open manifest " + path.string());
  CorpusManifest manifest = parse_manifest(in, path.parent_path());
  manifest.source_notes = "manifest " + path.string();
  for (auto& entry : manifest.entries) {
    std::error_code ec;
    const auto size = fs::file_size(entry.path, ec);
    if (ec) {
      if (!allow_missing)
        throw ParseError("manifest entry '" + entry.text_id + "': cannot stat " +
                         entry.path.string());
      continue;
    }
    entry.byte_size = size;
  }
  return manifest;
}

namespace {

// Start of the line containing `pos`.
std::size_t line_start(std::string_view s, std::size_t pos) {
  const auto nl = s.rfind('\n', pos);
  return nl == std::string_view::npos ? 0 : nl + 1;
}

// Finds a marker that begins a line.
std::size_t find_marker_line(std::string_view s, std::string_view marker, std::size_t from) {
  for (auto pos = s.find(marker, from); pos != std::string_view::npos;
       pos = s.find(marker, pos + 1)) {
    if (line_start(s, pos) == pos) return pos;
  }
  return std::string_view::npos;
}

}  // namespace

StrippedText strip_boilerplate(std::string_view raw) {
  const auto start = find_marker_line(raw, "*** START OF", 0);
  if (start != std::string_view::npos) {
    const auto start_eol = raw.find('\n', start);
    if (start_eol != std::string_view::npos) {
      const auto end = find_marker_line(raw, "*** END OF", start_eol + 1);
      if (end != std::string_view::npos)
        return {std::string(raw.substr(start_eol + 1, end - (start_eol + 1))), true};
    }
  }
  return {std::string(raw), false};
}

PreparedText prepare_text(std::string_view raw, const IngestOptions& options) {
  PreparedText out;
  std::string text;
  if (options.strip_boilerplate) {
    StrippedText stripped = strip_boilerplate(raw);
    if (!stripped.markers_found) out.flags.push_back("no_gutenberg_markers");
    text = std::move(stripped.body);
  } else {
    text.assign(raw);
  }
  if (options.normalize_line_endings && text.find('\r') != std::string::npos) {
    std::string normalized;
    normalized.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '\r') {
        normalized.push_back('\n');
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
      } else {
        normalized.push_back(text[i]);
      }
    }
    text = std::move(normalized);
  }
  if (options.unwrap_lines) {
    for (std::size_t i = 1; i + 1 < text.size(); ++i) {
      if (text[i] == '\n' && text[i - 1] != '\n' && text[i + 1] != '\n') text[i] = ' ';
    }
  }
  out.text = std::move(text);
  return out;
}

std::vector<std::size_t> CutoffSpec::resolve() const {
  if (!explicit_cutoffs.empty()) {
    auto out = explicit_cutoffs;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.front() < 2) throw RangeError("cutoffs must be at least 2");
    return out;
  }
  return log_spaced_cutoffs(min, max, count);
}

int RunSummary::exit_code() const {
  if (records() == 0) return 2;
  if (!failures.empty() || interrupted) return 1;
  return 0;
}

fs::path record_path(const fs::path& output_dir, std::string_view text_id) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string name;
  for (char ch : text_id) {
    const auto c = static_cast<unsigned char>(ch);
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
        c == '-' || c == '_' || (c == '.' && !name.empty())) {
      name.push_back(ch);
    } else {
      name.push_back('%');
      name.push_back(kHex[c >> 4]);
      name.push_back(kHex[c & 0xF]);
    }
  }
  return output_dir / "records" / (name + ".json");
}

std::vector<TextRecord> load_records(const fs::path& records_dir) {
  std::vector<TextRecord> records;
  if (!fs::exists(records_dir)) return records;
  std::vector<fs::path> paths;
  for (const auto& item : fs::directory_iterator(records_dir)) {
    if (item.is_regular_file() && item.path().extension() == ".json") paths.push_back(item.path());
  }
  std::sort(paths.begin(), paths.end());
  for (const auto& p : paths) records.push_back(record_from_json(read_file(p)));
  std::sort(records.begin(), records.end(),
            [](const TextRecord& a, const TextRecord& b) { return a.text_id < b.text_id; });
  return records;
}

namespace {

// Serialises record writes; one record file per text.
class RecordWriter {
 public:
  explicit RecordWriter(fs::path output_dir) : output_dir_(std::move(output_dir)) {}

  void write(const TextRecord& record) {
    const std::string json = record_to_json(record);
    std::lock_guard lock(mutex_);
    write_file_atomic(record_path(output_dir_, record.text_id), json);
  }

 private:
  fs::path output_dir_;
  std::mutex mutex_;
};

std::optional<TextRecord> try_resume(const fs::path& path, const std::string& text_id,
                                     const std::vector<std::size_t>& cutoffs) {
  if (!fs::exists(path)) return std::nullopt;
  try {
    TextRecord record = record_from_json(read_file(path));
    if (record.text_id == text_id && record.cutoffs() == cutoffs) return record;
  } catch (const Error&) {
  }
  return std::nullopt;
}

}  // namespace

RunSummary run_corpus(const CorpusManifest& manifest, const TokenizerConfig& config,
                      const CutoffSpec& cutoff_spec, const RunOptions& options) {
  if (manifest.entries.empty()) throw DomainError("manifest has no entries");
  if (options.output_dir.empty()) throw DomainError("no output directory given");
  const std::vector<std::size_t> cutoffs = cutoff_spec.resolve();
  fs::create_directories(options.output_dir / "records");

  RunSummary summary;
  const std::size_t n = manifest.entries.size();
  std::vector<std::optional<TextRecord>> records(n);
  std::vector<std::optional<std::string>> failures(n);

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& entry = manifest.entries[i];
    // Stale errors from an earlier run are recomputed, never resumed.
    if (options.resume) {
      records[i] = try_resume(record_path(options.output_dir, entry.text_id), entry.text_id,
                              cutoffs);
      if (records[i]) {
        ++summary.resumed;
        continue;
      }
    }
    pending.push_back(i);
  }

  RecordWriter writer(options.output_dir);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> started{0};
  std::mutex log_mutex;
  auto worker = [&] {
    while (true) {
      if (options.stop_after && started.fetch_add(1) >= *options.stop_after) return;
      const std::size_t k = next.fetch_add(1);
      if (k >= pending.size()) return;
      const std::size_t i = pending[k];
      const auto& entry = manifest.entries[i];
      try {
        const std::string raw = read_file(entry.path);
        PreparedText prepared = prepare_text(raw, options.ingest);
        TextRecord record = analyze_text(entry.text_id, prepared.text, config, cutoffs);
        record.flags = std::move(prepared.flags);
        writer.write(record);
        records[i] = std::move(record);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
      if (options.log) {
        std::lock_guard lock(log_mutex);
        *options.log << (failures[i] ? "failed " : "analysed ") << entry.text_id
                     << (failures[i] ? ": " + *failures[i] : std::string()) << '\n';
      }
    }
  };

  std::size_t workers = options.workers != 0 ? options.workers
                                             : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(pending.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  std::vector<TextRecord> done;
  for (std::size_t i = 0; i < n; ++i) {
    if (failures[i]) {
      summary.failures.push_back({manifest.entries[i].text_id, *failures[i]});
    } else if (records[i]) {
      done.push_back(std::move(*records[i]));
    }
  }
  summary.analysed = done.size() - summary.resumed;
  summary.interrupted = done.size() + summary.failures.size() < n;
  std::sort(done.begin(), done.end(),
            [](const TextRecord& a, const TextRecord& b) { return a.text_id < b.text_id; });
  std::sort(summary.failures.begin(), summary.failures.end(),
            [](const TextFailure& a, const TextFailure& b) { return a.text_id < b.text_id; });

  {
    std::ostringstream out;
    out << "text_id,reason\n";
    for (const auto& f : summary.failures) out << csv::quote(f.text_id) << ',' << csv::quote(f.reason) << '\n';
    write_file_atomic(options.output_dir / "errors.csv", out.str());
  }
  if (summary.interrupted) return summary;

  {
    std::ostringstream out;
    write_corpus_csv(out, done);
    write_file_atomic(options.output_dir / "corpus.csv", out.str());
  }
  if (done.size() < 3) {
    summary.scan_error = "scan needs at least 3 records, have " + std::to_string(done.size());
    return summary;
  }
  summary.scan = scan(done, cutoffs, options.significance_level);
  write_file_atomic(options.output_dir / "scan_result.json", scan_to_json(*summary.scan));
  write_scan_report(options.output_dir, *summary.scan);
  return summary;
}

}  // namespace zipfdark
