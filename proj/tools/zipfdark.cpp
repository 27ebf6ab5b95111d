// zipfdark: command-line front end for the zipfdark core library.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zipfdark/corpus_experiment.hpp"
#include "zipfdark/corpus_io.hpp"
#include "zipfdark/csv.hpp"
#include "zipfdark/errors.hpp"
#include "zipfdark/persistence.hpp"
#include "zipfdark/rankfreq.hpp"
#include "zipfdark/simon_model.hpp"
#include "zipfdark/tokenizer.hpp"
#include "zipfdark/zm_regression.hpp"

namespace fs = std::filesystem;
using namespace zipfdark;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitFatal = 2;

struct TextOptions {
  std::string input;
  std::string rules_file;
  bool collapse_runs = false;
  bool strip = false;
  bool keep_line_breaks = false;

  TokenizerConfig config() const {
    TokenizerConfig config = TokenizerConfig::english_default();
    if (!rules_file.empty()) {
      config.contraction_rules = load_contraction_rules(rules_file);
      config.sort_rules();
    }
    config.collapse_delimiter_runs = collapse_runs;
    return config;
  }

  std::string text() const {
    IngestOptions ingest;
    ingest.strip_boilerplate = strip;
    ingest.normalize_line_endings = !keep_line_breaks;
    ingest.unwrap_lines = !keep_line_breaks;
    auto prepared = prepare_text(read_file(input), ingest);
    for (const auto& flag : prepared.flags) std::cerr << "warning: " << input << ": " << flag << '\n';
    return std::move(prepared.text);
  }
};

void add_text_options(CLI::App* cmd, TextOptions& opts) {
  cmd->add_option("input", opts.input, "UTF-8 text file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--rules", opts.rules_file,
                  "Contraction rules, one `surface<TAB>part|part` per line (replaces defaults)")
      ->check(CLI::ExistingFile);
  cmd->add_flag("--collapse-runs", opts.collapse_runs,
                "Merge runs of the same delimiter character into one token");
  cmd->add_flag("--strip-boilerplate", opts.strip,
                "Keep only the body between Project Gutenberg START/END markers");
  cmd->add_flag("--keep-line-breaks", opts.keep_line_breaks,
                "Do not normalise CRLF or unwrap hard-wrapped lines");
}

std::string default_output_dir(const std::string& fallback) {
  if (const char* env = std::getenv("ZIPFDARK_OUTPUT_DIR"); env && *env) return env;
  return fallback;
}

// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
    return;
  }
  if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  write_file_atomic(path, contents);
}

int run_tokenize(const TextOptions& opts, const std::string& output) {
  const auto tokens = tokenize(opts.text(), opts.config());
  std::ostringstream out;
  out << "index,begin,end,kind,surface\n";
  std::size_t index = 0;
  for (const auto& t : tokens) {
    out << index++ << ',' << t.span.begin << ',' << t.span.end << ',' << to_string(t.kind) << ','
        << csv::quote(csv::escape_surface(t.surface)) << '\n';
  }
  emit(output, out.str());
  return kExitOk;
}

int run_rankfreq(const TextOptions& opts, const std::string& output_dir) {
  const auto tokens = tokenize(opts.text(), opts.config());
  const auto integrated = build_dist(tokens, DistMode::Integrated);
  const auto word_only = build_dist(tokens, DistMode::WordOnly);
  const auto map = rank_map(integrated, word_only);
  fs::create_directories(output_dir);
  std::ostringstream a, b, c, d;
  write_dist_csv(a, integrated);
  write_dist_csv(b, word_only);
  write_rank_map_csv(c, word_only, map);
  write_rank_translation_csv(d, integrated, map);
  write_file_atomic(fs::path(output_dir) / "integrated.csv", a.str());
  write_file_atomic(fs::path(output_dir) / "word_only.csv", b.str());
  write_file_atomic(fs::path(output_dir) / "rank_map.csv", c.str());
  write_file_atomic(fs::path(output_dir) / "fig1_rank_translation.csv", d.str());
  std::cout << "N=" << integrated.size() << " R=" << word_only.size() << " n1=" << map.n1()
            << " tokens=" << integrated.total_tokens() << '\n';
  return kExitOk;
}

int run_fit(const TextOptions& opts, bool input_is_dist, const std::string& mode_name,
            std::size_t r_cut, const std::vector<std::size_t>& cutoffs,
            const std::string& output) {
  const DistMode mode = dist_mode_from_string(mode_name);
  std::optional<RankFreqDist> dist;
  if (input_is_dist) {
    std::ifstream in(opts.input, std::ios::binary);
    dist.emplace(read_dist_csv(in, mode));
  } else {
    const auto tokens = tokenize(opts.text(), opts.config());
    dist.emplace(build_dist(tokens, mode));
  }

  if (cutoffs.empty()) {
    const std::size_t cut = r_cut == 0 ? dist->size() : r_cut;
    const auto fit = fit_shift(quotient_series(*dist, cut));
    emit(output, fit_to_json(fit) + "\n");
    return kExitOk;
  }

  std::vector<std::size_t> sorted = cutoffs;
  std::sort(sorted.begin(), sorted.end());
  std::ostringstream out;
  bool all_ok = true;
  for (const auto& f : fit_at_cutoffs(*dist, sorted)) {
    if (f.ok()) {
      out << fit_to_json(*f.fit) << '\n';
    } else {
      all_ok = false;
      out << R"({"r_cut":)" << f.r_cut << R"(,"error":)" << '"' << f.reason << "\"}\n";
    }
  }
  emit(output, out.str());
  return all_ok ? kExitOk : kExitPartial;
}

int run_scan(const std::string& records_dir, const std::string& output_dir, double level) {
  const auto records = load_records(records_dir);
  if (records.size() < 3) {
    std::cerr << "scan needs at least 3 records, found " << records.size() << " in "
              << records_dir << '\n';
    return kExitFatal;
  }
  const auto cutoffs = records.front().cutoffs();
  const auto result = scan(records, cutoffs, level);
  fs::create_directories(output_dir);
  write_file_atomic(fs::path(output_dir) / "scan_result.json", scan_to_json(result));
  write_scan_report(output_dir, result);
  if (result.rho_max)
    std::cout << "rho_max=" << *result.rho_max << " r_cut*=" << *result.r_cut_star
              << " comparisons=" << result.comparisons << '\n';
  else
    std::cout << "no cutoff had a defined correlation\n";
  return kExitOk;
}

int run_report(const std::string& scan_json, const std::string& output_dir,
               const ReportOptions& options, const std::optional<TextOptions>& fig1_text) {
  const auto result = scan_from_json(read_file(scan_json));
  for (const auto& p : write_scan_report(output_dir, result, options)) std::cout << p.string() << '\n';
  if (fig1_text) {
    const auto tokens = tokenize(fig1_text->text(), fig1_text->config());
    const auto integrated = build_dist(tokens, DistMode::Integrated);
    const auto word_only = build_dist(tokens, DistMode::WordOnly);
    std::ostringstream out;
    write_rank_translation_csv(out, integrated, rank_map(integrated, word_only));
    const auto path = fs::path(output_dir) / "fig1_rank_translation.csv";
    write_file_atomic(path, out.str());
    std::cout << path.string() << '\n';
  }
  return kExitOk;
}

int run_simon(double alpha, std::uint64_t steps, std::uint64_t seed, bool compare,
              const std::string& output, const std::string& report_path) {
  const SimonConfig config(alpha, steps, seed);
  const auto run = simulate(config);
  std::ostringstream out;
  write_simon_csv(out, run);
  emit(output, out.str());
  if (compare) {
    const auto report = run_vs_analytic(run, config.theta());
    emit(report_path, comparison_to_json(report, config) + "\n");
  }
  std::cerr << "generator=" << kSimonGenerator << " N=" << run.distinct_words() << '\n';
  return kExitOk;
}

int run_corpus_cmd(const std::string& manifest_path, const TextOptions& text_opts,
                   const CutoffSpec& cutoffs, RunOptions options) {
  const auto manifest = load_manifest(manifest_path, /*allow_missing=*/true);
  options.log = &std::cerr;
  const auto summary = run_corpus(manifest, text_opts.config(), cutoffs, options);
  std::cout << "analysed=" << summary.analysed << " resumed=" << summary.resumed
            << " failed=" << summary.failures.size() << '\n';
  for (const auto& f : summary.failures) std::cout << "  failed " << f.text_id << ": " << f.reason << '\n';
  if (summary.interrupted) std::cout << "stopped early; rerun to resume\n";
  if (summary.scan && summary.scan->rho_max) {
    std::cout << "rho_max=" << *summary.scan->rho_max << " r_cut*=" << *summary.scan->r_cut_star
              << '\n';
  } else if (!summary.scan_error.empty()) {
    std::cout << "scan skipped: " << summary.scan_error << '\n';
  }
  return summary.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Word and non-word rank-frequency analysis with Zipf-Mandelbrot shift fits"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Key-value config file; command-line flags take precedence");

  TextOptions text_opts;
  std::string output;

  auto* tok = app.add_subcommand("tokenize", "Tokenize text into a token CSV");
  add_text_options(tok, text_opts);
  tok->add_option("-o,--output", output, "Output CSV (default stdout)");

  std::string out_dir = default_output_dir("zipfdark-out");
  auto* rf = app.add_subcommand("rankfreq", "Integrated and word-only distributions plus rank map");
  add_text_options(rf, text_opts);
  rf->add_option("-o,--output-dir", out_dir, "Output directory")->capture_default_str();

  bool input_is_dist = false;
  std::string mode = "word-only";
  std::size_t r_cut = 0;
  std::vector<std::size_t> fit_cutoffs;
  auto* fit = app.add_subcommand("fit", "Fit the Zipf-Mandelbrot shift with gamma fixed at 1");
  add_text_options(fit, text_opts);
  fit->add_flag("--dist", input_is_dist, "Input is a distribution CSV from `rankfreq`");
  fit->add_option("--mode", mode, "Distribution mode")
      ->check(CLI::IsMember({"integrated", "word-only"}))
      ->capture_default_str();
  fit->add_option("--rcut", r_cut, "Number of ranks to fit (default all)");
  fit->add_option("--cutoffs", fit_cutoffs, "Several cutoffs, one JSON line each")->delimiter(',');
  fit->add_option("-o,--output", output, "Output file (default stdout)");

  std::string records_dir;
  double level = 0.05;
  auto* sc = app.add_subcommand("scan", "Correlate k_ZM with n1 - 1 across persisted records");
  sc->add_option("records", records_dir, "Directory of record JSON files")
      ->required()
      ->check(CLI::ExistingDirectory);
  sc->add_option("-o,--output-dir", out_dir, "Output directory")->capture_default_str();
  sc->add_option("--level", level, "Family-wise significance level")->capture_default_str();

  double alpha = 0.1;
  std::uint64_t steps = 100000;
  std::uint64_t seed = 1;
  bool compare = false;
  std::string report_path;
  auto* si = app.add_subcommand("simon", "Simulate Simon's model");
  si->add_option("--alpha", alpha, "Innovation probability")->capture_default_str();
  si->add_option("--steps", steps, "Tokens to generate")->capture_default_str();
  si->add_option("--seed", seed, "RNG seed")->capture_default_str();
  si->add_flag("--compare", compare, "Compare ranked counts with the refined analytic law");
  si->add_option("-o,--output", output, "Run CSV (default stdout)");
  si->add_option("--report", report_path, "Comparison JSON (default stdout)");

  std::string manifest_path;
  CutoffSpec cutoffs;
  RunOptions run_options;
  bool no_resume = false;
  std::size_t stop_after = 0;
  auto* co = app.add_subcommand("corpus", "Run the full pipeline over a manifest");
  co->add_option("manifest", manifest_path, "CSV text_id,path[,language]")
      ->required()
      ->check(CLI::ExistingFile);
  co->add_option("-o,--output-dir", out_dir, "Output directory")->capture_default_str();
  co->add_option("--rules", text_opts.rules_file, "Contraction rule file")->check(CLI::ExistingFile);
  co->add_flag("--collapse-runs", text_opts.collapse_runs, "Merge runs of a delimiter");
  co->add_flag("--keep-line-breaks", text_opts.keep_line_breaks,
               "Do not normalise CRLF or unwrap hard-wrapped lines");
  bool no_strip = false;
  co->add_flag("--no-strip", no_strip, "Keep Project Gutenberg headers and footers");
  co->add_option("--workers", run_options.workers, "Worker threads (0 = all cores)");
  co->add_option("--cutoff-min", cutoffs.min, "Smallest log-spaced cutoff")->capture_default_str();
  co->add_option("--cutoff-max", cutoffs.max, "Largest log-spaced cutoff")->capture_default_str();
  co->add_option("--cutoff-count", cutoffs.count,
                 "Number of log-spaced cutoffs before deduplication")->capture_default_str();
  co->add_option("--cutoffs", cutoffs.explicit_cutoffs, "Explicit cutoff list")->delimiter(',');
  co->add_option("--level", run_options.significance_level, "Family-wise significance level")->capture_default_str();
  co->add_flag("--no-resume", no_resume, "Recompute records already on disk");
  co->add_option("--stop-after", stop_after, "Analyse at most this many new texts");

  std::string scan_json;
  ReportOptions report_options;
  std::string fig1_input;
  auto* rep = app.add_subcommand("report", "Per-figure plot data from a scan result");
  rep->add_option("scan", scan_json, "scan_result.json")->required()->check(CLI::ExistingFile);
  rep->add_option("-o,--output-dir", out_dir, "Output directory")->capture_default_str();
  rep->add_option("--scatter-bin", report_options.scatter_bin_width,
                  "k_ZM bin width of the scatter density")
      ->capture_default_str();
  rep->add_option("--hist-bin", report_options.histogram_bin_width,
                  "Bin width of the offset and k_S histograms")
      ->capture_default_str();
  rep->add_option("--text", fig1_input, "Also emit rank-translation data for this text")
      ->check(CLI::ExistingFile);
  rep->add_flag("--strip-boilerplate", text_opts.strip,
                "Keep only the body between Project Gutenberg START/END markers");
  rep->add_flag("--keep-line-breaks", text_opts.keep_line_breaks,
                "Do not normalise CRLF or unwrap hard-wrapped lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitFatal;
  }

  try {
    if (*tok) return run_tokenize(text_opts, output);
    if (*rf) return run_rankfreq(text_opts, out_dir);
    if (*fit) return run_fit(text_opts, input_is_dist, mode, r_cut, fit_cutoffs, output);
    if (*sc) return run_scan(records_dir, out_dir, level);
    if (*si) return run_simon(alpha, steps, seed, compare, output, report_path);
    if (*co) {
      run_options.output_dir = out_dir;
      run_options.resume = !no_resume;
      run_options.ingest.strip_boilerplate = !no_strip;
      run_options.ingest.normalize_line_endings = !text_opts.keep_line_breaks;
      run_options.ingest.unwrap_lines = !text_opts.keep_line_breaks;
      if (stop_after > 0) run_options.stop_after = stop_after;
      return run_corpus_cmd(manifest_path, text_opts, cutoffs, run_options);
    }
    if (*rep) {
      std::optional<TextOptions> fig1;
      if (!fig1_input.empty()) {
        fig1 = text_opts;
        fig1->input = fig1_input;
      }
      return run_report(scan_json, out_dir, report_options, fig1);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFatal;
  }
  return kExitFatal;
}
