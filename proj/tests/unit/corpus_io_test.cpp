#include <sstream>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "zipfdark/corpus_io.hpp"
#include "zipfdark/errors.hpp"
#include "zipfdark/persistence.hpp"

namespace zipfdark {
namespace {

namespace fs = std::filesystem;

const TokenizerConfig kConfig = TokenizerConfig::english_default();

TEST(StripBoilerplate, KeepsBodyBetweenMarkers) {
  const std::string raw =
      "Header text\n*** START OF THE PROJECT GUTENBERG EBOOK X ***\nBody line.\nMore.\n"
      "*** END OF THE PROJECT GUTENBERG EBOOK X ***\nLicense\n";
  const auto out = strip_boilerplate(raw);
  EXPECT_TRUE(out.markers_found);
  EXPECT_EQ(out.body, "Body line.\nMore.\n");
}

TEST(StripBoilerplate, NoMarkersLeavesTextAndFlags) {
  const auto out = strip_boilerplate("just a text\n");
  EXPECT_FALSE(out.markers_found);
  EXPECT_EQ(out.body, "just a text\n");
  // A marker in the middle of a line does not count.
  EXPECT_FALSE(strip_boilerplate("x *** START OF y\nz\n*** END OF\n").markers_found);
}

TEST(StripBoilerplate, EmptyBody) {
  const auto out = strip_boilerplate("*** START OF A\r\n*** END OF A\r\n");
  EXPECT_TRUE(out.markers_found);
  EXPECT_EQ(out.body, "");
}

TEST(PrepareText, NormalisesAndUnwraps) {
  const auto prepared = prepare_text("one\r\ntwo\r\n\r\nthree\rfour", IngestOptions{false});
  EXPECT_EQ(prepared.text, "one two\n\nthree four");
  EXPECT_TRUE(prepared.flags.empty());
  IngestOptions raw;
  raw.strip_boilerplate = false;
  raw.normalize_line_endings = false;
  raw.unwrap_lines = false;
  EXPECT_EQ(prepare_text("a\r\nb", raw).text, "a\r\nb");
  EXPECT_EQ(prepare_text("a\nb", IngestOptions{}).flags,
            (std::vector<std::string>{"no_gutenberg_markers"}));
}

TEST(Manifest, ParsesWithOptionalHeader) {
  std::istringstream with_header("text_id,path,language\nb,b.txt,en\na,/abs/a.txt\n");
  const auto m = parse_manifest(with_header, "/base");
  ASSERT_EQ(m.entries.size(), 2u);
  EXPECT_EQ(m.entries[0].path, fs::path("/base/b.txt"));
  EXPECT_EQ(m.entries[0].language, "en");
  EXPECT_EQ(m.entries[1].path, fs::path("/abs/a.txt"));

  std::istringstream bare("x,x.txt\n");
  EXPECT_EQ(parse_manifest(bare).entries.size(), 1u);
}

TEST(Manifest, RejectsDuplicatesAndBadRows) {
  std::istringstream dup("a,1.txt\na,2.txt\n");
  EXPECT_THROW(parse_manifest(dup), ParseError);
  std::istringstream short_row("a\n");
  EXPECT_THROW(parse_manifest(short_row), ParseError);
}

TEST(Manifest, LoadChecksPaths) {
  testing::ScratchDir dir("manifest");
  testing::spit(dir.path() / "a.txt", "hello there");
  testing::spit(dir.path() / "m.csv", "text_id,path\na,a.txt\nb,missing.txt\n");
  EXPECT_THROW(load_manifest(dir.path() / "m.csv"), ParseError);
  const auto m = load_manifest(dir.path() / "m.csv", true);
  ASSERT_EQ(m.entries.size(), 2u);
  EXPECT_EQ(m.entries[0].byte_size, 11u);
}

TEST(RecordPath, EncodesUnsafeCharacters) {
  EXPECT_EQ(record_path("/out", "pg-98_a.b"), fs::path("/out/records/pg-98_a.b.json"));
  EXPECT_EQ(record_path("/out", "../x y"), fs::path("/out/records/%2E.%2Fx%20y.json"));
}

// Writes `count` synthetic texts with varied delimiter density and returns
// the manifest path.
fs::path write_corpus(const fs::path& dir, std::size_t count, bool with_broken = false) {
  testing::SplitMix64 rng(404);
  std::ostringstream manifest;
  manifest << "text_id,path\n";
  for (std::size_t i = 0; i < count; ++i) {
    const std::string id = "text" + std::to_string(100 + i);
    std::string body = "*** START OF THE PROJECT GUTENBERG EBOOK ***\n" +
                       testing::synthetic_text(rng, 3000 + 500 * (i % 4), 400, 0.5 + 0.3 * i,
                                               0.05 * static_cast<double>(i % 5)) +
                       "*** END OF THE PROJECT GUTENBERG EBOOK ***\n";
    testing::spit(dir / "texts" / (id + ".txt"), body);
    manifest << id << ",texts/" << id << ".txt\n";
  }
  if (with_broken) manifest << "broken,texts/does-not-exist.txt\n";
  testing::spit(dir / "manifest.csv", manifest.str());
  return dir / "manifest.csv";
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& item : fs::recursive_directory_iterator(dir)) {
    if (item.is_regular_file())
      files[fs::relative(item.path(), dir).string()] = testing::slurp(item.path());
  }
  return files;
}

CutoffSpec small_cutoffs() {
  CutoffSpec spec;
  spec.max = 300;
  spec.count = 25;
  return spec;
}

TEST(RunCorpus, SingleTextRefusesToScan) {
  testing::ScratchDir dir("single");
  const auto manifest = load_manifest(write_corpus(dir.path(), 1));
  RunOptions options;
  options.output_dir = dir.path() / "out";
  const auto summary = run_corpus(manifest, kConfig, small_cutoffs(), options);
  EXPECT_EQ(summary.records(), 1u);
  EXPECT_FALSE(summary.scan);
  EXPECT_NE(summary.scan_error.find("at least 3 records"), std::string::npos);
  EXPECT_EQ(summary.exit_code(), 0);
  EXPECT_TRUE(fs::exists(options.output_dir / "corpus.csv"));
}

TEST(RunCorpus, IsolatesUnreadableTexts) {
  testing::ScratchDir dir("isolate");
  const auto manifest = load_manifest(write_corpus(dir.path(), 9, true), true);
  RunOptions options;
  options.output_dir = dir.path() / "out";
  options.workers = 3;
  const auto summary = run_corpus(manifest, kConfig, small_cutoffs(), options);
  EXPECT_EQ(summary.analysed, 9u);
  ASSERT_EQ(summary.failures.size(), 1u);
  EXPECT_EQ(summary.failures[0].text_id, "broken");
  EXPECT_EQ(summary.exit_code(), 1);
  ASSERT_TRUE(summary.scan);
  const std::string errors = testing::slurp(options.output_dir / "errors.csv");
  EXPECT_NE(errors.find("broken,"), std::string::npos);
  EXPECT_EQ(load_records(options.output_dir / "records").size(), 9u);
}

TEST(RunCorpus, AllFailuresIsFatal) {
  testing::ScratchDir dir("fatal");
  testing::spit(dir.path() / "m.csv", "a,nope.txt\n");
  RunOptions options;
  options.output_dir = dir.path() / "out";
  const auto summary =
      run_corpus(load_manifest(dir.path() / "m.csv", true), kConfig, small_cutoffs(), options);
  EXPECT_EQ(summary.exit_code(), 2);
}

TEST(RunCorpus, DeterministicAcrossWorkerCounts) {
  testing::ScratchDir dir("determinism");
  const auto manifest = load_manifest(write_corpus(dir.path(), 8));
  RunOptions one;
  one.output_dir = dir.path() / "one";
  one.workers = 1;
  RunOptions many = one;
  many.output_dir = dir.path() / "many";
  many.workers = 4;
  run_corpus(manifest, kConfig, small_cutoffs(), one);
  run_corpus(manifest, kConfig, small_cutoffs(), many);
  EXPECT_EQ(snapshot(one.output_dir), snapshot(many.output_dir));
}

TEST(RunCorpus, ResumeMatchesUninterruptedRun) {
  testing::ScratchDir dir("resume");
  const auto manifest = load_manifest(write_corpus(dir.path(), 8));
  RunOptions full;
  full.output_dir = dir.path() / "full";
  full.workers = 2;
  run_corpus(manifest, kConfig, small_cutoffs(), full);

  RunOptions interrupted = full;
  interrupted.output_dir = dir.path() / "resumed";
  interrupted.stop_after = 3;
  const auto first = run_corpus(manifest, kConfig, small_cutoffs(), interrupted);
  EXPECT_TRUE(first.interrupted);
  EXPECT_EQ(first.exit_code(), 1);
  EXPECT_EQ(load_records(interrupted.output_dir / "records").size(), 3u);

  interrupted.stop_after.reset();
  const auto second = run_corpus(manifest, kConfig, small_cutoffs(), interrupted);
  EXPECT_EQ(second.resumed, 3u);
  EXPECT_EQ(second.analysed, 5u);
  EXPECT_EQ(second.exit_code(), 0);
  EXPECT_EQ(snapshot(full.output_dir), snapshot(interrupted.output_dir));
}

TEST(RunCorpus, ChangedCutoffsInvalidateResume) {
  testing::ScratchDir dir("stale");
  const auto manifest = load_manifest(write_corpus(dir.path(), 3));
  RunOptions options;
  options.output_dir = dir.path() / "out";
  run_corpus(manifest, kConfig, small_cutoffs(), options);
  auto other = small_cutoffs();
  other.count = 10;
  const auto summary = run_corpus(manifest, kConfig, other, options);
  EXPECT_EQ(summary.resumed, 0u);
  EXPECT_EQ(summary.analysed, 3u);
}

TEST(CutoffSpec, ExplicitListIsSortedAndDeduplicated) {
  CutoffSpec spec;
  spec.explicit_cutoffs = {50, 5, 50, 7};
  EXPECT_EQ(spec.resolve(), (std::vector<std::size_t>{5, 7, 50}));
  spec.explicit_cutoffs = {1, 4};
  EXPECT_THROW(spec.resolve(), RangeError);
}

}  // namespace
}  // namespace zipfdark
