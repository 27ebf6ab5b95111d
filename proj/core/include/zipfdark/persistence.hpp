#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "zipfdark/corpus_experiment.hpp"

namespace zipfdark {

/// Stable JSON (fixed key order, no timestamps) so reruns are byte-identical.
std::string record_to_json(const TextRecord& record);
TextRecord record_from_json(std::string_view json);

std::string scan_to_json(const ScanResult& scan);
ScanResult scan_from_json(std::string_view json);

/// `text_id,R,N,n1,r_cut,k_zm,k_s,offset`, one row per record and cutoff;
/// failed fits leave their fields empty.
void write_corpus_csv(std::ostream& out, std::span<const TextRecord> records);

struct ReportOptions {
  double scatter_bin_width = 0.5;
  double histogram_bin_width = 0.25;
};

/// Plot data for the correlation figure, one CSV per panel plus a summary:
///   fig2_correlation.csv       cutoff,texts,rho,p,bonferroni_significant,excluded_reason
///   fig2_scatter_points.csv    text_id,k_zm,n1_minus_1
///   fig2_scatter_density.csv   n1_minus_1,k_zm_bin_left,k_zm_bin_right,count
///   fig2_offsets.csv           cutoff,offset_median,offset_p45,offset_p55,ks_median,ks_q1,ks_q3
///   fig2_histograms.csv        series,bin_left,bin_right,count
///   fig2_summary.json
/// Returns the files written.
std::vector<std::filesystem::path> write_scan_report(const std::filesystem::path& dir,
                                                     const ScanResult& scan,
                                                     const ReportOptions& options = {});

/// Rank translation data: every integrated entry with its word rank, if any.
/// Columns `n,r,kind,freq,surface`.
void write_rank_translation_csv(std::ostream& out, const RankFreqDist& integrated,
                                const RankMap& map);

std::string read_file(const std::filesystem::path& path);
/// Writes via a temporary sibling and rename so readers never see partial files.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace zipfdark
