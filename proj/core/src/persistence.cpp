#include "zipfdark/persistence.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "zipfdark/csv.hpp"
#include "zipfdark/errors.hpp"

namespace zipfdark {

using ojson = nlohmann::ordered_json;

namespace {

ojson fit_json(const CutoffFit& f) {
  ojson j;
  if (f.ok()) {
    j["r_cut"] = f.fit->r_cut;
    j["k_hat"] = f.fit->k_hat;
    j["sse"] = f.fit->sse;
  } else {
    j["error"] = f.reason;
  }
  return j;
}

CutoffFit fit_from_json(std::size_t requested, const ojson& j) {
  CutoffFit f;
  f.r_cut = requested;
  if (j.contains("error")) {
    f.reason = j.at("error").get<std::string>();
    return f;
  }
  FitResult fit;
  fit.r_cut = j.at("r_cut").get<std::size_t>();
  fit.k_hat = j.at("k_hat").get<double>();
  fit.sse = j.at("sse").get<double>();
  f.fit = fit;
  return f;
}

template <typename T>
ojson optional_json(const std::optional<T>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

template <typename T>
std::optional<T> optional_from(const ojson& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

std::string optional_csv(const std::optional<double>& v) {
  return v ? csv::format_double(*v) : std::string();
}

}  // namespace

std::string record_to_json(const TextRecord& record) {
  ojson j;
  j["text_id"] = record.text_id;
  j["R"] = record.word_types;
  j["N"] = record.integrated_types;
  j["n1"] = record.n1;
  j["partial"] = record.partial();
  j["flags"] = record.flags;
  auto& fits = j["fits"] = ojson::array();
  for (std::size_t i = 0; i < record.fits_zm.size(); ++i) {
    ojson entry;
    entry["r_cut"] = record.fits_zm[i].r_cut;
    entry["zm"] = fit_json(record.fits_zm[i]);
    entry["s"] = fit_json(record.fits_s[i]);
    fits.push_back(std::move(entry));
  }
  return j.dump(1) + "\n";
}

TextRecord record_from_json(std::string_view json) {
  try {
    const ojson j = ojson::parse(json);
    TextRecord record;
    record.text_id = j.at("text_id").get<std::string>();
    record.word_types = j.at("R").get<std::size_t>();
    record.integrated_types = j.at("N").get<std::size_t>();
    record.n1 = j.at("n1").get<std::size_t>();
    record.flags = j.at("flags").get<std::vector<std::string>>();
    for (const auto& entry : j.at("fits")) {
      const auto requested = entry.at("r_cut").get<std::size_t>();
      record.fits_zm.push_back(fit_from_json(requested, entry.at("zm")));
      record.fits_s.push_back(fit_from_json(requested, entry.at("s")));
    }
    return record;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed record JSON: ") + e.what());
  }
}

std::string scan_to_json(const ScanResult& scan) {
  ojson j;
  j["rho_max"] = optional_json(scan.rho_max);
  j["r_cut_star"] = optional_json(scan.r_cut_star);
  j["comparisons"] = scan.comparisons;
  j["significance_level"] = scan.significance_level;
  j["percentile_method"] = scan.percentile_method;
  auto& rows = j["cutoffs"] = ojson::array();
  for (const auto& c : scan.cutoffs) {
    ojson row;
    row["cutoff"] = c.cutoff;
    row["texts"] = c.texts;
    row["rho"] = c.correlation ? ojson(c.correlation->rho) : ojson(nullptr);
    row["p"] = c.correlation ? ojson(c.correlation->p_value) : ojson(nullptr);
    row["bonferroni_significant"] = c.bonferroni;
    row["excluded_reason"] = c.excluded_reason;
    row["offset_median"] = optional_json(c.offset_median);
    row["offset_p45"] = optional_json(c.offset_p45);
    row["offset_p55"] = optional_json(c.offset_p55);
    row["ks_texts"] = c.ks_texts;
    row["ks_median"] = optional_json(c.ks_median);
    row["ks_q1"] = optional_json(c.ks_q1);
    row["ks_q3"] = optional_json(c.ks_q3);
    rows.push_back(std::move(row));
  }
  auto& points = j["star_points"] = ojson::array();
  for (const auto& p : scan.star_points) {
    ojson point;
    point["text_id"] = p.text_id;
    point["k_zm"] = p.k_zm;
    point["n1_minus_1"] = p.n1_minus_1;
    point["offset"] = p.offset;
    point["k_s"] = optional_json(p.k_s);
    points.push_back(std::move(point));
  }
  return j.dump(1) + "\n";
}

ScanResult scan_from_json(std::string_view json) {
  try {
    const ojson j = ojson::parse(json);
    ScanResult scan;
    scan.rho_max = optional_from<double>(j, "rho_max");
    scan.r_cut_star = optional_from<std::size_t>(j, "r_cut_star");
    scan.comparisons = j.at("comparisons").get<std::size_t>();
    scan.significance_level = j.at("significance_level").get<double>();
    scan.percentile_method = j.at("percentile_method").get<std::string>();
    for (const auto& row : j.at("cutoffs")) {
      CutoffScan c;
      c.cutoff = row.at("cutoff").get<std::size_t>();
      c.texts = row.at("texts").get<std::size_t>();
      if (!row.at("rho").is_null())
        c.correlation = Correlation{row.at("rho").get<double>(), row.at("p").get<double>()};
      c.bonferroni = row.at("bonferroni_significant").get<bool>();
      c.excluded_reason = row.at("excluded_reason").get<std::string>();
      c.offset_median = optional_from<double>(row, "offset_median");
      c.offset_p45 = optional_from<double>(row, "offset_p45");
      c.offset_p55 = optional_from<double>(row, "offset_p55");
      c.ks_texts = row.at("ks_texts").get<std::size_t>();
      c.ks_median = optional_from<double>(row, "ks_median");
      c.ks_q1 = optional_from<double>(row, "ks_q1");
      c.ks_q3 = optional_from<double>(row, "ks_q3");
      scan.cutoffs.push_back(std::move(c));
    }
    for (const auto& point : j.at("star_points")) {
      StarPoint p;
      p.text_id = point.at("text_id").get<std::string>();
      p.k_zm = point.at("k_zm").get<double>();
      p.n1_minus_1 = point.at("n1_minus_1").get<double>();
      p.offset = point.at("offset").get<double>();
      p.k_s = optional_from<double>(point, "k_s");
      scan.star_points.push_back(std::move(p));
    }
    return scan;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed scan JSON: ") + e.what());
  }
}

void write_corpus_csv(std::ostream& out, std::span<const TextRecord> records) {
  out << "text_id,R,N,n1,r_cut,k_zm,k_s,offset\n";
  for (const auto& r : records) {
    const double n1_minus_1 = static_cast<double>(r.n1) - 1.0;
    for (std::size_t i = 0; i < r.fits_zm.size(); ++i) {
      const auto& zm = r.fits_zm[i];
      const auto& s = r.fits_s[i];
      out << csv::quote(r.text_id) << ',' << r.word_types << ',' << r.integrated_types << ','
          << r.n1 << ',' << zm.r_cut << ',';
      if (zm.ok()) out << csv::format_double(zm.fit->k_hat);
      out << ',';
      if (s.ok()) out << csv::format_double(s.fit->k_hat);
      out << ',';
      if (zm.ok()) out << csv::format_double(zm.fit->k_hat - n1_minus_1);
      out << '\n';
    }
  }
}

namespace {

double bin_floor(double value, double width) { return std::floor(value / width) * width; }

}  // namespace

std::vector<std::filesystem::path> write_scan_report(const std::filesystem::path& dir,
                                                     const ScanResult& scan,
                                                     const ReportOptions& options) {
  if (!(options.scatter_bin_width > 0.0) || !(options.histogram_bin_width > 0.0))
    throw DomainError("bin widths must be positive");
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto emit = [&](const char* name, const std::string& contents) {
    const auto path = dir / name;
    write_file_atomic(path, contents);
    written.push_back(path);
  };

  {
    std::ostringstream out;
    out << "cutoff,texts,rho,p,bonferroni_significant,excluded_reason\n";
    for (const auto& c : scan.cutoffs) {
      out << c.cutoff << ',' << c.texts << ',';
      if (c.correlation)
        out << csv::format_double(c.correlation->rho) << ','
            << csv::format_double(c.correlation->p_value);
      else
        out << ',';
      out << ',' << (c.bonferroni ? 1 : 0) << ',' << csv::quote(c.excluded_reason) << '\n';
    }
    emit("fig2_correlation.csv", out.str());
  }
  {
    std::ostringstream out;
    out << "text_id,k_zm,n1_minus_1\n";
    for (const auto& p : scan.star_points)
      out << csv::quote(p.text_id) << ',' << csv::format_double(p.k_zm) << ','
          << csv::format_double(p.n1_minus_1) << '\n';
    emit("fig2_scatter_points.csv", out.str());
  }
  {
    const double w = options.scatter_bin_width;
    std::map<std::pair<double, double>, std::size_t> bins;
    for (const auto& p : scan.star_points) ++bins[{p.n1_minus_1, bin_floor(p.k_zm, w)}];
    std::ostringstream out;
    out << "n1_minus_1,k_zm_bin_left,k_zm_bin_right,count\n";
    for (const auto& [key, count] : bins)
      out << csv::format_double(key.first) << ',' << csv::format_double(key.second) << ','
          << csv::format_double(key.second + w) << ',' << count << '\n';
    emit("fig2_scatter_density.csv", out.str());
  }
  {
    std::ostringstream out;
    out << "cutoff,offset_median,offset_p45,offset_p55,ks_median,ks_q1,ks_q3\n";
    for (const auto& c : scan.cutoffs)
      out << c.cutoff << ',' << optional_csv(c.offset_median) << ',' << optional_csv(c.offset_p45)
          << ',' << optional_csv(c.offset_p55) << ',' << optional_csv(c.ks_median) << ','
          << optional_csv(c.ks_q1) << ',' << optional_csv(c.ks_q3) << '\n';
    emit("fig2_offsets.csv", out.str());
  }
  double mean_offset = std::nan("");
  {
    const double w = options.histogram_bin_width;
    std::map<double, std::size_t> offset_bins;
    std::map<double, std::size_t> ks_bins;
    double offset_total = 0.0;
    for (const auto& p : scan.star_points) {
      ++offset_bins[bin_floor(p.offset, w)];
      offset_total += p.offset;
      if (p.k_s) ++ks_bins[bin_floor(*p.k_s, w)];
    }
    if (!scan.star_points.empty())
      mean_offset = offset_total / static_cast<double>(scan.star_points.size());
    std::ostringstream out;
    out << "series,bin_left,bin_right,count\n";
    for (const auto& [left, count] : offset_bins)
      out << "offset," << csv::format_double(left) << ',' << csv::format_double(left + w) << ','
          << count << '\n';
    for (const auto& [left, count] : ks_bins)
      out << "k_s," << csv::format_double(left) << ',' << csv::format_double(left + w) << ','
          << count << '\n';
    emit("fig2_histograms.csv", out.str());
  }
  {
    ojson j;
    j["rho_max"] = optional_json(scan.rho_max);
    j["r_cut_star"] = optional_json(scan.r_cut_star);
    j["comparisons"] = scan.comparisons;
    j["significance_level"] = scan.significance_level;
    j["bonferroni_threshold"] =
        scan.comparisons > 0 ? ojson(scan.significance_level / static_cast<double>(scan.comparisons))
                             : ojson(nullptr);
    j["texts_at_star"] = scan.star_points.size();
    j["mean_offset_at_star"] = std::isnan(mean_offset) ? ojson(nullptr) : ojson(mean_offset);
    j["percentile_method"] = scan.percentile_method;
    emit("fig2_summary.json", j.dump(1) + "\n");
  }
  return written;
}

void write_rank_translation_csv(std::ostream& out, const RankFreqDist& integrated,
                                const RankMap& map) {
  std::vector<std::size_t> word_rank_of(integrated.size() + 1, 0);
  for (std::size_t r = 1; r <= map.size(); ++r) word_rank_of[map.n_of(r)] = r;
  out << "n,r,kind,freq,surface\n";
  for (std::size_t n = 1; n <= integrated.size(); ++n) {
    const auto& e = integrated.at_rank(n);
    out << n << ',';
    if (word_rank_of[n] != 0) out << word_rank_of[n];
    out << ',' << to_string(e.kind) << ',' << e.freq << ','
        << csv::quote(csv::escape_surface(e.surface)) << '\n';
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error("cannot read " + path.string());
  return buffer.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace zipfdark
