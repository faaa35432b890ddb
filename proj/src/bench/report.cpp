#include "osga/bench/report.hpp"

#include "osga/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace osga::bench {

std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_trials_csv(std::ostream& out, const std::vector<TrialResult>& trials) {
  out << kTrialsHeader << '\n';
  for (const auto& t : trials) {
    out << t.method << ',' << t.s << ',' << t.dictionary << ',' << t.target << ',' << t.trial << ','
        << format_number(t.rmse) << ',' << t.sparsity << ',' << format_number(t.train_seconds) << ','
        << format_number(t.hyperparam) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryHeader << '\n';
  for (const auto& r : rows) {
    out << r.method << ',' << r.s << ',' << r.dictionary << ',' << r.target << ',' << r.trials << ','
        << format_number(r.rmse_mean) << ',' << format_number(r.rmse_std) << ',' << format_number(r.sparsity_mean)
        << ',' << format_number(r.sparsity_std) << ',' << format_number(r.seconds_mean) << ','
        << format_number(r.seconds_std) << ',' << format_number(r.hyperparam_mean) << '\n';
  }
}

void write_paths_csv(std::ostream& out, const std::vector<PathSummary>& paths) {
  out << "method,s,dictionary,atoms,rmse_mean\n";
  for (const auto& p : paths) {
    for (std::size_t i = 0; i < p.atoms.size(); ++i) {
      out << p.method << ',' << p.s << ',' << p.dictionary << ',' << p.atoms[i] << ','
          << format_number(p.rmse_mean[i]) << '\n';
    }
  }
}

void write_verification_csv(std::ostream& out, const VerificationReport& report) {
  out << "check,id,s,coherence,iterations,min_slack,passed\n";
  for (const auto& r : report.results) {
    out << r.check << ',' << r.id << ',' << r.step_size << ',' << format_number(r.coherence) << ','
        << r.iterations << ',' << format_number(r.min_slack) << ',' << (r.passed ? 1 : 0) << '\n';
  }
}

std::vector<TrialResult> read_trials_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTrialsHeader) throw IoError("trials CSV has an unexpected header");
  std::vector<TrialResult> trials;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 9) throw IoError("trials CSV line " + std::to_string(line_number) + ": expected 9 fields");
    try {
      TrialResult t;
      t.method = fields[0];
      t.s = std::stoul(fields[1]);
      t.dictionary = fields[2];
      t.target = fields[3];
      t.trial = std::stoul(fields[4]);
      t.rmse = std::stod(fields[5]);
      t.sparsity = std::stoul(fields[6]);
      t.train_seconds = std::stod(fields[7]);
      t.hyperparam = std::stod(fields[8]);
      trials.push_back(std::move(t));
    } catch (const std::exception&) {
      throw IoError("trials CSV line " + std::to_string(line_number) + ": malformed number");
    }
  }
  return trials;
}

namespace {

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("failed writing " + path.string());
}

template <typename Writer>
std::string to_text(Writer&& writer) {
  std::ostringstream out;
  writer(out);
  return out.str();
}

}  // namespace

std::string render_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                              const std::vector<ChartSeries>& series) {
  constexpr double width = 640, height = 420, left = 80, right = 150, top = 40, bottom = 60;
  double x_min = INFINITY, x_max = -INFINITY, y_min = INFINITY, y_max = -INFINITY;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double spread = i < s.spread.size() ? s.spread[i] : 0.0;
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      y_min = std::min(y_min, s.mean[i] - spread);
      y_max = std::max(y_max, s.mean[i] + spread);
    }
  }
  if (!(x_max > x_min)) { x_min -= 1; x_max += 1; }
  if (!(y_max > y_min)) { y_min -= 1; y_max += 1; }
  const double pad = 0.05 * (y_max - y_min);
  y_min -= pad;
  y_max += pad;
  const double plot_w = width - left - right, plot_h = height - top - bottom;
  auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return top + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
      << "</text>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = x_min + (x_max - x_min) * t / 4.0;
    const double yv = y_min + (y_max - y_min) * t / 4.0;
    char label[32];
    std::snprintf(label, sizeof label, "%.4g", xv);
    svg << "<text x=\"" << px(xv) << "\" y=\"" << top + plot_h + 16 << "\" text-anchor=\"middle\">" << label
        << "</text>\n";
    std::snprintf(label, sizeof label, "%.4g", yv);
    svg << "<text x=\"" << left - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << label << "</text>\n";
  }
  svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 16 << "\" text-anchor=\"middle\">"
      << escape(x_label) << "</text>\n";
  svg << "<text transform=\"translate(18," << top + plot_h / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) svg << px(s.x[i]) << ',' << py(s.mean[i]) << ' ';
    svg << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      svg << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.mean[i]) << "\" r=\"2.5\" fill=\"" << color
          << "\"/>\n";
      if (i < s.spread.size() && s.spread[i] > 0.0) {
        svg << "<line x1=\"" << px(s.x[i]) << "\" x2=\"" << px(s.x[i]) << "\" y1=\"" << py(s.mean[i] - s.spread[i])
            << "\" y2=\"" << py(s.mean[i] + s.spread[i]) << "\" stroke=\"" << color << "\"/>\n";
      }
    }
    const double ly = top + 16 + 18.0 * static_cast<double>(k);
    svg << "<line x1=\"" << width - right + 10 << "\" x2=\"" << width - right + 30 << "\" y1=\"" << ly
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << width - right + 36 << "\" y=\"" << ly + 4 << "\">" << escape(s.name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::filesystem::path> emit_outputs(const SweepTable& table, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create output directory " + directory.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const std::string& content) {
    const auto path = directory / name;
    write_file(path, content);
    written.push_back(path);
  };
  emit("trials.csv", to_text([&](std::ostream& o) { write_trials_csv(o, table.trials); }));
  emit("summary.csv", to_text([&](std::ostream& o) { write_summary_csv(o, table.summary); }));

  // OSGA rows grouped per (dictionary, target) curve, ordered by s.
  std::map<std::string, std::vector<const SummaryRow*>> curves;
  for (const auto& row : table.summary) {
    if (row.s > 0) curves[row.dictionary + " " + row.target].push_back(&row);
  }
  if (!curves.empty()) {
    auto chart = [&](const std::string& file, const std::string& title, const std::string& y_label,
                     auto mean_of, auto std_of) {
      std::vector<ChartSeries> series;
      for (const auto& [name, rows] : curves) {
        ChartSeries s{name, {}, {}, {}};
        for (const SummaryRow* r : rows) {
          s.x.push_back(static_cast<double>(r->s));
          s.mean.push_back(mean_of(*r));
          s.spread.push_back(std_of(*r));
        }
        series.push_back(std::move(s));
      }
      emit(file, render_line_chart(title, "step size s", y_label, series));
    };
    chart("rmse_vs_s.svg", "Test RMSE as a function of step size", "RMSE",
          [](const SummaryRow& r) { return r.rmse_mean; }, [](const SummaryRow& r) { return r.rmse_std; });
    chart("sparsity_vs_s.svg", "Coefficient sparsity as a function of step size", "sparsity",
          [](const SummaryRow& r) { return r.sparsity_mean; }, [](const SummaryRow& r) { return r.sparsity_std; });
    chart("time_vs_s.svg", "Training time as a function of step size", "seconds",
          [](const SummaryRow& r) { return r.seconds_mean; }, [](const SummaryRow& r) { return r.seconds_std; });
  }

  if (!table.paths.empty()) {
    emit("rmse_vs_sparsity.csv", to_text([&](std::ostream& o) { write_paths_csv(o, table.paths); }));
    std::vector<ChartSeries> series;
    for (const auto& p : table.paths) {
      ChartSeries s{p.method + " " + p.dictionary, {}, p.rmse_mean, {}};
      for (std::size_t a : p.atoms) s.x.push_back(static_cast<double>(a));
      series.push_back(std::move(s));
    }
    emit("rmse_vs_sparsity.svg", render_line_chart("Test RMSE as a function of sparsity", "atoms", "RMSE", series));
  }
  return written;
}

std::vector<std::filesystem::path> emit_verification(const VerificationReport& report,
                                                     const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create output directory " + directory.string() + ": " + ec.message());
  const auto path = directory / "verification.csv";
  write_file(path, to_text([&](std::ostream& o) { write_verification_csv(o, report); }));
  return {path};
}

}  // namespace osga::bench
