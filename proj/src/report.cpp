#include "bbhta/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "text_format.hpp"

namespace bbhta {

namespace fs = std::filesystem;
using detail::format_double;

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Round step of roughly span/target for axis ticks.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double nice = norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0;
  return nice * mag;
}

std::string tick_label(double v) {
  std::ostringstream out;
  out << std::setprecision(6) << (std::abs(v) < 1e-12 ? 0.0 : v);
  return out.str();
}

}  // namespace

std::string records_to_csv(std::span<const TrialRecord> records) {
  std::string out = std::string(kRecordsHeader) + '\n';
  for (const auto& r : records) {
    out += r.experiment + ',' + r.solver + ',' + format_double(r.grid_value) + ',' + std::to_string(r.trial_index) +
           ',' + format_double(r.nmse_db) + ',' + std::to_string(r.iterations) + ',' + format_double(r.support_f1) +
           ',' + format_double(r.wall_time_ms) + '\n';
  }
  return out;
}

std::vector<TrialRecord> parse_records_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("records CSV is empty");
  if (detail::trim(line) != kRecordsHeader) throw InvalidArgument("records CSV has an unexpected header: " + line);

  std::vector<TrialRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = split(detail::trim(line), ',');
    const std::string ctx = "records CSV line " + std::to_string(line_no);
    if (fields.size() != 8) throw InvalidArgument(ctx + ": expected 8 fields");
    TrialRecord r;
    r.experiment = std::string(fields[0]);
    r.solver = std::string(fields[1]);
    r.grid_value = detail::parse_double(fields[2], ctx);
    r.trial_index = detail::parse_u64(fields[3], ctx);
    r.nmse_db = detail::parse_double(fields[4], ctx);
    r.iterations = static_cast<int>(detail::parse_u64(fields[5], ctx));
    r.support_f1 = detail::parse_double(fields[6], ctx);
    r.wall_time_ms = detail::parse_double(fields[7], ctx);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<TrialRecord> read_records_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_records_csv(buf.str());
  } catch (const InvalidArgument& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::string summary_to_csv(std::span<const SummaryRow> summary) {
  std::string out = std::string(kSummaryHeader) + '\n';
  for (const auto& r : summary) {
    out += r.experiment + ',' + r.solver + ',' + format_double(r.grid_value) + ',' + std::to_string(r.trials) + ',' +
           format_double(r.mean_nmse_db) + ',' + format_double(r.stderr_nmse_db) + ',' +
           format_double(r.mean_iterations) + ',' + format_double(r.mean_support_f1) + ',' +
           std::to_string(r.failures) + ',' + std::to_string(r.exact_recoveries) + '\n';
  }
  return out;
}

std::string render_svg(const std::string& experiment, std::span<const SummaryRow> summary, const std::string& x_label) {
  std::vector<std::string> solvers;
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& r : summary) {
    if (r.experiment != experiment || !std::isfinite(r.mean_nmse_db)) continue;
    if (std::find(solvers.begin(), solvers.end(), r.solver) == solvers.end()) solvers.push_back(r.solver);
    x_lo = std::min(x_lo, r.grid_value);
    x_hi = std::max(x_hi, r.grid_value);
    y_lo = std::min(y_lo, r.mean_nmse_db);
    y_hi = std::max(y_hi, r.mean_nmse_db);
  }
  if (solvers.empty()) throw InvalidArgument("render_svg: no finite rows for experiment '" + experiment + "'");
  if (x_hi == x_lo) {
    x_lo -= 1.0;
    x_hi += 1.0;
  }
  const double y_step = nice_step(std::max(y_hi - y_lo, 1.0), 6);
  y_lo = std::floor(y_lo / y_step) * y_step;
  y_hi = std::ceil(y_hi / y_step) * y_step;
  if (y_hi == y_lo) y_hi = y_lo + y_step;

  constexpr double width = 640, height = 420, left = 70, right = 160, top = 40, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) { return top + (y_hi - y) / (y_hi - y_lo) * plot_h; };

  static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream svg;
  svg << std::setprecision(6);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << xml_escape(experiment) << "</text>\n";

  for (double y = y_lo; y <= y_hi + y_step * 1e-9; y += y_step) {
    svg << "<line x1=\"" << left << "\" y1=\"" << py(y) << "\" x2=\"" << left + plot_w << "\" y2=\"" << py(y)
        << "\" stroke=\"#e0e0e0\"/>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">" << tick_label(y)
        << "</text>\n";
  }
  const double x_step = nice_step(x_hi - x_lo, 6);
  for (double x = std::ceil(x_lo / x_step) * x_step; x <= x_hi + x_step * 1e-9; x += x_step) {
    svg << "<line x1=\"" << px(x) << "\" y1=\"" << top + plot_h << "\" x2=\"" << px(x) << "\" y2=\""
        << top + plot_h + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << px(x) << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">" << tick_label(x)
        << "</text>\n";
  }
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">"
      << xml_escape(x_label) << "</text>\n";
  svg << "<text x=\"18\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << top + plot_h / 2 << ")\">NMSE (dB)</text>\n";

  for (std::size_t k = 0; k < solvers.size(); ++k) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : summary) {
      if (r.experiment == experiment && r.solver == solvers[k] && std::isfinite(r.mean_nmse_db)) {
        pts.emplace_back(r.grid_value, r.mean_nmse_db);
      }
    }
    std::sort(pts.begin(), pts.end());
    const char* colour = palette[k % std::size(palette)];
    svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) svg << (i ? " " : "") << px(pts[i].first) << ',' << py(pts[i].second);
    svg << "\"/>\n";
    for (const auto& [x, y] : pts) {
      svg << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
    }
    const double ly = top + 14 + 18.0 * static_cast<double>(k);
    svg << "<line x1=\"" << left + plot_w + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + plot_w + 36
        << "\" y2=\"" << ly - 4 << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << left + plot_w + 42 << "\" y=\"" << ly << "\">" << xml_escape(solvers[k]) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_reports(std::span<const SummaryRow> summary, std::span<const TrialRecord> records, const fs::path& out_dir,
                  const std::map<std::string, std::string>& x_labels) {
  if (records.empty() || summary.empty()) throw InvalidArgument("emit_reports: nothing to write");

  std::vector<std::string> experiments;
  for (const auto& r : summary) {
    if (std::find(experiments.begin(), experiments.end(), r.experiment) == experiments.end()) {
      experiments.push_back(r.experiment);
    }
  }
  // Render everything before touching the filesystem.
  std::vector<std::pair<fs::path, std::string>> files;
  files.emplace_back(out_dir / "records.csv", records_to_csv(records));
  files.emplace_back(out_dir / "summary.csv", summary_to_csv(summary));
  for (const auto& name : experiments) {
    const auto it = x_labels.find(name);
    files.emplace_back(out_dir / (name + ".svg"), render_svg(name, summary, it == x_labels.end() ? "grid value" : it->second));
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create directory '" + out_dir.string() + "': " + ec.message());
  for (const auto& [path, text] : files) write_text(path, text);
}

}  // namespace bbhta
