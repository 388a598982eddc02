#include "bbhta/instance_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "text_format.hpp"

namespace bbhta {

namespace fs = std::filesystem;

namespace {

std::ofstream open_for_write(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_for_read(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

// Next line that is neither blank nor a '#' comment.
bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto t = detail::trim(line);
    if (!t.empty() && t.front() != '#') return true;
  }
  return false;
}

void write_model(const fs::path& path, const InstanceModel& model) {
  auto out = open_for_write(path);
  out << "p = " << detail::format_double(model.p) << '\n'
      << "p10 = " << detail::format_double(model.p10) << '\n'
      << "p01 = " << detail::format_double(model.p01) << '\n'
      << "sigma_theta = " << detail::format_double(model.sigma_theta) << '\n'
      << "sigma_n = " << detail::format_double(model.sigma_n) << '\n'
      << "snr_db = " << detail::format_double(model.snr_db) << '\n'
      << "seed = " << model.seed << '\n'
      << "trial_index = " << model.trial_index << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

InstanceModel read_model(const fs::path& path) {
  auto in = open_for_read(path);
  std::map<std::string, std::string, std::less<>> kv;
  std::string line;
  while (next_content_line(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError(path.string() + ": expected 'key = value', got '" + line + "'");
    kv[std::string(detail::trim(std::string_view(line).substr(0, eq)))] =
        std::string(detail::trim(std::string_view(line).substr(eq + 1)));
  }
  const std::string ctx = path.string();
  auto get = [&](const char* key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw IoError(ctx + ": missing key '" + key + "'");
    return it->second;
  };
  InstanceModel model;
  model.p = detail::parse_double(get("p"), ctx);
  model.p10 = detail::parse_double(get("p10"), ctx);
  model.p01 = detail::parse_double(get("p01"), ctx);
  model.sigma_theta = detail::parse_double(get("sigma_theta"), ctx);
  model.sigma_n = detail::parse_double(get("sigma_n"), ctx);
  model.snr_db = detail::parse_double(get("snr_db"), ctx);
  model.seed = detail::parse_u64(get("seed"), ctx);
  model.trial_index = detail::parse_u64(get("trial_index"), ctx);
  return model;
}

}  // namespace

void write_matrix(const fs::path& path, const Matrix& matrix) {
  auto out = open_for_write(path);
  out << matrix.rows() << ' ' << matrix.cols() << '\n';
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j) out << ' ';
      out << detail::format_double(matrix(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Matrix read_matrix(const fs::path& path) {
  auto in = open_for_read(path);
  const std::string ctx = path.string();
  std::string line;
  if (!next_content_line(in, line)) throw IoError(ctx + ": missing dimensions header");
  std::istringstream header(line);
  std::string rows_text, cols_text, extra;
  if (!(header >> rows_text >> cols_text) || (header >> extra)) {
    throw IoError(ctx + ": dimensions header must be '<rows> <cols>'");
  }
  const auto rows = static_cast<Eigen::Index>(detail::parse_u64(rows_text, ctx));
  const auto cols = static_cast<Eigen::Index>(detail::parse_u64(cols_text, ctx));

  Matrix matrix(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!next_content_line(in, line)) throw IoError(ctx + ": expected " + std::to_string(rows) + " rows");
    std::istringstream row(line);
    std::string token;
    Eigen::Index j = 0;
    while (row >> token) {
      if (j >= cols) throw IoError(ctx + ": row " + std::to_string(i) + " has too many values");
      try {
        matrix(i, j++) = detail::parse_double(token, ctx);
      } catch (const InvalidArgument& e) {
        throw IoError(e.what());
      }
    }
    if (j != cols) throw IoError(ctx + ": row " + std::to_string(i) + " has " + std::to_string(j) + " values");
  }
  if (next_content_line(in, line)) throw IoError(ctx + ": trailing data after " + std::to_string(rows) + " rows");
  return matrix;
}

void write_vector(const fs::path& path, const Vector& vector) { write_matrix(path, vector); }

Vector read_vector(const fs::path& path) {
  const Matrix m = read_matrix(path);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  throw IoError(path.string() + ": expected a vector, got a " + std::to_string(m.rows()) + "x" +
                std::to_string(m.cols()) + " matrix");
}

void save_instance(const fs::path& dir, const Instance& instance) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
  write_matrix(dir / "phi.txt", instance.phi);
  write_vector(dir / "y.txt", instance.y);
  if (instance.w_gen) write_vector(dir / "w_gen.txt", *instance.w_gen);
  if (instance.s_gen) {
    Vector s(static_cast<Eigen::Index>(instance.s_gen->size()));
    for (std::size_t i = 0; i < instance.s_gen->size(); ++i) s[static_cast<Eigen::Index>(i)] = (*instance.s_gen)[i];
    write_vector(dir / "s_gen.txt", s);
  }
  if (instance.model) write_model(dir / "model.txt", *instance.model);
}

Instance load_instance(const fs::path& dir) {
  Instance instance;
  instance.phi = read_matrix(dir / "phi.txt");
  instance.y = read_vector(dir / "y.txt");
  if (instance.phi.rows() != instance.y.size()) {
    throw IoError(dir.string() + ": phi has " + std::to_string(instance.phi.rows()) + " rows but y has " +
                  std::to_string(instance.y.size()) + " entries");
  }
  if (fs::exists(dir / "w_gen.txt")) {
    instance.w_gen = read_vector(dir / "w_gen.txt");
    if (instance.w_gen->size() != instance.phi.cols()) throw IoError(dir.string() + ": w_gen length differs from M");
  }
  if (fs::exists(dir / "s_gen.txt")) {
    const Vector s = read_vector(dir / "s_gen.txt");
    if (s.size() != instance.phi.cols()) throw IoError(dir.string() + ": s_gen length differs from M");
    Support support(static_cast<std::size_t>(s.size()));
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s[i] != 0.0 && s[i] != 1.0) throw IoError(dir.string() + ": s_gen entries must be 0 or 1");
      support[static_cast<std::size_t>(i)] = s[i] != 0.0;
    }
    instance.s_gen = std::move(support);
  }
  if (fs::exists(dir / "model.txt")) instance.model = read_model(dir / "model.txt");
  return instance;
}

}  // namespace bbhta
