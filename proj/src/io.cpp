#include "jlanczos/io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace jlanczos {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_for_write(const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_for_read(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open " + path.string());
  return in;
}

void finish_write(std::ofstream &out, const std::filesystem::path &path) {
  out.flush();
  if (!out)
    throw IoError("write to " + path.string() + " failed");
}

std::string lower(std::string s) {
  for (char &ch : s)
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

std::vector<std::string> split_csv_line(const std::string &line) {
  std::vector<std::string> fields;
  std::string field;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(field);
      field.clear();
    } else {
      field.push_back(ch);
    }
  }
  fields.push_back(field);
  return fields;
}

double parse_double(const std::string &s, std::size_t line_no) {
  // from_chars accepts subnormals, which stod rejects as out of range.
  double v = 0.0;
  const char *end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc{} || ptr != end)
    throw IoError("convergence CSV line " + std::to_string(line_no) + ": bad number '" + s + "'");
  return v;
}

std::uint64_t parse_unsigned(const std::string &s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size())
      throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    throw IoError("convergence CSV line " + std::to_string(line_no) + ": bad integer '" + s + "'");
  }
}

} // namespace

void write_matrix_market(const std::filesystem::path &path, const DenseComplexMatrix &a) {
  std::ofstream out = open_for_write(path);
  out << "%%MatrixMarket matrix array complex general\n";
  out << a.rows() << ' ' << a.cols() << '\n';
  for (std::size_t c = 0; c < a.cols(); ++c)
    for (std::size_t r = 0; r < a.rows(); ++r)
      out << format_double(a(r, c).real()) << ' ' << format_double(a(r, c).imag()) << '\n';
  finish_write(out, path);
}

DenseComplexMatrix read_matrix_market(std::istream &in) {
  std::string line;
  if (!std::getline(in, line))
    throw IoError("Matrix Market: empty input");
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
    throw IoError("Matrix Market: missing %%MatrixMarket matrix banner");
  if (lower(format) != "array")
    throw IoError("Matrix Market: only the array format is supported");
  const std::string fld = lower(field);
  if (fld != "complex" && fld != "real")
    throw IoError("Matrix Market: field must be real or complex");
  if (lower(symmetry) != "general")
    throw IoError("Matrix Market: only general symmetry is supported");

  while (std::getline(in, line))
    if (!line.empty() && line[0] != '%')
      break;
  std::size_t rows = 0, cols = 0;
  {
    std::istringstream dims(line);
    if (!(dims >> rows >> cols) || rows == 0 || cols == 0)
      throw IoError("Matrix Market: bad size line '" + line + "'");
  }
  DenseComplexMatrix a(rows, cols);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) {
      double re = 0.0, im = 0.0;
      if (!(in >> re))
        throw IoError("Matrix Market: too few entries");
      if (fld == "complex" && !(in >> im))
        throw IoError("Matrix Market: too few entries");
      a(r, c) = {re, im};
    }
  }
  if (!a.all_finite())
    throw IoError("Matrix Market: non-finite entry");
  return a;
}

DenseComplexMatrix read_matrix_market(const std::filesystem::path &path) {
  std::ifstream in = open_for_read(path);
  return read_matrix_market(in);
}

std::filesystem::path sidecar_path(const std::filesystem::path &matrix_path) {
  return std::filesystem::path(matrix_path.string() + ".meta.json");
}

void write_sidecar(const std::filesystem::path &matrix_path, const MatrixMeta &meta) {
  nlohmann::ordered_json j;
  j["source"] = meta.source;
  j["j_realization"] = meta.j_realization;
  if (meta.seed)
    j["seed"] = *meta.seed;
  if (!meta.planted.empty())
    j["planted"] = meta.planted;
  if (meta.colour_dim)
    j["colour_dim"] = *meta.colour_dim;
  if (meta.kappa)
    j["kappa"] = *meta.kappa;
  const auto path = sidecar_path(matrix_path);
  std::ofstream out = open_for_write(path);
  out << j.dump(2) << '\n';
  finish_write(out, path);
}

std::optional<MatrixMeta> read_sidecar(const std::filesystem::path &matrix_path) {
  const auto path = sidecar_path(matrix_path);
  if (!std::filesystem::exists(path))
    return std::nullopt;
  std::ifstream in = open_for_read(path);
  MatrixMeta meta;
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    meta.source = j.value("source", std::string{});
    meta.j_realization = j.value("j_realization", std::string{});
    if (j.contains("seed"))
      meta.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("planted"))
      meta.planted = j.at("planted").get<std::vector<double>>();
    if (j.contains("colour_dim"))
      meta.colour_dim = j.at("colour_dim").get<std::size_t>();
    if (j.contains("kappa"))
      meta.kappa = j.at("kappa").get<double>();
  } catch (const nlohmann::json::exception &e) {
    throw IoError("sidecar " + path.string() + ": " + e.what());
  }
  return meta;
}

void write_convergence_csv(std::ostream &out, const std::vector<ConvergenceRecord> &records) {
  out << kConvergenceCsvHeader << '\n';
  for (const auto &rec : records) {
    for (std::size_t i = 0; i < rec.targets.size(); ++i) {
      const TargetRecord &t = rec.targets[i];
      out << rec.restart << ',' << rec.cum_matvec << ',' << i + 1 << ',' << format_double(t.eig_estimate) << ','
          << format_double(t.res_estimate) << ',' << (t.res_true ? format_double(*t.res_true) : std::string{})
          << ',' << (t.converged ? 1 : 0) << '\n';
    }
  }
}

void emit_convergence_csv(const std::vector<ConvergenceRecord> &records, const std::filesystem::path &path) {
  if (records.empty())
    throw std::invalid_argument("emit_convergence_csv: no records");
  std::ofstream out = open_for_write(path);
  write_convergence_csv(out, records);
  finish_write(out, path);
}

std::vector<ConvergenceRecord> parse_convergence_csv(std::istream &in) {
  std::string line;
  if (!std::getline(in, line) || line != kConvergenceCsvHeader)
    throw IoError("convergence CSV: unexpected header");
  std::vector<ConvergenceRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty())
      continue;
    const auto f = split_csv_line(line);
    if (f.size() != 7)
      throw IoError("convergence CSV line " + std::to_string(line_no) + ": expected 7 fields");
    const auto restart = static_cast<int>(parse_unsigned(f[0], line_no));
    const auto cum = parse_unsigned(f[1], line_no);
    const auto index = parse_unsigned(f[2], line_no);
    if (records.empty() || records.back().restart != restart) {
      records.push_back({restart, cum, {}});
    } else if (records.back().cum_matvec != cum) {
      throw IoError("convergence CSV line " + std::to_string(line_no) + ": cum_matvec changes within a restart");
    }
    if (index != records.back().targets.size() + 1)
      throw IoError("convergence CSV line " + std::to_string(line_no) + ": target_index out of sequence");
    TargetRecord t;
    t.eig_estimate = parse_double(f[3], line_no);
    t.res_estimate = parse_double(f[4], line_no);
    if (!f[5].empty())
      t.res_true = parse_double(f[5], line_no);
    if (f[6] != "0" && f[6] != "1")
      throw IoError("convergence CSV line " + std::to_string(line_no) + ": converged must be 0 or 1");
    t.converged = f[6] == "1";
    records.back().targets.push_back(t);
  }
  return records;
}

std::vector<ConvergenceRecord> parse_convergence_csv(const std::filesystem::path &path) {
  std::ifstream in = open_for_read(path);
  return parse_convergence_csv(in);
}

} // namespace jlanczos
