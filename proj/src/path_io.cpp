#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

#include "orey/errors.hpp"
#include "orey/pathgen.hpp"

namespace orey {

namespace {

[[noreturn]] void format_error(int line, const std::string& what) {
  std::ostringstream msg;
  msg << "path CSV line " << line << ": " << what;
  throw FormatError(msg.str());
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t first = 0;
  while (first < s.size() && (s[first] == ' ' || s[first] == '\t')) ++first;
  return s.substr(first);
}

}  // namespace

void export_path(const GridPath& path, std::ostream& out) {
  out << "k,t,x\n";
  out << std::setprecision(17);
  for (int k = 0; k <= path.n; ++k) {
    out << k << ',' << path.time(k) << ',' << path.values[k] << '\n';
  }
}

void export_path(const GridPath& path, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw FormatError("cannot open '" + file.string() + "' for writing");
  export_path(path, out);
  if (!out) throw FormatError("write to '" + file.string() + "' failed");
}

GridPath import_path(std::istream& in) {
  std::string line;
  int line_no = 1;
  if (!std::getline(in, line) || trim(line) != "k,t,x") {
    format_error(line_no, "expected header 'k,t,x'");
  }

  std::vector<double> times;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string k_text, t_text, x_text, extra;
    if (!std::getline(row, k_text, ',') || !std::getline(row, t_text, ',') ||
        !std::getline(row, x_text, ',') || std::getline(row, extra, ',')) {
      format_error(line_no, "expected three comma-separated fields");
    }
    long long k = 0;
    double t = 0.0, x = 0.0;
    try {
      std::size_t used = 0;
      k = std::stoll(k_text, &used);
      if (used != k_text.size()) throw std::invalid_argument("k");
      t = std::stod(t_text, &used);
      if (used != t_text.size()) throw std::invalid_argument("t");
      x = std::stod(x_text, &used);
      if (used != x_text.size()) throw std::invalid_argument("x");
    } catch (const std::exception&) {
      format_error(line_no, "unparsable number");
    }
    if (k != static_cast<long long>(values.size())) {
      format_error(line_no, "row index " + std::to_string(k) + " out of sequence (expected " +
                                std::to_string(values.size()) + ")");
    }
    if (!times.empty() && !(t > times.back())) format_error(line_no, "t is not strictly increasing");
    times.push_back(t);
    values.push_back(x);
  }

  if (values.size() < 5) throw FormatError("path CSV needs at least 5 rows (n >= 4)");
  if (values.front() != 0.0) throw FormatError("path CSV must start with x = 0 at k = 0");
  if (times.front() != 0.0) throw FormatError("path CSV must start at t = 0");

  const int n = static_cast<int>(values.size()) - 1;
  const double horizon = times.back();
  for (int k = 0; k <= n; ++k) {
    const double expected = horizon * k / n;
    if (std::fabs(times[k] - expected) > 1e-9 * horizon) {
      std::ostringstream msg;
      msg << "nonuniform grid: t[" << k << "] = " << times[k] << ", expected " << expected;
      throw FormatError(msg.str());
    }
  }
  return GridPath{horizon, n, std::move(values), 0, Generator::Imported};
}

GridPath import_path(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw FormatError("cannot open path file '" + file.string() + "'");
  return import_path(in);
}

}  // namespace orey
