#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cotrans/errors.hpp"
#include "cotrans/harness.hpp"

namespace cotrans {

namespace {

constexpr const char* kSchemaLine = "# schema=1";

/// Visits every column of a row in header order; `f(name, value_ref)`.
/// Integral fields are staged through doubles.
template <typename F>
void for_each_column(SimLogRow& row, F&& f) {
  double mode = static_cast<double>(row.mode);
  double valid = row.estimate_valid ? 1.0 : 0.0;
  f("t", row.t);
  f("mode", mode);
  f("estimate_valid", valid);
  const char* axes[3] = {"x", "y", "z"};
  const char* angles[3] = {"roll", "pitch", "yaw"};
  for (int b = 0; b < 3; ++b) {
    const std::string id = std::to_string(b);
    for (int k = 0; k < 3; ++k) f("p" + id + "_" + axes[k], row.p[b][k]);
    for (int k = 0; k < 3; ++k) f("v" + id + "_" + axes[k], row.v[b][k]);
    for (int k = 0; k < 3; ++k) f(std::string(angles[k]) + id, row.euler[b][k]);
  }
  f("theta0", row.theta0);
  for (int i = 0; i < 2; ++i) {
    const std::string id = std::to_string(i + 1);
    for (int k = 0; k < 3; ++k) f("t" + id + "_" + axes[k], row.tension[i][k]);
  }
  for (int i = 0; i < 2; ++i) {
    const std::string id = std::to_string(i + 1);
    for (int k = 0; k < 3; ++k) f("d" + id + "_hat_" + axes[k], row.d_hat[i][k]);
  }
  f("df1_hat", row.thrust_uncertainty_hat[0]);
  f("df2_hat", row.thrust_uncertainty_hat[1]);
  f("t1z_hat", row.vertical_tension_hat[0]);
  f("t2z_hat", row.vertical_tension_hat[1]);
  f("f1c", row.thrust_cmd[0]);
  f("f2c", row.thrust_cmd[1]);
  f("df1", row.thrust_uncertainty[0]);
  f("df2", row.thrust_uncertainty[1]);
  f("conservation_residual", row.conservation_residual);
  row.mode = static_cast<ControlMode>(static_cast<int>(mode));
  row.estimate_valid = valid != 0.0;
}

}  // namespace

std::vector<std::string> log_columns() {
  std::vector<std::string> names;
  SimLogRow row;
  for_each_column(row, [&](const std::string& name, double&) { names.push_back(name); });
  return names;
}

void write_log(const std::vector<SimLogRow>& rows, const std::filesystem::path& path, LogFormat format,
               int decimation) {
  if (format != LogFormat::kCsv) throw IoError("unsupported log format");
  if (decimation < 1) throw ValidationError("decimation must be at least 1");

  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");

  out << kSchemaLine << '\n';
  const auto names = log_columns();
  for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
  out << '\n';

  char buf[32];
  for (std::size_t r = 0; r < rows.size(); r += static_cast<std::size_t>(decimation)) {
    SimLogRow row = rows[r];
    bool first = true;
    for_each_column(row, [&](const std::string&, double& v) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      if (!first) out << ',';
      out << buf;
      first = false;
    });
    out << '\n';
  }
  if (!out) throw IoError("write to " + path.string() + " failed");
}

std::vector<SimLogRow> read_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line) || line != kSchemaLine) throw ParseError("line 1: missing '# schema=1'");
  if (!std::getline(in, line)) throw ParseError("line 2: missing header");
  const auto names = log_columns();
  {
    std::string expected;
    for (std::size_t i = 0; i < names.size(); ++i) expected += (i ? "," : "") + names[i];
    if (line != expected) throw ParseError("line 2: header does not match schema 1");
  }

  std::vector<SimLogRow> rows;
  for (int n = 3; std::getline(in, line); ++n) {
    if (line.empty()) continue;
    SimLogRow row;
    const char* cur = line.data();
    const char* end = line.data() + line.size();
    for_each_column(row, [&](const std::string& name, double& v) {
      const auto [ptr, ec] = std::from_chars(cur, end, v);
      if (ec != std::errc() || (ptr != end && *ptr != ','))
        throw ParseError("line " + std::to_string(n) + ": bad value in column " + name);
      cur = ptr == end ? end : ptr + 1;
    });
    if (cur != end) throw ParseError("line " + std::to_string(n) + ": too many columns");
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cotrans
