#include "spod/core.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace spod {

SpatialGrid::SpatialGrid(int n, double length) : n_(n), length_(length), h_(0.0) {
  if (n < 3) throw InvalidArgument("spatial grid needs at least 3 nodes, got " + std::to_string(n));
  if (!(length > 0.0) || !std::isfinite(length)) throw InvalidArgument("domain length must be positive");
  h_ = length / n;
}

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
  if (times_.size() < 2) throw InvalidArgument("time grid needs at least two nodes");
  if (times_.front() != 0.0) throw InvalidArgument("time grid must start at t = 0");
  for (std::size_t k = 1; k < times_.size(); ++k) {
    if (!(times_[k] > times_[k - 1]) || !std::isfinite(times_[k]))
      throw InvalidArgument("time grid must be strictly increasing and finite");
  }
  const std::size_t m = times_.size() - 1;
  weights_.assign(times_.size(), 0.0);
  weights_[0] = 0.5 * (times_[1] - times_[0]);
  weights_[m] = 0.5 * (times_[m] - times_[m - 1]);
  for (std::size_t k = 1; k < m; ++k) weights_[k] = 0.5 * (times_[k + 1] - times_[k - 1]);
}

TimeGrid TimeGrid::uniform(int m, double tfinal) {
  if (m < 1) throw InvalidArgument("time grid needs m >= 1 intervals");
  if (!(tfinal > 0.0) || !std::isfinite(tfinal)) throw InvalidArgument("final time must be positive");
  std::vector<double> t(m + 1);
  for (int k = 0; k <= m; ++k) t[k] = k * tfinal / m;
  TimeGrid g(std::move(t));
  // Interior weights exactly T/m, end weights T/(2m).
  const double tau = tfinal / m;
  for (int k = 0; k <= m; ++k) g.weights_[k] = (k == 0 || k == m) ? 0.5 * tau : tau;
  return g;
}

bool TimeGrid::is_uniform() const {
  const int mm = m();
  const double T = tfinal();
  for (int k = 0; k <= mm; ++k) {
    if (std::abs(times_[k] - k * T / mm) > 1e-12 * T) return false;
  }
  return true;
}

TimeGrid make_uniform_time_grid(int m, double tfinal) { return TimeGrid::uniform(m, tfinal); }

SnapshotSet::SnapshotSet(SpatialGrid g, TimeGrid tg, Matrix v)
    : grid(std::move(g)), tgrid(std::move(tg)), values(std::move(v)) {
  if (values.rows() != tgrid.size() || values.cols() != grid.n())
    throw DimensionError("snapshot matrix is " + std::to_string(values.rows()) + "x" +
                         std::to_string(values.cols()) + ", expected " +
                         std::to_string(tgrid.size()) + "x" + std::to_string(grid.n()));
  if (!values.allFinite()) throw NumericalError("snapshot values must be finite");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool parse_double(const std::string& token, double& out) {
  const char* first = token.data();
  const char* last = first + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

namespace {

bool parse_int(const std::string& token, int& out) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) tokens.push_back(tok);
  return tokens;
}

}  // namespace

void save_snapshots(const SnapshotSet& s, std::ostream& out) {
  if (!s.tgrid.is_uniform()) throw InvalidArgument("spod-v1 stores uniform time grids only");
  out << "# spod-v1\n";
  out << "nt " << s.nt() << " nx " << s.nx() << " length " << format_double(s.grid.length())
      << " tfinal " << format_double(s.tgrid.tfinal()) << "\n";
  for (Eigen::Index k = 0; k < s.values.rows(); ++k) {
    for (Eigen::Index l = 0; l < s.values.cols(); ++l) {
      if (l) out << ' ';
      out << format_double(s.values(k, l));
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing snapshot data");
}

void save_snapshots(const SnapshotSet& s, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  save_snapshots(s, f);
}

SnapshotSet load_snapshots(std::istream& in) {
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) throw ParseError(1, "empty input, expected '# spod-v1'");
  ++lineno;
  if (line != "# spod-v1") throw ParseError(lineno, "bad magic '" + line + "', expected '# spod-v1'");

  if (!std::getline(in, line)) throw ParseError(2, "missing header line");
  ++lineno;
  const auto hdr = split_ws(line);
  int nt = 0, nx = 0;
  double length = 0.0, tfinal = 0.0;
  if (hdr.size() != 8 || hdr[0] != "nt" || hdr[2] != "nx" || hdr[4] != "length" || hdr[6] != "tfinal" ||
      !parse_int(hdr[1], nt) || !parse_int(hdr[3], nx) || !parse_double(hdr[5], length) ||
      !parse_double(hdr[7], tfinal))
    throw ParseError(lineno, "malformed header, expected 'nt <int> nx <int> length <real> tfinal <real>'");
  if (nt < 2 || nx < 3 || !(length > 0) || !(tfinal > 0))
    throw ParseError(lineno, "header values out of range");

  Matrix values(nt, nx);
  for (int k = 0; k < nt; ++k) {
    if (!std::getline(in, line)) throw ParseError(lineno + 1, "expected " + std::to_string(nt) + " data rows, got " + std::to_string(k));
    ++lineno;
    const auto tok = split_ws(line);
    if (static_cast<int>(tok.size()) != nx)
      throw ParseError(lineno, "data row " + std::to_string(k + 1) + " has " + std::to_string(tok.size()) +
                                   " values, expected " + std::to_string(nx));
    for (int l = 0; l < nx; ++l) {
      if (!parse_double(tok[l], values(k, l)))
        throw ParseError(lineno, "data row " + std::to_string(k + 1) + ": invalid or non-finite value '" + tok[l] + "'");
    }
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (!split_ws(line).empty()) throw ParseError(lineno, "unexpected trailing data");
  }
  return SnapshotSet(SpatialGrid(nx, length), TimeGrid::uniform(nt - 1, tfinal), std::move(values));
}

SnapshotSet load_snapshots(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  return load_snapshots(f);
}

double l2_norm_squared(const SnapshotSet& z) {
  double acc = 0.0;
  for (int k = 0; k < z.nt(); ++k) acc += z.tgrid.w(k) * z.grid.h() * z.values.row(k).squaredNorm();
  return acc;
}

double relative_l2_error(const SnapshotSet& z, const SnapshotSet& zhat) {
  if (!(z.grid == zhat.grid) || !(z.tgrid == zhat.tgrid))
    throw DimensionError("relative_l2_error: grids differ");
  const double den = l2_norm_squared(z);
  if (den == 0.0) throw NumericalError("relative_l2_error: reference field is identically zero");
  double num = 0.0;
  for (int k = 0; k < z.nt(); ++k)
    num += z.tgrid.w(k) * z.grid.h() * (z.values.row(k) - zhat.values.row(k)).squaredNorm();
  return std::sqrt(num) / std::sqrt(den);
}

void write_heatmap_csv(const SnapshotSet& s, std::ostream& out) {
  out << "t,x,value\n";
  for (int k = 0; k < s.nt(); ++k)
    for (int l = 0; l < s.nx(); ++l)
      out << format_double(s.tgrid.t(k)) << ',' << format_double(s.grid.node(l)) << ','
          << format_double(s.values(k, l)) << '\n';
}

}  // namespace spod
