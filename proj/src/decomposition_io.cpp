#include "spod/decomposition_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace spod {

namespace {

void write_row(std::ostream& out, const double* v, Eigen::Index count) {
  for (Eigen::Index i = 0; i < count; ++i) {
    if (i) out << ' ';
    out << format_double(v[i]);
  }
  out << '\n';
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::string next(const char* what) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return line;
    }
    throw ParseError(line_ + 1, std::string("unexpected end of input, expected ") + what);
  }
  bool at_end() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return false;
    }
    return true;
  }
  int line() const { return line_; }

 private:
  std::istream& in_;
  int line_ = 0;
};

std::vector<double> parse_values(const std::string& text, int lineno) {
  std::istringstream ss(text);
  std::vector<double> out;
  std::string tok;
  while (ss >> tok) {
    double v;
    if (!parse_double(tok, v)) throw ParseError(lineno, "invalid or non-finite value '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

std::string expect_key(const std::string& line, const std::string& key, int lineno) {
  if (line.rfind(key + "=", 0) != 0) throw ParseError(lineno, "expected '" + key + "=...'");
  return line.substr(key.size() + 1);
}

int parse_count(const std::string& s, int lineno) {
  const auto v = parse_values(s, lineno);
  if (v.size() != 1 || v[0] < 0 || v[0] != static_cast<int>(v[0])) throw ParseError(lineno, "expected a count");
  return static_cast<int>(v[0]);
}

}  // namespace

void save_decomposition(const Decomposition& d, std::ostream& out, const std::string& method) {
  d.validate();
  if (!d.tgrid.is_uniform()) throw InvalidArgument("spod-decomp-v1 stores uniform time grids only");
  if (method.empty() || method.find_first_of(" \t\n") != std::string::npos)
    throw InvalidArgument("method label must be a single token");
  out << "# spod-decomp-v1\n";
  out << "nt " << d.tgrid.size() << " nx " << d.grid.n() << " length " << format_double(d.grid.length())
      << " tfinal " << format_double(d.tgrid.tfinal()) << " frames " << d.frames.size() << " method " << method
      << '\n';
  for (const auto& f : d.frames) {
    out << "[frame]\n";
    out << "path_kind=" << (f.path.is_nodal() ? "nodal" : "polynomial") << '\n';
    out << "path=";
    write_row(out, f.path.parameters().data(), f.path.dof());
    out << "modes=" << f.rank() << '\n';
    for (int i = 0; i < f.rank(); ++i) write_row(out, f.modes.row(i).data(), f.modes.cols());
    out << "coeffs=" << f.coeffs.rows() << '\n';
    for (Eigen::Index k = 0; k < f.coeffs.rows(); ++k) write_row(out, f.coeffs.row(k).data(), f.coeffs.cols());
  }
  if (!out) throw IoError("failed writing decomposition");
}

void save_decomposition(const Decomposition& d, const std::string& path, const std::string& method) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  save_decomposition(d, f, method);
}

DecompositionFile load_decomposition(std::istream& in) {
  LineReader rd(in);
  if (rd.next("'# spod-decomp-v1'") != "# spod-decomp-v1") throw ParseError(rd.line(), "bad magic, expected '# spod-decomp-v1'");

  std::istringstream hdr(rd.next("header"));
  const int hline = rd.line();
  std::string k1, k2, k3, k4, k5, k6, s_nt, s_nx, s_len, s_tf, s_fr, method;
  hdr >> k1 >> s_nt >> k2 >> s_nx >> k3 >> s_len >> k4 >> s_tf >> k5 >> s_fr >> k6 >> method;
  double len = 0, tf = 0;
  if (!hdr || k1 != "nt" || k2 != "nx" || k3 != "length" || k4 != "tfinal" || k5 != "frames" || k6 != "method" ||
      !parse_double(s_len, len) || !parse_double(s_tf, tf))
    throw ParseError(hline, "malformed header");
  const int nt = parse_count(s_nt, hline);
  const int nx = parse_count(s_nx, hline);
  const int nframes = parse_count(s_fr, hline);
  if (nt < 2 || nx < 3 || nframes < 1 || !(len > 0) || !(tf > 0)) throw ParseError(hline, "header values out of range");

  Decomposition d{{}, SpatialGrid(nx, len), TimeGrid::uniform(nt - 1, tf)};
  // read a line first, then record its number: argument order is unspecified
  auto keyed = [&rd](const char* key) {
    std::string line = rd.next(key);
    return expect_key(line, key, rd.line());
  };
  for (int f = 0; f < nframes; ++f) {
    if (rd.next("[frame]") != "[frame]") throw ParseError(rd.line(), "expected '[frame]'");
    const std::string kind = keyed("path_kind");
    if (kind != "nodal" && kind != "polynomial") throw ParseError(rd.line(), "unknown path_kind '" + kind + "'");
    const std::string ptext = keyed("path");
    const int pline = rd.line();
    const auto pv = parse_values(ptext, pline);
    Vector params = Eigen::Map<const Vector>(pv.data(), static_cast<Eigen::Index>(pv.size()));
    if (kind == "nodal" && static_cast<int>(pv.size()) != nt)
      throw ParseError(pline, "nodal path needs " + std::to_string(nt) + " values");
    if (kind == "polynomial" && (pv.empty() || pv.size() > PathRepr::kMaxDegree + 1))
      throw ParseError(pline, "polynomial path degree out of range");

    const std::string rtext = keyed("modes");
    const int r = parse_count(rtext, rd.line());
    if (r < 1) throw ParseError(rd.line(), "frame needs at least one mode");
    Matrix modes(r, nx);
    for (int i = 0; i < r; ++i) {
      const std::string line = rd.next("mode row");
      const auto row = parse_values(line, rd.line());
      if (static_cast<int>(row.size()) != nx)
        throw ParseError(rd.line(), "mode row " + std::to_string(i + 1) + " has " + std::to_string(row.size()) +
                                        " values, expected " + std::to_string(nx));
      for (int l = 0; l < nx; ++l) modes(i, l) = row[l];
    }
    const std::string ctext = keyed("coeffs");
    const int rows = parse_count(ctext, rd.line());
    if (rows != nt) throw ParseError(rd.line(), "coeffs block must have " + std::to_string(nt) + " rows");
    Matrix coeffs(nt, r);
    for (int k = 0; k < nt; ++k) {
      const std::string line = rd.next("coefficient row");
      const auto row = parse_values(line, rd.line());
      if (static_cast<int>(row.size()) != r)
        throw ParseError(rd.line(), "coefficient row " + std::to_string(k + 1) + " has " + std::to_string(row.size()) +
                                        " values, expected " + std::to_string(r));
      for (int i = 0; i < r; ++i) coeffs(k, i) = row[i];
    }
    PathRepr path = kind == "nodal" ? PathRepr::nodal(std::move(params)) : PathRepr::polynomial(std::move(params));
    d.frames.push_back(Frame{std::move(path), std::move(modes), std::move(coeffs)});
  }
  if (!rd.at_end()) throw ParseError(rd.line(), "unexpected trailing data");
  d.validate();
  return {std::move(d), method};
}

DecompositionFile load_decomposition(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  return load_decomposition(f);
}

}  // namespace spod
