#include "sigma/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sigma::io {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return os;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": cannot parse number '" + s + "'");
  return v;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Table read_table(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  Table t;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  t.header = split(line);
  std::size_t ln = 1;
  while (std::getline(is, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != t.header.size())
      throw std::runtime_error(path.string() + ":" + std::to_string(ln) + ": expected " +
                               std::to_string(t.header.size()) + " columns");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_double(c, path, ln));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Grid2D grid_for_rows(std::size_t rows, const std::filesystem::path& path) {
  const int n = int(std::lround(std::sqrt(double(rows))));
  if (std::size_t(n) * std::size_t(n) != rows)
    throw std::runtime_error(path.string() + ": row count " + std::to_string(rows) + " is not a square grid");
  return Grid2D(n);
}

void check_coords(const Table& t, const Grid2D& g, const std::filesystem::path& path) {
  for (std::size_t p = 0; p < g.size(); ++p) {
    const Point pt = g.point(p);
    if (std::abs(t.rows[p][0] - pt.x) > 1e-12 || std::abs(t.rows[p][1] - pt.y) > 1e-12)
      throw std::runtime_error(path.string() + ": rows are not in row-major grid order");
  }
}

}  // namespace

void write_map_csv(const std::filesystem::path& path, const MapField& phi) {
  auto os = open_out(path);
  const Grid2D& g = phi.grid();
  os << "x,y";
  for (int c = 0; c < phi.q(); ++c) os << ",c" << c;
  os << "\n";
  for (std::size_t p = 0; p < g.size(); ++p) {
    const Point pt = g.point(p);
    os << fmt(pt.x) << "," << fmt(pt.y);
    for (int c = 0; c < phi.q(); ++c) os << "," << fmt(phi(p, c));
    os << "\n";
  }
}

void write_spinor_csv(const std::filesystem::path& path, const SpinorField& psi) {
  auto os = open_out(path);
  const Grid2D& g = psi.grid();
  os << "x,y";
  for (int i = 1; i <= psi.q(); ++i)
    for (int s = 1; s <= 2; ++s) os << ",re_psi_" << i << "_" << s << ",im_psi_" << i << "_" << s;
  os << "\n";
  for (std::size_t p = 0; p < g.size(); ++p) {
    const Point pt = g.point(p);
    os << fmt(pt.x) << "," << fmt(pt.y);
    for (int i = 0; i < psi.q(); ++i)
      for (int s = 0; s < 2; ++s) os << "," << fmt(psi(p, i, s).real()) << "," << fmt(psi(p, i, s).imag());
    os << "\n";
  }
}

void write_scalar_csv(const std::filesystem::path& path, const ScalarField& f) {
  auto os = open_out(path);
  const Grid2D& g = f.grid();
  os << "x,y";
  for (int c = 0; c < f.ncomp(); ++c) os << ",c" << c;
  os << "\n";
  for (std::size_t p = 0; p < g.size(); ++p) {
    const Point pt = g.point(p);
    os << fmt(pt.x) << "," << fmt(pt.y);
    for (int c = 0; c < f.ncomp(); ++c) os << "," << fmt(f(p, c));
    os << "\n";
  }
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRecord>& trace) {
  auto os = open_out(path);
  os << "iter,energy,res_map,res_spinor,defect\n";
  for (const auto& r : trace)
    os << r.iter << "," << fmt(r.energy) << "," << fmt(r.res_map) << "," << fmt(r.res_spinor) << "," << fmt(r.defect)
       << "\n";
}

void write_table_csv(const std::filesystem::path& path, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows) {
  auto os = open_out(path);
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << fmt(row[c]);
    os << "\n";
  }
}

RealField read_map_values_csv(const std::filesystem::path& path) {
  const Table t = read_table(path);
  if (t.header.size() < 5 || t.header[0] != "x" || t.header[1] != "y")
    throw std::runtime_error(path.string() + ": expected header x,y,c0,c1,c2,...");
  for (std::size_t c = 2; c < t.header.size(); ++c)
    if (t.header[c] != "c" + std::to_string(c - 2)) throw std::runtime_error(path.string() + ": bad column name");
  const Grid2D g = grid_for_rows(t.rows.size(), path);
  check_coords(t, g, path);
  const int q = int(t.header.size()) - 2;
  RealField v(g, q);
  for (std::size_t p = 0; p < g.size(); ++p)
    for (int c = 0; c < q; ++c) v(p, c) = t.rows[p][std::size_t(c) + 2];
  return v;
}

ComplexField read_spinor_values_csv(const std::filesystem::path& path, const Grid2D& expected) {
  const Table t = read_table(path);
  if (t.header.size() < 2 || t.header[0] != "x" || t.header[1] != "y" || (t.header.size() - 2) % 4 != 0)
    throw std::runtime_error(path.string() + ": expected header x,y,re_psi_i_s,im_psi_i_s,...");
  const Grid2D g = grid_for_rows(t.rows.size(), path);
  if (!(g == expected)) throw std::runtime_error(path.string() + ": spinor grid does not match map grid");
  check_coords(t, g, path);
  const int nc = int(t.header.size() - 2) / 2;
  ComplexField v(g, nc);
  for (std::size_t p = 0; p < g.size(); ++p)
    for (int c = 0; c < nc; ++c) v(p, c) = {t.rows[p][2 + 2 * std::size_t(c)], t.rows[p][3 + 2 * std::size_t(c)]};
  return v;
}

}  // namespace sigma::io
