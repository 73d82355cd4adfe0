#include "abreu/csv.hpp"

#include "abreu/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace abreu {

void write_field_csv(const std::filesystem::path& path, const ScalarField& field) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  std::fprintf(out, "x,y,value\n");
  const Grid& grid = field.grid();
  for (std::size_t n = 0; n < field.size(); ++n)
    std::fprintf(out, "%.17g,%.17g,%.17g\n", grid.node(n).x(), grid.node(n).y(), field[n]);
  if (field.has_boundary())
    for (std::size_t k = 0; k < grid.hit_count(); ++k)
      std::fprintf(out, "%.17g,%.17g,%.17g\n", grid.hits()[k].point.x(), grid.hits()[k].point.y(), field.boundary(k));
  const bool failed = std::ferror(out) != 0;
  std::fclose(out);
  if (failed) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

ScalarField read_field_csv(const std::filesystem::path& path, GridPtr grid) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  const double h = grid->spacing();
  std::vector<double> values(grid->size(), std::nan(""));
  std::vector<double> boundary(grid->hit_count(), std::nan(""));

  // Hits are keyed by coordinates rounded far below the spacing.
  auto key = [h](double x, double y) {
    const double q = h * 1e-7;
    return std::pair<long long, long long>(std::llround(x / q), std::llround(y / q));
  };
  // Several arms can land on the same boundary point.
  std::map<std::pair<long long, long long>, std::vector<std::size_t>> hit_index;
  for (std::size_t k = 0; k < grid->hit_count(); ++k)
    hit_index[key(grid->hits()[k].point.x(), grid->hits()[k].point.y())].push_back(k);

  std::string line;
  std::getline(in, line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    double x, y, v;
    char c1, c2;
    std::istringstream row(line);
    if (!(row >> x >> c1 >> y >> c2 >> v) || c1 != ',' || c2 != ',')
      throw Error(ErrorKind::Io, path.string() + ":" + std::to_string(line_no) + ": malformed row");
    const long i = std::lround(x / h), j = std::lround(y / h);
    const int node = (std::abs(x - i * h) < 1e-9 * h && std::abs(y - j * h) < 1e-9 * h)
                         ? grid->index_of(static_cast<int>(i), static_cast<int>(j))
                         : -1;
    if (node >= 0) {
      values[static_cast<std::size_t>(node)] = v;
    } else if (auto it = hit_index.find(key(x, y)); it != hit_index.end()) {
      for (std::size_t k : it->second) boundary[k] = v;
    }
  }
  for (double v : values)
    if (std::isnan(v)) throw Error(ErrorKind::IncompleteData, path.string() + " does not cover every grid node");
  std::size_t found = 0;
  for (double v : boundary) found += std::isnan(v) ? 0 : 1;
  const bool any_boundary = found > 0, all_boundary = found == boundary.size();
  if (any_boundary && !all_boundary)
    throw Error(ErrorKind::IncompleteData, path.string() + " covers only part of the boundary hits");
  if (!any_boundary) boundary.clear();
  return ScalarField(std::move(grid), std::move(values), std::move(boundary));
}

}  // namespace abreu
