#include "ptfourwell/series_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ptfourwell/errors.hpp"

namespace ptfw {

namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  out += buf;
}

}  // namespace

const std::vector<std::string>& series_columns(bool physical) {
  static const std::vector<std::string> base = {"t",   "n0",  "n1",  "n2",    "n3", "j01",
                                                "j12", "j23", "E0",  "E3",    "J01", "J23",
                                                "Gamma", "r1", "r2", "r3"};
  static const std::vector<std::string> with_trap = [] {
    auto cols = base;
    for (const char* extra : {"V0", "V3", "delta0", "delta3"}) cols.emplace_back(extra);
    return cols;
  }();
  return physical ? with_trap : base;
}

std::string format_series(const four_mode::TrajectoryRecord& record,
                          const std::vector<physical::TrapSolution>* trap) {
  if (trap && trap->size() != record.rows.size()) {
    throw InputError("trap series length does not match the record");
  }
  std::string out;
  const auto& cols = series_columns(trap != nullptr);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  out += '\n';
  for (std::size_t k = 0; k < record.rows.size(); ++k) {
    const auto& r = record.rows[k];
    const double values[] = {r.t,          r.obs.n[0],   r.obs.n[1],   r.obs.n[2],
                              r.obs.n[3],   r.obs.j01,    r.obs.j12,    r.obs.j23,
                              r.E0,         r.E3,         r.J01,        r.J23,
                              r.gamma,      r.residuals.r1, r.residuals.r2, r.residuals.r3};
    bool first = true;
    for (double v : values) {
      if (!first) out += ',';
      first = false;
      append_number(out, v);
    }
    if (trap) {
      const auto& s = (*trap)[k];
      for (double v : {s.V0, s.V3, s.delta0, s.delta3}) {
        out += ',';
        append_number(out, v);
      }
    }
    out += '\n';
  }
  return out;
}

void write_series(const four_mode::TrajectoryRecord& record, const std::filesystem::path& path,
                  const std::vector<physical::TrapSolution>* trap) {
  const std::string text = format_series(record, trap);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw InputError("write to '" + path.string() + "' failed");
}

std::size_t SeriesTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw InputError("series has no column '" + name + "'");
}

SeriesTable parse_series(const std::string& text) {
  SeriesTable table;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) return table;
  {
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) table.header.push_back(cell);
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw InputError("series line " + std::to_string(line_no) + ": bad value '" + cell + "'");
      }
    }
    if (row.size() != table.header.size()) {
      throw InputError("series line " + std::to_string(line_no) + ": expected " +
                       std::to_string(table.header.size()) + " values");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

SeriesTable read_series(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_series(buf.str());
}

}  // namespace ptfw
