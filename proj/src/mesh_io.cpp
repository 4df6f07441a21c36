#include "rbfmorph/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "rbfmorph/errors.hpp"

namespace rbfmorph {

namespace {

struct Token {
  std::string_view text;
  std::size_t column = 0;  // 1-based
};

// Reads logical lines: comments stripped, blank lines skipped.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Returns false at end of stream.
  bool next() {
    while (std::getline(in_, buffer_)) {
      ++line_;
      if (!buffer_.empty() && buffer_.back() == '\r') buffer_.pop_back();
      if (const auto hash = buffer_.find('#'); hash != std::string::npos) buffer_.resize(hash);
      tokens_.clear();
      std::size_t i = 0;
      while (i < buffer_.size()) {
        while (i < buffer_.size() && std::isspace(static_cast<unsigned char>(buffer_[i]))) ++i;
        const std::size_t start = i;
        while (i < buffer_.size() && !std::isspace(static_cast<unsigned char>(buffer_[i]))) ++i;
        if (i > start) tokens_.push_back({std::string_view(buffer_).substr(start, i - start), start + 1});
      }
      if (!tokens_.empty()) return true;
    }
    return false;
  }

  std::size_t line() const { return line_; }
  const std::vector<Token>& tokens() const { return tokens_; }

  [[noreturn]] void fail(const std::string& msg, std::size_t column = 0) const {
    throw ParseError(std::max<std::size_t>(line_, 1), column, msg);
  }

  void expect_count(std::size_t n, const char* what) const {
    if (tokens_.size() != n) {
      const std::size_t col = tokens_.size() > n ? tokens_[n].column : 0;
      fail(std::string(what) + ": expected " + std::to_string(n) + " fields, found " +
               std::to_string(tokens_.size()),
           col);
    }
  }

  double real(std::size_t k) const {
    const Token& t = tokens_[k];
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
      fail("expected a real number, found '" + std::string(t.text) + "'", t.column);
    }
    return v;
  }

  std::size_t index(std::size_t k) const {
    const Token& t = tokens_[k];
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
      fail("expected a nonnegative integer, found '" + std::string(t.text) + "'", t.column);
    }
    return v;
  }

  void keyword(std::string_view kw) const {
    if (tokens_.empty() || tokens_[0].text != kw) {
      fail("expected '" + std::string(kw) + "'", tokens_.empty() ? 0 : tokens_[0].column);
    }
  }

 private:
  std::istream& in_;
  std::string buffer_;
  std::size_t line_ = 0;
  std::vector<Token> tokens_;
};

std::size_t section_header(LineReader& r, std::string_view kw) {
  if (!r.next()) r.fail("unexpected end of file, expected '" + std::string(kw) + "'");
  r.keyword(kw);
  r.expect_count(2, kw.data());
  return r.index(1);
}

void require_line(LineReader& r, const char* what) {
  if (!r.next()) r.fail(std::string("unexpected end of file in ") + what);
}

}  // namespace

std::string format_real(double v) {
  if (v == 0.0) v = 0.0;
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

Mesh read_mesh(std::istream& in) {
  LineReader r(in);
  Mesh mesh;
  if (!r.next()) r.fail("empty mesh file");
  r.keyword("MDK1");
  r.expect_count(1, "MDK1 header");

  const std::size_t nv = section_header(r, "NODES");
  mesh.nodes.reserve(nv);
  for (std::size_t k = 0; k < nv; ++k) {
    require_line(r, "NODES");
    r.expect_count(3, "node");
    const Point3 p{r.real(0), r.real(1), r.real(2)};
    if (!is_finite(p)) throw InvariantViolation(r.line(), 0, "node coordinates must be finite");
    mesh.nodes.push_back(p);
  }

  const std::size_t nb = section_header(r, "BOUNDARY");
  mesh.boundary.reserve(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    require_line(r, "BOUNDARY");
    r.expect_count(1, "boundary entry");
    const std::size_t id = r.index(0);
    if (id >= nv) {
      throw InvariantViolation(r.line(), r.tokens()[0].column,
                               "boundary index " + std::to_string(id) + " >= node count " + std::to_string(nv));
    }
    mesh.boundary.push_back(id);
  }
  std::sort(mesh.boundary.begin(), mesh.boundary.end());
  if (const auto dup = std::adjacent_find(mesh.boundary.begin(), mesh.boundary.end());
      dup != mesh.boundary.end()) {
    throw InvariantViolation(r.line(), 0, "boundary index " + std::to_string(*dup) + " listed twice");
  }

  if (!r.next()) return mesh;
  r.keyword("CELLS");
  r.expect_count(2, "CELLS");
  const std::size_t ne = r.index(1);
  mesh.cells.reserve(ne);
  for (std::size_t k = 0; k < ne; ++k) {
    require_line(r, "CELLS");
    const std::size_t arity = r.index(0);
    if (arity != 3 && arity != 4) {
      throw InvariantViolation(r.line(), r.tokens()[0].column, "cell arity must be 3 or 4");
    }
    r.expect_count(arity + 1, "cell");
    std::vector<std::size_t> cell(arity);
    for (std::size_t v = 0; v < arity; ++v) {
      cell[v] = r.index(v + 1);
      if (cell[v] >= nv) {
        throw InvariantViolation(r.line(), r.tokens()[v + 1].column,
                                 "cell node " + std::to_string(cell[v]) + " >= node count " + std::to_string(nv));
      }
    }
    mesh.cells.push_back(std::move(cell));
  }
  if (r.next()) r.fail("unexpected content after CELLS section", r.tokens()[0].column);
  return mesh;
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << "MDK1\nNODES " << mesh.nodes.size() << '\n';
  for (const Point3& p : mesh.nodes) {
    out << format_real(p.x) << ' ' << format_real(p.y) << ' ' << format_real(p.z) << '\n';
  }
  out << "BOUNDARY " << mesh.boundary.size() << '\n';
  for (std::size_t id : mesh.boundary) out << id << '\n';
  out << "CELLS " << mesh.cells.size() << '\n';
  for (const auto& cell : mesh.cells) {
    out << cell.size();
    for (std::size_t v : cell) out << ' ' << v;
    out << '\n';
  }
}

std::string write_mesh(const Mesh& mesh) {
  std::ostringstream os;
  write_mesh(os, mesh);
  return os.str();
}

DisplacementFile read_displacement_records(std::istream& in) {
  LineReader r(in);
  DisplacementFile file;
  if (!r.next()) r.fail("empty displacement file");
  r.keyword("MDK1-DISP");
  r.expect_count(1, "MDK1-DISP header");
  while (r.next()) {
    r.expect_count(4, "displacement");
    DisplacementRecord rec{r.index(0), {r.real(1), r.real(2), r.real(3)}, r.line()};
    if (!is_finite(rec.d)) throw InvariantViolation(r.line(), 0, "displacement must be finite");
    file.records.push_back(rec);
  }
  return file;
}

DisplacementField align_displacements(const DisplacementFile& file, std::span<const std::size_t> boundary_ids) {
  std::unordered_map<std::size_t, std::size_t> slot;
  slot.reserve(boundary_ids.size());
  for (std::size_t k = 0; k < boundary_ids.size(); ++k) slot.emplace(boundary_ids[k], k);

  DisplacementField field(boundary_ids.size());
  std::vector<bool> seen(boundary_ids.size(), false);
  for (const auto& rec : file.records) {
    const auto it = slot.find(rec.node);
    if (it == slot.end()) {
      throw SourceMismatch("line " + std::to_string(rec.line) + ": node " + std::to_string(rec.node) +
                           " is not a boundary node");
    }
    if (seen[it->second]) {
      throw DuplicateNode("line " + std::to_string(rec.line) + ": node " + std::to_string(rec.node) +
                          " listed twice");
    }
    seen[it->second] = true;
    field[it->second] = rec.d;
  }
  for (std::size_t k = 0; k < seen.size(); ++k) {
    if (!seen[k]) throw MissingNode("no displacement for boundary node " + std::to_string(boundary_ids[k]));
  }
  return field;
}

DisplacementField read_displacements(std::istream& in, std::span<const std::size_t> boundary_ids) {
  return align_displacements(read_displacement_records(in), boundary_ids);
}

void write_displacements(std::ostream& out, std::span<const std::size_t> boundary_ids,
                         const DisplacementField& field) {
  if (field.size() != boundary_ids.size()) {
    throw DimensionMismatch("write_displacements: field and boundary differ in length");
  }
  out << "MDK1-DISP\n";
  for (std::size_t k = 0; k < field.size(); ++k) {
    out << boundary_ids[k] << ' ' << format_real(field[k].dx) << ' ' << format_real(field[k].dy) << ' '
        << format_real(field[k].dz) << '\n';
  }
}

namespace {

constexpr std::string_view kHistoryHeader = "iter,group,node,local_max_error,kernel_evals,cum_kernel_evals,t1_s,t2_s";

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_field(std::string_view text, std::size_t line, std::size_t column) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(line, column, "malformed field '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

std::string write_history_csv(const SelectionHistory& history) {
  std::ostringstream os;
  os << kHistoryHeader << '\n';
  std::uint64_t cum = 0;
  for (const auto& r : history.records) {
    os << r.iter << ',' << r.group << ',' << r.node << ',' << format_real(r.local_max_error) << ','
       << r.kernel_evals << ',' << r.cum_kernel_evals << ',' << format_real(r.t1_s) << ',' << format_real(r.t2_s)
       << '\n';
    cum = r.cum_kernel_evals;
  }
  if (history.final_sweep) {
    const GlobalSweep& g = *history.final_sweep;
    os << "sweep,," << g.node_of_max << ',' << format_real(g.max_error) << ',' << g.kernel_evals << ','
       << cum + g.kernel_evals << ',' << format_real(g.t_s) << ",\n";
  }
  return os.str();
}

SelectionHistory read_history_csv(std::istream& in) {
  SelectionHistory h;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line) || line != kHistoryHeader) throw ParseError(1, 1, "missing history CSV header");
  ++lineno;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 8) throw ParseError(lineno, 0, "expected 8 fields, found " + std::to_string(f.size()));
    if (h.final_sweep) throw ParseError(lineno, 1, "row after the sweep row");
    if (f[0] == "sweep") {
      GlobalSweep g;
      g.node_of_max = parse_field<std::size_t>(f[2], lineno, 3);
      g.max_error = parse_field<double>(f[3], lineno, 4);
      g.kernel_evals = parse_field<std::uint64_t>(f[4], lineno, 5);
      g.t_s = parse_field<double>(f[6], lineno, 7);
      h.final_sweep = g;
      continue;
    }
    IterationRecord r;
    r.iter = parse_field<std::size_t>(f[0], lineno, 1);
    r.group = parse_field<std::size_t>(f[1], lineno, 2);
    r.node = parse_field<std::size_t>(f[2], lineno, 3);
    r.local_max_error = parse_field<double>(f[3], lineno, 4);
    r.kernel_evals = parse_field<std::uint64_t>(f[4], lineno, 5);
    r.cum_kernel_evals = parse_field<std::uint64_t>(f[5], lineno, 6);
    r.t1_s = parse_field<double>(f[6], lineno, 7);
    r.t2_s = parse_field<double>(f[7], lineno, 8);
    h.records.push_back(r);
  }
  return h;
}

std::string write_support_csv(const SupportSet& s) {
  std::ostringstream os;
  os << "node,x,y,z,wx,wy,wz\n";
  const bool weighted = s.wx.size() == s.size();
  for (std::size_t i = 0; i < s.size(); ++i) {
    os << s.nodes[i] << ',' << format_real(s.points[i].x) << ',' << format_real(s.points[i].y) << ','
       << format_real(s.points[i].z) << ',' << format_real(weighted ? s.wx[i] : 0.0) << ','
       << format_real(weighted ? s.wy[i] : 0.0) << ',' << format_real(weighted ? s.wz[i] : 0.0) << '\n';
  }
  return os.str();
}

SupportSet read_support_csv(std::istream& in) {
  SupportSet s;
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line) || line != "node,x,y,z,wx,wy,wz") throw ParseError(1, 1, "missing support CSV header");
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 7) throw ParseError(lineno, 0, "expected 7 fields, found " + std::to_string(f.size()));
    s.nodes.push_back(parse_field<std::size_t>(f[0], lineno, 1));
    s.points.push_back({parse_field<double>(f[1], lineno, 2), parse_field<double>(f[2], lineno, 3),
                        parse_field<double>(f[3], lineno, 4)});
    s.wx.push_back(parse_field<double>(f[4], lineno, 5));
    s.wy.push_back(parse_field<double>(f[5], lineno, 6));
    s.wz.push_back(parse_field<double>(f[6], lineno, 7));
  }
  return s;
}

BoundarySet make_boundary_set(const Mesh& mesh, DisplacementField disp) {
  if (disp.size() != mesh.boundary.size()) {
    throw SourceMismatch("displacement field has " + std::to_string(disp.size()) + " entries, mesh has " +
                         std::to_string(mesh.boundary.size()) + " boundary nodes");
  }
  BoundarySet b;
  b.indices = mesh.boundary;
  b.points.reserve(mesh.boundary.size());
  for (std::size_t id : mesh.boundary) b.points.push_back(mesh.nodes.at(id));
  b.disp = std::move(disp);
  return b;
}

}  // namespace rbfmorph
