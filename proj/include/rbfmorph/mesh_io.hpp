#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rbfmorph/geometry.hpp"
#include "rbfmorph/interpolant.hpp"
#include "rbfmorph/selection.hpp"

namespace rbfmorph {

// Node coordinates, the sorted wall-node ids and optional surface polygons.
// Volume connectivity is not stored: the displacement evaluation needs none.
struct Mesh {
  std::vector<Point3> nodes;
  std::vector<std::size_t> boundary;
  std::vector<std::vector<std::size_t>> cells;

  friend bool operator==(const Mesh&, const Mesh&) = default;
};

// Shortest decimal with 17 significant digits; -0 is written as 0.
std::string format_real(double v);

// MDK1 text format:
//   MDK1
//   NODES <n>      followed by n lines "x y z"
//   BOUNDARY <nb>  followed by nb node ids
//   CELLS <ne>     followed by ne lines "k i0 .. i(k-1)", k in {3, 4}
// '#' starts a comment; blank lines are skipped. The CELLS section may be
// omitted on input. Throws ParseError or InvariantViolation with the line.
Mesh read_mesh(std::istream& in);
void write_mesh(std::ostream& out, const Mesh& mesh);
std::string write_mesh(const Mesh& mesh);

struct DisplacementRecord {
  std::size_t node = 0;
  Vec3Displacement d;
  std::size_t line = 0;
};

struct DisplacementFile {
  std::vector<DisplacementRecord> records;
};

// MDK1-DISP: header line then "node dx dy dz" per line.
DisplacementFile read_displacement_records(std::istream& in);

// Orders the records by `boundary_ids`. Throws DuplicateNode, MissingNode,
// or SourceMismatch for an id that is not a boundary node.
DisplacementField align_displacements(const DisplacementFile& file, std::span<const std::size_t> boundary_ids);

DisplacementField read_displacements(std::istream& in, std::span<const std::size_t> boundary_ids);
void write_displacements(std::ostream& out, std::span<const std::size_t> boundary_ids,
                         const DisplacementField& field);

// One row per iteration under
//   iter,group,node,local_max_error,kernel_evals,cum_kernel_evals,t1_s,t2_s
// and, when a final sweep exists, a trailing row
//   sweep,,<node_of_max>,<global max>,<sweep evals>,<cum incl. sweep>,<sweep time>,
std::string write_history_csv(const SelectionHistory& history);

// Inverse of write_history_csv for the serialized columns.
SelectionHistory read_history_csv(std::istream& in);

// Support set as CSV: node,x,y,z,wx,wy,wz (node = boundary index).
std::string write_support_csv(const SupportSet& s);
SupportSet read_support_csv(std::istream& in);

// Boundary set of a mesh paired with its prescribed field.
BoundarySet make_boundary_set(const Mesh& mesh, DisplacementField disp);

}  // namespace rbfmorph
