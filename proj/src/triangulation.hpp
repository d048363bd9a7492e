// Ideal triangulations of cusped 3-manifolds: parsing and serialization of
// the census-style text format, validation, edge classes, cusp links, and
// random 2-3 / 3-2 retriangulation with peripheral-curve transport.
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace exfill {

using cplx = std::complex<double>;

// Weight table of one normal curve: w[t][v][f] = signed number of strands of
// the curve leaving cusp triangle (tet t, ideal vertex v) through face f.
// Rows balance to zero per triangle and negate across face gluings.
using CurveWeights = std::vector<std::array<std::array<int, 4>, 4>>;

struct Tet {
  std::array<int, 4> neighbor{};                 // neighbor[f] = tet index
  std::array<std::array<int, 4>, 4> gluing{};    // gluing[f][v] = image vertex
  std::array<int, 4> cusp_of_vertex{};           // cusp index per ideal vertex
};

// One corner of an edge class: the edge (v, w) of tetrahedron t, with v < w.
struct EdgeCorner {
  int tet, v, w;
};

struct Triangulation {
  std::string name;
  std::vector<Tet> tets;
  int cusp_count = 0;
  CurveWeights meridian;   // one row of 16 weights per tetrahedron
  CurveWeights longitude;  // (vertex v belongs to cusp cusp_of_vertex[v])

  // Shapes of a complete-structure solution when known (empty otherwise);
  // carried through retriangulation so rebuilt equation systems can be
  // calibrated without re-solving from scratch.
  std::vector<cplx> reference_shapes;

  int size() const { return static_cast<int>(tets.size()); }
};

// Which of the three opposite-edge pairs the edge (v, w) belongs to:
// 0 for 01/23, 1 for 02/13, 2 for 03/12.  Pair k carries the parameter
// z, 1/(1-z), (z-1)/z respectively.
int edge_pair_type(int v, int w);

// Orbits of tetrahedron edges under the face gluings.
std::vector<std::vector<EdgeCorner>> edge_classes(const Triangulation& t);

Triangulation parse_triangulation(const std::string& text);
std::string serialize_triangulation(const Triangulation& t);

// Empty vector means valid; otherwise human-readable violations.
std::vector<std::string> validate_triangulation(const Triangulation& t);

// The vertex-link triangulation of one cusp.
struct CuspLink {
  // Triangle i is the link of vertex `vertex[i]` in tet `tet[i]`.
  std::vector<int> tet, vertex;
  // side[i][f]: index of the neighboring cusp triangle across face f of the
  // ambient tet (-1 when f == vertex[i], i.e. not a side of the triangle).
  std::vector<std::array<int, 4>> side;
  int euler_characteristic = 0;
};

CuspLink cusp_link(const Triangulation& t, int cusp);

// Algebraic intersection number of the meridian and longitude curves on the
// torus link of `cusp`.
int peripheral_intersection_number(const Triangulation& t, int cusp);

// Seed-deterministic sequence of 2-3 and 3-2 bistellar moves; illegal or
// degenerate moves are skipped.  Peripheral curves and reference shapes are
// transported through every move.
Triangulation randomize(const Triangulation& t, std::uint64_t seed, int steps);

// Individual moves (exposed for tests).  Return false when the move is not
// applicable; `t` is unchanged in that case.
bool move_two_three(Triangulation& t, int tet, int face);
bool move_three_two(Triangulation& t, int tet, int v, int w);

}  // namespace exfill
