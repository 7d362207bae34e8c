#pragma once

#include <optional>

#include "vacone/polyhedral.hpp"

namespace vacone {

struct Projection {
  DVec nearest;
  double dist = 0;
  std::size_t branch = 0;
  std::vector<std::size_t> empty_blocks;  // flagged and skipped
};

struct ExactProjection {
  Vec nearest;
  Rational dist2;
  std::size_t branch = 0;
};

/// Euclidean projection of z onto a convex polyhedron by enumerating active
/// sets of increasing size; the first KKT point found is the projection.
/// Returns nullopt when the polyhedron is empty.
std::optional<Vec> project_polyhedron(const HPolyhedron& h, const Vec& z);
std::optional<DVec> project_polyhedron(const HPolyhedron& h, const DVec& z);

/// Projection onto {y | g_j(y) <= 0}: each single constraint by bisection on
/// its multiplier (Newton inner solves), several constraints by Dykstra sweeps.
/// Nonconvex blocks fall back to Newton on the Lagrange system over every
/// active subset (best feasible KKT point, a local answer).
DVec project_smooth(const SmoothConvexBlock& b, const DVec& z);

/// Nearest point over all blocks; ties go to the lowest block index.
Projection project(const PolyUnion& s, const DVec& z);
/// Rational input: polyhedral blocks are projected exactly, smooth blocks in
/// floating point.
Projection project(const PolyUnion& s, const Vec& z);
/// Exact variant for purely polyhedral unions.
ExactProjection project_exact(const PolyUnion& s, const Vec& z);

double distance(const PolyUnion& s, const DVec& z);

}  // namespace vacone
