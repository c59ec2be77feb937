#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lmo {

enum class ComponentKind : uint8_t { Circle = 0, Interval = 1 };

using Skeleton = std::vector<ComponentKind>;

// One oriented skeleton component with the univalent vertices (sites) on it,
// listed along the orientation. A point is an interval with at most one site.
struct SkeletonComponent {
  ComponentKind kind = ComponentKind::Circle;
  std::vector<int> sites;
};

// Vertex-oriented uni-trivalent graph on a skeleton. Half-edge h = 3*v + port;
// the cyclic order at a trivalent vertex is port 0 -> 1 -> 2.
struct Diagram {
  std::vector<SkeletonComponent> skeleton;
  std::vector<uint8_t> valence;  // 1 or 3
  std::vector<int> partner;      // size 3*V, -1 for unused ports
  int free_loops = 0;            // vertexless dashed circles

  static Diagram on(const Skeleton& s);
  int add_vertex(int val);
  // New univalent vertex appended to component c; returns its half-edge.
  int add_leg(int component);
  void connect(int h1, int h2);
  int vertex_count() const { return static_cast<int>(valence.size()); }
  int univalent_count() const;
  int trivalent_count() const;
  Skeleton skeleton_kinds() const;
  // Half-edge of the univalent vertex at site i of component c.
  int leg(int component, int i) const { return 3 * skeleton[component].sites[i]; }
};

// Half the number of vertices (legs plus internal vertices).
int degree(const Diagram& d);
void validate(const Diagram& d);  // throws on malformed input

// Canonical code under orientation- and label-preserving homeomorphisms of the
// skeleton; sign is -1 when the diagram equals minus the canonical
// representative, 0 when it vanishes by antisymmetry.
struct CanonicalForm {
  std::string code;
  int sign = 1;
};
CanonicalForm canonical_form(const Diagram& d);
Diagram decode_diagram(const std::string& code);

Diagram disjoint_union(const Diagram& a, const Diagram& b);
// Reverse the cyclic order at every trivalent vertex.
Diagram flip_all(const Diagram& d);

// Convenience builders.
// Chord diagram on circles/intervals: pieces[c] lists chord labels along component c.
Diagram chord_diagram(const Skeleton& s, const std::vector<std::vector<int>>& pieces);
// Planar theta: cyclic orders (a,b,c) and (c,b,a).
Diagram theta_graph();

}  // namespace lmo
