#pragma once

#include "lmo/chords.hpp"
#include "lmo/element.hpp"
#include "lmo/links.hpp"

namespace lmo {

// Single chord between strands i < j (1-based) of n downward strands.
Element omega_chord(int i, int j, int n, int max_degree = Element::kNoCap);

// Chord part of a token on its n-strand side with every strand pointing down:
// x+-, or the associator factor next to a cap or cup.
const ChordSeries& token_chords(TokenKind kind, int k, int n, int max_degree);
// Same, on n intervals, with the sign of each upward strand applied.
Element elementary_value(const TangleToken& t, int max_degree);

// Caps for the composition: total degree, and legs per circle (0 = none).
struct ZCaps {
  int degree = 2;
  int legs_per_circle = 0;
};

// Stacked token values, one closed piece per component in component order.
ChordSeries z_chords(const LinkDiagram& d, const ZCaps& caps);
Element z_of_diagram(const LinkDiagram& d, const ZCaps& caps);

// nu on one interval (cut open) and on a circle.
const ChordSeries& nu_interval(int max_degree);
Element nu(int max_degree);

// Z(D) # nu^{s_c + extra} on each component c.
Element hat_z(const LinkDiagram& d, const ZCaps& caps);
Element check_z(const LinkDiagram& d, const ZCaps& caps);

// Closed pieces as circles.
Element circles_element(const ChordSeries& s, int max_degree = Element::kNoCap);

}  // namespace lmo
