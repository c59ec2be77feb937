#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lmo/scalar.hpp"

namespace lmo {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class TokenKind { CrossPos, CrossNeg, Max, Min };
enum class Orient : uint8_t { Down, Up };

// One elementary tangle on n strands at position k (1-based): a crossing of
// strands k, k+1, or a cap/cup joining them. n counts the wider side. orient
// optionally lists the orientations of those n strands (empty = derive).
struct TangleToken {
  TokenKind kind = TokenKind::Max;
  int k = 1;
  int n = 2;
  std::vector<Orient> orient;

  std::string to_string() const;
  static TangleToken parse(std::string_view line);
};

// Token stream read top to bottom, with everything derived from tracing it.
struct LinkDiagram {
  std::vector<TangleToken> tokens;  // orientations filled in
  int components = 0;
  std::vector<int> token_component;               // component of a MAX/MIN, -1 for crossings
  std::vector<int> crossing_sign;                 // per token, 0 for extrema
  std::vector<std::pair<int, int>> crossing_pair; // components at a crossing
  std::vector<int> maxima;                        // per component
  std::vector<int> first_max;                     // token index of each component's first MAX

  std::vector<int> writhe() const;  // self-crossing sign sums
};

// Validates and traces components; components are labeled by first MAX.
LinkDiagram analyze(std::vector<TangleToken> tokens);
LinkDiagram parse_tokens(std::string_view text);

struct BraidWord {
  int strands = 1;
  std::vector<int> word;  // +-i for sigma_i^{+-1}
};
LinkDiagram from_braid(const BraidWord& b);

using IntMatrix = std::vector<std::vector<long>>;
IntMatrix linking_matrix(const LinkDiagram& d, const std::vector<int>& framings);
struct Signature {
  int positive = 0, negative = 0, zero = 0;
};
Signature signature(const IntMatrix& m);
mpz_class determinant(const IntMatrix& m);

// Curl triples after each component's first MAX until self-writhe = target.
LinkDiagram add_framing_curls(const LinkDiagram& d, const std::vector<int>& framings);
LinkDiagram mirror(const LinkDiagram& d);
LinkDiagram reverse_component(const LinkDiagram& d, int c);
// Blackboard 2-parallel of component c; copies are labeled c and c+1.
LinkDiagram double_component(const LinkDiagram& d, int c);
// d2 drawn entirely below d1.
LinkDiagram stack_split(const LinkDiagram& d1, const LinkDiagram& d2);

// Framed link presenting a 3-manifold.
struct SurgeryPresentation {
  LinkDiagram diagram;
  std::vector<int> framings;
};
// JSON {"braid": {"strands": s, "word": [...]}, "framings": [...]} or
// {"tokens": [...], "framings": [...]}, or the token text format with
// "framings a b ..." on its own line.
SurgeryPresentation parse_presentation(std::string_view text);

}  // namespace lmo
