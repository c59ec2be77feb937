#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "lmo/scalar.hpp"

namespace lmo {

// Chord-only diagrams on a fixed number of ordered pieces (strands, arcs or
// circles). A key lists, per piece, the chord labels of its legs in order;
// labels are renumbered by first appearance, so equal keys mean equal raw
// diagrams (no rotation or relation applied).
using Pieces = std::vector<std::vector<uint8_t>>;

std::string encode_pieces(Pieces& p);  // renormalizes labels in place
Pieces decode_pieces(const std::string& key, int npieces);
int key_degree(const std::string& key, int npieces);

class ChordSeries {
 public:
  ChordSeries() = default;
  ChordSeries(int pieces, int max_degree) : pieces_(pieces), max_degree_(max_degree) {}
  static ChordSeries one(int pieces, int max_degree);
  // Single chord between pieces i and j (legs appended in order i, j).
  static ChordSeries chord(int pieces, int i, int j, int max_degree);

  int pieces() const { return pieces_; }
  int max_degree() const { return max_degree_; }
  // Terms with more legs than this on any single piece are dropped (0 = off).
  int piece_cap() const { return piece_cap_; }
  void set_piece_cap(int c) { piece_cap_ = c; }
  const std::unordered_map<std::string, Scalar>& terms() const { return terms_; }
  std::unordered_map<std::string, Scalar>& terms() { return terms_; }

  void add(const std::string& key, const Scalar& c);
  void add(Pieces p, const Scalar& c);
  ChordSeries& operator+=(const ChordSeries& o);
  ChordSeries& operator-=(const ChordSeries& o);
  ChordSeries scaled(const Scalar& s) const;
  // Stacking: this on top of o, piece by piece.
  ChordSeries operator*(const ChordSeries& o) const;
  ChordSeries truncated(int max_degree) const;
  Scalar constant() const;
  bool operator==(const ChordSeries& o) const;
  std::vector<std::string> sorted_keys() const;

 private:
  int pieces_ = 0;
  int max_degree_ = 0;
  int piece_cap_ = 0;
  std::unordered_map<std::string, Scalar> terms_;
};

ChordSeries exp_series(const ChordSeries& x);      // x without constant term
ChordSeries inverse_series(const ChordSeries& x);  // x with constant term 1

}  // namespace lmo
