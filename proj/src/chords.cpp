#include "lmo/chords.hpp"

#include <algorithm>
#include <stdexcept>

namespace lmo {

std::string encode_pieces(Pieces& p) {
  uint8_t relabel[256];
  std::fill(std::begin(relabel), std::end(relabel), 0xFF);
  uint8_t next = 0;
  size_t total = p.size();
  for (auto& piece : p) total += piece.size();
  std::string key;
  key.reserve(total);
  for (auto& piece : p) {
    if (piece.size() > 255) throw std::length_error("chord piece too long");
    key.push_back(static_cast<char>(piece.size()));
    for (auto& l : piece) {
      if (relabel[l] == 0xFF) relabel[l] = next++;
      l = relabel[l];
      key.push_back(static_cast<char>(l));
    }
  }
  return key;
}

Pieces decode_pieces(const std::string& key, int npieces) {
  Pieces p(npieces);
  size_t i = 0;
  for (int k = 0; k < npieces; ++k) {
    size_t len = static_cast<uint8_t>(key.at(i++));
    p[k].assign(key.begin() + i, key.begin() + i + len);
    i += len;
  }
  return p;
}

int key_degree(const std::string& key, int npieces) {
  return static_cast<int>(key.size() - npieces) / 2;
}

ChordSeries ChordSeries::one(int pieces, int max_degree) {
  ChordSeries s(pieces, max_degree);
  Pieces p(pieces);
  s.add(p, Scalar(1));
  return s;
}

ChordSeries ChordSeries::chord(int pieces, int i, int j, int max_degree) {
  ChordSeries s(pieces, max_degree);
  Pieces p(pieces);
  p[i].push_back(0);
  p[j].push_back(0);
  s.add(p, Scalar(1));
  return s;
}

void ChordSeries::add(const std::string& key, const Scalar& c) {
  if (c.is_zero() || key_degree(key, pieces_) > max_degree_) return;
  if (piece_cap_ > 0)
    for (size_t i = 0; i < key.size(); i += 1 + static_cast<uint8_t>(key[i]))
      if (static_cast<uint8_t>(key[i]) > piece_cap_) return;
  auto [it, fresh] = terms_.try_emplace(key, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void ChordSeries::add(Pieces p, const Scalar& c) { add(encode_pieces(p), c); }

ChordSeries& ChordSeries::operator+=(const ChordSeries& o) {
  for (auto& [k, c] : o.terms_) add(k, c);
  return *this;
}

ChordSeries& ChordSeries::operator-=(const ChordSeries& o) {
  for (auto& [k, c] : o.terms_) add(k, -c);
  return *this;
}

ChordSeries ChordSeries::scaled(const Scalar& s) const {
  ChordSeries out(pieces_, max_degree_);
  out.piece_cap_ = piece_cap_;
  if (s.is_zero()) return out;
  for (auto& [k, c] : terms_) out.add(k, c * s);
  return out;
}

ChordSeries ChordSeries::operator*(const ChordSeries& o) const {
  if (pieces_ != o.pieces_) throw std::invalid_argument("stacking series with different piece counts");
  ChordSeries out(pieces_, std::min(max_degree_, o.max_degree_));
  out.piece_cap_ = piece_cap_;
  std::vector<std::pair<Pieces, const Scalar*>> right;
  for (auto& [k, c] : o.terms_) right.push_back({decode_pieces(k, pieces_), &c});
  std::vector<int> rdeg;
  for (auto& [k, c] : o.terms_) rdeg.push_back(key_degree(k, pieces_));
  for (auto& [ka, ca] : terms_) {
    const int da = key_degree(ka, pieces_);
    Pieces a = decode_pieces(ka, pieces_);
    for (size_t r = 0; r < right.size(); ++r) {
      if (da + rdeg[r] > out.max_degree_) continue;
      Pieces p = a;
      for (int i = 0; i < pieces_; ++i)
        for (uint8_t l : right[r].first[i]) p[i].push_back(static_cast<uint8_t>(l + da));
      out.add(p, ca * *right[r].second);
    }
  }
  return out;
}

ChordSeries ChordSeries::truncated(int max_degree) const {
  ChordSeries out(pieces_, std::min(max_degree, max_degree_));
  out.piece_cap_ = piece_cap_;
  for (auto& [k, c] : terms_) out.add(k, c);
  return out;
}

Scalar ChordSeries::constant() const {
  std::string k(pieces_, '\0');
  auto it = terms_.find(k);
  return it == terms_.end() ? Scalar(0) : it->second;
}

bool ChordSeries::operator==(const ChordSeries& o) const {
  if (pieces_ != o.pieces_ || terms_.size() != o.terms_.size()) return false;
  for (auto& [k, c] : terms_) {
    auto it = o.terms_.find(k);
    if (it == o.terms_.end() || it->second != c) return false;
  }
  return true;
}

std::vector<std::string> ChordSeries::sorted_keys() const {
  std::vector<std::string> keys;
  for (auto& [k, c] : terms_) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  return keys;
}

ChordSeries exp_series(const ChordSeries& x) {
  ChordSeries out = ChordSeries::one(x.pieces(), x.max_degree());
  ChordSeries power = out;
  Rational fact = 1;
  for (int k = 1; k <= x.max_degree(); ++k) {
    power = power * x;
    fact *= k;
    if (power.terms().empty()) break;
    out += power.scaled(Scalar(Rational(1) / fact));
  }
  return out;
}

ChordSeries inverse_series(const ChordSeries& x) {
  if (x.constant() != Scalar(1)) throw std::invalid_argument("inverse_series: constant term must be 1");
  ChordSeries neg(x.pieces(), x.max_degree());
  for (auto& [k, c] : x.terms())
    if (key_degree(k, x.pieces()) > 0) neg.add(k, -c);
  ChordSeries out = ChordSeries::one(x.pieces(), x.max_degree());
  ChordSeries power = out;
  for (int k = 1; k <= x.max_degree(); ++k) {
    power = power * neg;
    if (power.terms().empty()) break;
    out += power;
  }
  return out;
}

}  // namespace lmo
