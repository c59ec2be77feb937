#include "lmo/links.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace lmo {

namespace {

std::string orient_string(const std::vector<Orient>& o) {
  std::string s;
  for (auto x : o) s += x == Orient::Down ? 'd' : 'u';
  return s;
}

Orient opposite(Orient o) { return o == Orient::Down ? Orient::Up : Orient::Down; }

// Emits tokens with fully specified orientations while tracking the state.
class Builder {
 public:
  std::vector<TangleToken> tokens;
  std::vector<Orient> state;

  void max(int k, Orient left) {
    state.insert(state.begin() + (k - 1), {left, opposite(left)});
    tokens.push_back({TokenKind::Max, k, static_cast<int>(state.size()), state});
  }
  void min(int k) {
    tokens.push_back({TokenKind::Min, k, static_cast<int>(state.size()), state});
    state.erase(state.begin() + (k - 1), state.begin() + (k + 1));
  }
  void cross(int k, bool positive) {
    tokens.push_back({positive ? TokenKind::CrossPos : TokenKind::CrossNeg, k,
                      static_cast<int>(state.size()), state});
    std::swap(state[k - 1], state[k]);
  }
};

struct UnionFind {
  std::vector<int> parent;
  int make() {
    parent.push_back(static_cast<int>(parent.size()));
    return parent.back();
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

LinkDiagram analyze_impl(std::vector<TangleToken> tokens, const std::vector<int>* lines,
                         std::vector<std::vector<int>>* comps_before) {
  auto fail = [&](size_t i, const std::string& msg) -> ParseError {
    std::string where = lines ? "line " + std::to_string((*lines)[i]) : "token " + std::to_string(i);
    return ParseError(where + ": " + msg);
  };
  std::vector<Orient> ori;
  std::vector<int> node;  // union-find node per position
  UnionFind uf;
  std::vector<int> node_token;  // MAX token that created each node
  std::vector<int> tok_node(tokens.size(), -1);
  std::vector<std::pair<int, int>> cross_nodes(tokens.size(), {-1, -1});
  std::vector<std::vector<int>> before_nodes(tokens.size());
  LinkDiagram d;
  d.crossing_sign.assign(tokens.size(), 0);
  for (size_t i = 0; i < tokens.size(); ++i) {
    auto& t = tokens[i];
    const int n = t.n, k = t.k;
    before_nodes[i] = node;
    if (k < 1 || k >= n) throw fail(i, "position out of range");
    if (!t.orient.empty() && static_cast<int>(t.orient.size()) != n)
      throw fail(i, "orientation string must have length n");
    if (t.kind == TokenKind::Max) {
      if (static_cast<int>(ori.size()) != n - 2)
        throw fail(i, "strand count mismatch: have " + std::to_string(ori.size()) + ", MAX expects " +
                          std::to_string(n - 2));
      Orient left = t.orient.empty() ? Orient::Down : t.orient[k - 1];
      int id = uf.make();
      node_token.push_back(static_cast<int>(i));
      ori.insert(ori.begin() + (k - 1), {left, opposite(left)});
      node.insert(node.begin() + (k - 1), {id, id});
      tok_node[i] = id;
      if (!t.orient.empty() && t.orient != ori) throw fail(i, "orientation mismatch");
      t.orient = ori;
    } else {
      if (static_cast<int>(ori.size()) != n)
        throw fail(i, "strand count mismatch: have " + std::to_string(ori.size()) + ", token expects " +
                          std::to_string(n));
      if (!t.orient.empty() && t.orient != ori) throw fail(i, "orientation mismatch");
      t.orient = ori;
      if (t.kind == TokenKind::Min) {
        if (ori[k - 1] == ori[k]) throw fail(i, "MIN joins strands with the same orientation");
        uf.unite(node[k - 1], node[k]);
        tok_node[i] = node[k - 1];
        ori.erase(ori.begin() + (k - 1), ori.begin() + (k + 1));
        node.erase(node.begin() + (k - 1), node.begin() + (k + 1));
      } else {
        int s = t.kind == TokenKind::CrossPos ? 1 : -1;
        if (ori[k - 1] != ori[k]) s = -s;
        d.crossing_sign[i] = s;
        cross_nodes[i] = {node[k - 1], node[k]};
        std::swap(ori[k - 1], ori[k]);
        std::swap(node[k - 1], node[k]);
      }
    }
  }
  if (!ori.empty()) throw ParseError("diagram does not close: " + std::to_string(ori.size()) + " open strands");
  // label components by first MAX
  std::map<int, int> root_label;
  for (size_t id = 0; id < node_token.size(); ++id) {
    int r = uf.find(static_cast<int>(id));
    if (!root_label.count(r)) {
      int lab = static_cast<int>(root_label.size());
      root_label[r] = lab;
      d.first_max.push_back(node_token[id]);
    }
  }
  d.components = static_cast<int>(root_label.size());
  d.maxima.assign(d.components, 0);
  d.token_component.assign(tokens.size(), -1);
  d.crossing_pair.assign(tokens.size(), {-1, -1});
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (tok_node[i] >= 0) {
      d.token_component[i] = root_label[uf.find(tok_node[i])];
      if (tokens[i].kind == TokenKind::Max) ++d.maxima[d.token_component[i]];
    }
    if (cross_nodes[i].first >= 0)
      d.crossing_pair[i] = {root_label[uf.find(cross_nodes[i].first)], root_label[uf.find(cross_nodes[i].second)]};
  }
  if (comps_before) {
    comps_before->resize(tokens.size());
    for (size_t i = 0; i < tokens.size(); ++i) {
      (*comps_before)[i].clear();
      for (int x : before_nodes[i]) (*comps_before)[i].push_back(root_label[uf.find(x)]);
    }
  }
  d.tokens = std::move(tokens);
  return d;
}

std::vector<std::vector<int>> components_before(const LinkDiagram& d) {
  std::vector<std::vector<int>> cb;
  analyze_impl(d.tokens, nullptr, &cb);
  return cb;
}

}  // namespace

std::string TangleToken::to_string() const {
  std::string s;
  switch (kind) {
    case TokenKind::CrossPos: s = "X+"; break;
    case TokenKind::CrossNeg: s = "X-"; break;
    case TokenKind::Max: s = "MAX"; break;
    case TokenKind::Min: s = "MIN"; break;
  }
  s += " " + std::to_string(k) + " " + std::to_string(n);
  if (!orient.empty()) s += " " + orient_string(orient);
  return s;
}

TangleToken TangleToken::parse(std::string_view line) {
  std::stringstream ss{std::string(line)};
  std::string kind, extra;
  TangleToken t;
  if (!(ss >> kind >> t.k >> t.n)) throw ParseError("malformed token '" + std::string(line) + "'");
  if (kind == "X+")
    t.kind = TokenKind::CrossPos;
  else if (kind == "X-")
    t.kind = TokenKind::CrossNeg;
  else if (kind == "MAX")
    t.kind = TokenKind::Max;
  else if (kind == "MIN")
    t.kind = TokenKind::Min;
  else
    throw ParseError("unknown token kind '" + kind + "'");
  if (ss >> extra) {
    for (char c : extra) {
      if (c == 'd')
        t.orient.push_back(Orient::Down);
      else if (c == 'u')
        t.orient.push_back(Orient::Up);
      else
        throw ParseError("bad orientation string '" + extra + "'");
    }
    if (static_cast<int>(t.orient.size()) != t.n) throw ParseError("orientation string must have length n");
  }
  if (ss >> extra) throw ParseError("trailing text in token '" + std::string(line) + "'");
  return t;
}

std::vector<int> LinkDiagram::writhe() const {
  std::vector<int> w(components, 0);
  for (size_t i = 0; i < tokens.size(); ++i)
    if (crossing_sign[i] && crossing_pair[i].first == crossing_pair[i].second)
      w[crossing_pair[i].first] += crossing_sign[i];
  return w;
}

LinkDiagram analyze(std::vector<TangleToken> tokens) { return analyze_impl(std::move(tokens), nullptr, nullptr); }

LinkDiagram parse_tokens(std::string_view text) {
  std::stringstream ss{std::string(text)};
  std::string line;
  std::vector<TangleToken> toks;
  std::vector<int> lines;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      toks.push_back(TangleToken::parse(line));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
    lines.push_back(lineno);
  }
  return analyze_impl(std::move(toks), &lines, nullptr);
}

LinkDiagram from_braid(const BraidWord& b) {
  const int s = b.strands;
  if (s < 1) throw ParseError("braid needs at least one strand");
  Builder B;
  for (int j = 1; j <= s; ++j) B.max(j, Orient::Down);
  for (int g : b.word) {
    int i = std::abs(g);
    if (g == 0 || i >= s) throw ParseError("braid generator out of range: " + std::to_string(g));
    B.cross(i, g > 0);
  }
  for (int j = s; j >= 1; --j) B.min(j);
  return analyze(B.tokens);
}

IntMatrix linking_matrix(const LinkDiagram& d, const std::vector<int>& framings) {
  if (static_cast<int>(framings.size()) != d.components)
    throw ParseError("expected " + std::to_string(d.components) + " framings, got " + std::to_string(framings.size()));
  IntMatrix m(d.components, std::vector<long>(d.components, 0));
  for (size_t i = 0; i < d.tokens.size(); ++i) {
    if (!d.crossing_sign[i]) continue;
    auto [a, b] = d.crossing_pair[i];
    if (a != b) {
      m[a][b] += d.crossing_sign[i];
      m[b][a] += d.crossing_sign[i];
    }
  }
  for (int i = 0; i < d.components; ++i)
    for (int j = 0; j < d.components; ++j) {
      if (i == j) continue;
      if (m[i][j] % 2) throw ParseError("odd crossing count between two components");
    }
  for (int i = 0; i < d.components; ++i)
    for (int j = 0; j < d.components; ++j) m[i][j] = i == j ? framings[i] : m[i][j] / 2;
  return m;
}

Signature signature(const IntMatrix& mi) {
  const int n = static_cast<int>(mi.size());
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = mi[i][j];
  Signature sig;
  for (int k = 0; k < n; ++k) {
    int p = -1;
    for (int i = k; i < n; ++i)
      if (a[i][i] != 0) {
        p = i;
        break;
      }
    if (p < 0) {
      // no diagonal pivot: fold a nonzero off-diagonal entry into the diagonal
      int q = -1;
      for (int i = k; i < n && q < 0; ++i)
        for (int j = i + 1; j < n; ++j)
          if (a[i][j] != 0) {
            q = j;
            p = i;
            break;
          }
      if (q < 0) {
        sig.zero += n - k;
        break;
      }
      for (int j = 0; j < n; ++j) a[p][j] += a[q][j];
      for (int j = 0; j < n; ++j) a[j][p] += a[j][q];
    }
    std::swap(a[k], a[p]);
    for (auto& row : a) std::swap(row[k], row[p]);
    for (int i = k + 1; i < n; ++i) {
      if (a[i][k] == 0) continue;
      Rational f = a[i][k] / a[k][k];
      for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      for (int j = k; j < n; ++j) a[j][i] = a[i][j];
    }
    (a[k][k] > 0 ? sig.positive : sig.negative)++;
  }
  return sig;
}

mpz_class determinant(const IntMatrix& mi) {
  const int n = static_cast<int>(mi.size());
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = mi[i][j];
  Rational det = 1;
  for (int k = 0; k < n; ++k) {
    int p = k;
    while (p < n && a[p][k] == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      std::swap(a[p], a[k]);
      det = -det;
    }
    det *= a[k][k];
    for (int i = k + 1; i < n; ++i) {
      Rational f = a[i][k] / a[k][k];
      for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
    }
  }
  return det.get_num();
}

LinkDiagram add_framing_curls(const LinkDiagram& d, const std::vector<int>& framings) {
  if (static_cast<int>(framings.size()) != d.components)
    throw ParseError("expected " + std::to_string(d.components) + " framings, got " + std::to_string(framings.size()));
  std::vector<int> w = d.writhe();
  Builder B;
  for (size_t i = 0; i < d.tokens.size(); ++i) {
    const auto& t = d.tokens[i];
    switch (t.kind) {
      case TokenKind::Max: B.max(t.k, t.orient[t.k - 1]); break;
      case TokenKind::Min: B.min(t.k); break;
      default: B.cross(t.k, t.kind == TokenKind::CrossPos);
    }
    if (t.kind != TokenKind::Max) continue;
    int c = d.token_component[i];
    if (d.first_max[c] != static_cast<int>(i)) continue;
    int delta = framings[c] - w[c];
    // kink on the left leg of the cap: cap to its right, cross, cup back
    const int p = t.k;
    for (int r = 0; r < std::abs(delta); ++r) {
      Orient o = B.state[p - 1];
      B.max(p + 1, o);
      B.cross(p, delta > 0);
      B.min(p + 1);
    }
  }
  return analyze(B.tokens);
}

LinkDiagram mirror(const LinkDiagram& d) {
  auto toks = d.tokens;
  for (auto& t : toks) {
    if (t.kind == TokenKind::CrossPos)
      t.kind = TokenKind::CrossNeg;
    else if (t.kind == TokenKind::CrossNeg)
      t.kind = TokenKind::CrossPos;
  }
  return analyze(toks);
}

LinkDiagram reverse_component(const LinkDiagram& d, int c) {
  Builder B;
  for (size_t i = 0; i < d.tokens.size(); ++i) {
    const auto& t = d.tokens[i];
    switch (t.kind) {
      case TokenKind::Max: {
        Orient o = t.orient[t.k - 1];
        if (d.token_component[i] == c) o = opposite(o);
        B.max(t.k, o);
        break;
      }
      case TokenKind::Min: B.min(t.k); break;
      default: B.cross(t.k, t.kind == TokenKind::CrossPos);
    }
  }
  return analyze(B.tokens);
}

LinkDiagram double_component(const LinkDiagram& d, int c) {
  auto cb = components_before(d);
  Builder B;
  for (size_t i = 0; i < d.tokens.size(); ++i) {
    const auto& t = d.tokens[i];
    const auto& before = cb[i];
    // new 1-based position of old position q (1-based) in the state before the token
    auto newpos = [&](int q) {
      int p = 1;
      for (int j = 0; j < q - 1; ++j) p += before[j] == c ? 2 : 1;
      return p;
    };
    auto width = [&](int q) { return before[q - 1] == c ? 2 : 1; };
    switch (t.kind) {
      case TokenKind::Max: {
        int p = newpos(t.k);
        Orient o = t.orient[t.k - 1];
        if (d.token_component[i] == c) {
          B.max(p, o);
          B.max(p + 1, o);
        } else {
          B.max(p, o);
        }
        break;
      }
      case TokenKind::Min: {
        int p = newpos(t.k);
        if (d.token_component[i] == c) {
          B.min(p + 1);
          B.min(p);
        } else {
          B.min(p);
        }
        break;
      }
      default: {
        int p = newpos(t.k), w1 = width(t.k), w2 = width(t.k + 1);
        bool pos = t.kind == TokenKind::CrossPos;
        // move each strand of the right block left past the whole left block
        for (int j = 0; j < w2; ++j)
          for (int s = w1 - 1; s >= 0; --s) B.cross(p + j + s, pos);
      }
    }
  }
  return analyze(B.tokens);
}

LinkDiagram stack_split(const LinkDiagram& d1, const LinkDiagram& d2) {
  auto toks = d1.tokens;
  toks.insert(toks.end(), d2.tokens.begin(), d2.tokens.end());
  return analyze(toks);
}

SurgeryPresentation parse_presentation(std::string_view text) {
  SurgeryPresentation sp;
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    try {
      if (j.contains("braid")) {
        BraidWord b;
        b.strands = j["braid"].at("strands").get<int>();
        b.word = j["braid"].at("word").get<std::vector<int>>();
        sp.diagram = from_braid(b);
      } else if (j.contains("tokens")) {
        std::vector<TangleToken> toks;
        for (auto& t : j["tokens"]) {
          if (t.is_string()) {
            toks.push_back(TangleToken::parse(t.get<std::string>()));
          } else {
            std::string line = t.at("kind").get<std::string>() + " " + std::to_string(t.at("k").get<int>()) + " " +
                               std::to_string(t.at("n").get<int>());
            if (t.contains("orient")) line += " " + t["orient"].get<std::string>();
            toks.push_back(TangleToken::parse(line));
          }
        }
        sp.diagram = analyze(std::move(toks));
      } else {
        throw ParseError("input needs \"braid\" or \"tokens\"");
      }
      if (!j.contains("framings")) throw ParseError("input needs \"framings\"");
      sp.framings = j["framings"].get<std::vector<int>>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad input field: ") + e.what());
    }
  } else {
    std::stringstream ss{std::string(text)};
    std::string line, body;
    bool have_framings = false;
    while (std::getline(ss, line)) {
      std::string probe = line.substr(0, line.find('#'));
      std::stringstream ls(probe);
      std::string word;
      if (ls >> word && (word == "framings" || word == "framing")) {
        int f;
        while (ls >> f) sp.framings.push_back(f);
        have_framings = true;
        body += "\n";
      } else {
        body += line + "\n";
      }
    }
    sp.diagram = parse_tokens(body);
    if (!have_framings) throw ParseError("missing 'framings' line");
  }
  if (static_cast<int>(sp.framings.size()) != sp.diagram.components)
    throw ParseError("expected " + std::to_string(sp.diagram.components) + " framings, got " +
                     std::to_string(sp.framings.size()));
  return sp;
}

}  // namespace lmo
