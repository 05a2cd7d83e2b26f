#pragma once

// Plumbing forests: every component an unknot, linking 1 along tree edges,
// framings in Q u {inf}. Moves (slam-dunk, inf-deletion, rational
// expansion) return new forests; node ids are never reused.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lenslat/arith.hpp"
#include "lenslat/linear_lattice.hpp"
#include "lenslat/matrix.hpp"

namespace lenslat {

/// A framing: an exact rational or infinity.
class Slope {
 public:
  Slope() = default;
  Slope(Rational r) : value_(r) {}  // NOLINT(google-explicit-constructor)
  Slope(Int n) : value_(Rational(n)) {}  // NOLINT(google-explicit-constructor)
  static Slope infinity() {
    Slope s;
    s.value_.reset();
    return s;
  }

  bool is_infinite() const { return !value_.has_value(); }
  bool is_integral() const { return value_ && value_->is_integer(); }
  const Rational& value() const {
    if (!value_) throw std::domain_error("infinite slope has no rational value");
    return *value_;
  }

  /// 1/s with 1/0 = inf and 1/inf = 0.
  Slope reciprocal() const {
    if (!value_) return Slope(Rational(0));
    if (value_->sign() == 0) return infinity();
    return Slope(value_->inverse());
  }

  /// "inf", "n" or "n/d".
  std::string str() const {
    if (!value_) return "inf";
    std::ostringstream os;
    os << *value_;
    return os.str();
  }

  static Slope parse(std::string_view s) {
    if (s == "inf" || s == "oo" || s == "infinity") return infinity();
    return Slope(Rational::parse(s));
  }

  friend bool operator==(const Slope&, const Slope&) = default;

 private:
  std::optional<Rational> value_ = Rational(0);
};

class PlumbingForest {
 public:
  void add_node(const std::string& id, Slope framing) {
    if (id.empty()) throw std::invalid_argument("empty node id");
    if (framing_.count(id)) throw std::invalid_argument("duplicate node id '" + id + "'");
    if (retired_.count(id)) throw std::invalid_argument("node id '" + id + "' was used before");
    order_.push_back(id);
    framing_[id] = framing;
    adj_[id];
  }

  void add_edge(const std::string& a, const std::string& b) {
    require(a);
    require(b);
    if (a == b) throw std::invalid_argument("self-loop at '" + a + "'");
    if (adj_[a].count(b)) throw std::invalid_argument("duplicate edge " + a + "--" + b);
    if (component_of(a) == component_of(b)) throw std::invalid_argument("edge " + a + "--" + b + " closes a cycle");
    adj_[a].insert(b);
    adj_[b].insert(a);
  }

  void remove_node(const std::string& id) {
    require(id);
    for (const auto& nb : adj_[id]) adj_[nb].erase(id);
    adj_.erase(id);
    framing_.erase(id);
    order_.erase(std::find(order_.begin(), order_.end(), id));
    retired_.insert(id);
  }

  void set_framing(const std::string& id, Slope s) {
    require(id);
    framing_[id] = s;
  }

  bool contains(const std::string& id) const { return framing_.count(id) != 0; }
  std::size_t size() const { return order_.size(); }
  const std::vector<std::string>& nodes() const { return order_; }
  const Slope& framing(const std::string& id) const {
    require(id);
    return framing_.at(id);
  }
  std::size_t degree(const std::string& id) const {
    require(id);
    return adj_.at(id).size();
  }
  /// Neighbours in node order.
  std::vector<std::string> neighbors(const std::string& id) const {
    require(id);
    std::vector<std::string> out;
    for (const auto& n : order_)
      if (adj_.at(id).count(n)) out.push_back(n);
    return out;
  }
  bool has_edge(const std::string& a, const std::string& b) const {
    return contains(a) && adj_.at(a).count(b) != 0;
  }

  /// Connected components, each listed in node order.
  std::vector<std::vector<std::string>> components() const {
    std::map<std::string, std::size_t> comp;
    std::vector<std::vector<std::string>> out;
    for (const auto& id : order_) {
      if (comp.count(id)) continue;
      std::size_t c = out.size();
      std::set<std::string> seen{id};
      std::vector<std::string> stack{id};
      while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (const auto& nb : adj_.at(v))
          if (seen.insert(nb).second) stack.push_back(nb);
      }
      out.emplace_back();
      for (const auto& n : order_)
        if (seen.count(n)) {
          comp[n] = c;
          out.back().push_back(n);
        }
    }
    return out;
  }

  /// An id starting with `base` not used now or before.
  std::string fresh_id(const std::string& base) const {
    for (std::size_t k = 1;; ++k) {
      std::string id = base + "." + std::to_string(k);
      if (!framing_.count(id) && !retired_.count(id)) return id;
    }
  }

  /// One component per line: `id(framing)` nodes joined by `--`. A node's
  /// framing may be given at any mention; blank lines and `#` comments skip.
  static PlumbingForest parse(std::string_view text) {
    struct Mention {
      std::string id;
      std::optional<Slope> framing;
    };
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    auto parse_mention = [&](std::string tok) {
      tok = trim(tok);
      Mention m;
      auto open = tok.find('(');
      if (open == std::string::npos) {
        m.id = tok;
      } else {
        if (tok.back() != ')') throw std::invalid_argument("bad node '" + tok + "'");
        m.id = trim(tok.substr(0, open));
        m.framing = Slope::parse(trim(tok.substr(open + 1, tok.size() - open - 2)));
      }
      if (m.id.empty() || m.id.find_first_of("()- \t") != std::string::npos)
        throw std::invalid_argument("bad node id in '" + tok + "'");
      return m;
    };

    std::vector<std::vector<Mention>> lines;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      std::vector<Mention> chain;
      std::size_t pos = 0;
      while (true) {
        auto dd = line.find("--", pos);
        chain.push_back(parse_mention(line.substr(pos, dd == std::string::npos ? std::string::npos : dd - pos)));
        if (dd == std::string::npos) break;
        pos = dd + 2;
      }
      lines.push_back(std::move(chain));
    }

    PlumbingForest f;
    std::map<std::string, Slope> declared;
    std::vector<std::string> first_seen;
    for (const auto& chain : lines)
      for (const auto& m : chain) {
        if (std::find(first_seen.begin(), first_seen.end(), m.id) == first_seen.end()) first_seen.push_back(m.id);
        if (!m.framing) continue;
        auto it = declared.find(m.id);
        if (it != declared.end() && !(it->second == *m.framing))
          throw std::invalid_argument("conflicting framings for '" + m.id + "'");
        declared[m.id] = *m.framing;
      }
    for (const auto& id : first_seen) {
      auto it = declared.find(id);
      if (it == declared.end()) throw std::invalid_argument("node '" + id + "' has no framing");
      f.add_node(id, it->second);
    }
    for (const auto& chain : lines)
      for (std::size_t k = 0; k + 1 < chain.size(); ++k) f.add_edge(chain[k].id, chain[k + 1].id);
    return f;
  }

  /// Inverse of parse: isolated nodes alone, every other edge `u--v` in
  /// depth-first order, framings at first mention.
  std::string to_text() const {
    std::ostringstream os;
    std::set<std::string> announced;
    auto mention = [&](const std::string& id) {
      if (announced.insert(id).second) return id + "(" + framing_.at(id).str() + ")";
      return id;
    };
    for (const auto& comp : components()) {
      if (comp.size() == 1) {
        os << mention(comp[0]) << "\n";
        continue;
      }
      std::set<std::string> seen{comp[0]};
      std::function<void(const std::string&)> dfs = [&](const std::string& v) {
        for (const auto& nb : neighbors(v)) {
          if (!seen.insert(nb).second) continue;
          std::string a = mention(v);
          os << a << "--" << mention(nb) << "\n";
          dfs(nb);
        }
      };
      dfs(comp[0]);
    }
    return os.str();
  }

 private:
  void require(const std::string& id) const {
    if (!framing_.count(id)) throw std::invalid_argument("no node '" + id + "'");
  }

  std::string component_of(const std::string& id) const {
    for (const auto& comp : components())
      if (std::find(comp.begin(), comp.end(), id) != comp.end()) return comp.front();
    return {};
  }

  std::vector<std::string> order_;
  std::map<std::string, Slope> framing_;
  std::map<std::string, std::set<std::string>> adj_;
  std::set<std::string> retired_;
};

/// Framings on the diagonal, 1 on tree edges; rows in node order.
inline IntMatrix linking_matrix(const PlumbingForest& f) {
  const auto& ids = f.nodes();
  IntMatrix m = zero_matrix(ids.size(), ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const Slope& s = f.framing(ids[i]);
    if (!s.is_integral()) throw std::invalid_argument("linking_matrix: framing of '" + ids[i] + "' is not integral");
    m[i][i] = s.value().num();
    for (std::size_t j = 0; j < ids.size(); ++j)
      if (i != j && f.has_edge(ids[i], ids[j])) m[i][j] = 1;
  }
  return m;
}

/// Removes an inf-framed node; its neighbours become split from each other.
inline PlumbingForest delete_infinity(PlumbingForest f, const std::string& id) {
  if (!f.framing(id).is_infinite()) throw std::invalid_argument("delete_infinity: '" + id + "' has finite framing");
  f.remove_node(id);
  return f;
}

/// Deletes a leaf framed r and replaces its neighbour's framing f by f - 1/r.
/// r = inf just deletes the leaf; r = 0 sends the neighbour to inf.
inline PlumbingForest slam_dunk(PlumbingForest f, const std::string& leaf) {
  const Slope r = f.framing(leaf);
  if (r.is_infinite() && f.degree(leaf) <= 1) {
    f.remove_node(leaf);
    return f;
  }
  if (f.degree(leaf) != 1) throw std::invalid_argument("slam_dunk: '" + leaf + "' is not a leaf");
  const std::string nb = f.neighbors(leaf).front();
  const Slope& fn = f.framing(nb);
  if (!fn.is_integral())
    throw std::invalid_argument("slam_dunk: neighbour '" + nb + "' needs an integral framing, has " + fn.str());
  Slope inv = r.reciprocal();
  Slope updated = inv.is_infinite() ? Slope::infinity() : Slope(fn.value() - inv.value());
  f.remove_node(leaf);
  f.set_framing(nb, updated);
  return f;
}

/// Replaces every non-integral framing r by floor(r) with a hanging chain of
/// new nodes, the reverse of slam-dunking that chain back in.
inline PlumbingForest expand_rational(PlumbingForest f) {
  const std::vector<std::string> ids = f.nodes();
  for (const auto& id : ids) {
    if (f.framing(id).is_infinite()) {
      if (f.degree(id) > 0) throw std::invalid_argument("expand_rational: inf framing on non-isolated '" + id + "'");
      continue;
    }
    std::string cur = id;
    Rational r = f.framing(id).value();
    while (!r.is_integer()) {
      Int a = r.floor();
      Rational next = (Rational(a) - r).inverse();  // a - 1/next = r
      f.set_framing(cur, Slope(Rational(a)));
      std::string fresh = f.fresh_id(id);
      f.add_node(fresh, Slope(next));
      f.add_edge(cur, fresh);
      cur = fresh;
      r = next;
    }
  }
  return f;
}

/// |H_1| of the surgered manifold: inf nodes deleted, rational framings
/// expanded, |det| of the linking matrix. 0 means H_1 is infinite.
inline Int h1_order(const PlumbingForest& forest) {
  PlumbingForest f = forest;
  for (const auto& id : forest.nodes())
    if (f.framing(id).is_infinite()) f = delete_infinity(f, id);
  f = expand_rational(f);
  Int d = bareiss_determinant(linking_matrix(f));
  return d < 0 ? checked::neg(d) : d;
}

struct CanonicalSummands {
  std::vector<LensSpace> lens;  // sorted canonical representatives
  Int s1xs2 = 0;

  std::string str() const {
    std::string s;
    for (const auto& l : lens) s += (s.empty() ? "" : "#") + l.str();
    for (Int k = 0; k < s1xs2; ++k) s += (s.empty() ? "" : "#") + std::string("S1xS2");
    return s.empty() ? "S3" : s;
  }

  friend bool operator==(const CanonicalSummands&, const CanonicalSummands&) = default;
};

/// U(r), surgery on the unknot with slope r.
struct UnknotSurgery {
  enum class Kind { kSphere, kS1xS2, kLens };
  Kind kind = Kind::kSphere;
  std::optional<LensSpace> lens;
};

/// U(-p/q) = L(p, q); U(p/q) = -L(p, q) = L(p, p - q); U(0) = S1xS2;
/// U(inf) and U(+-1/k) = S3.
inline UnknotSurgery unknot_surgery(const Slope& s) {
  UnknotSurgery u;
  if (s.is_infinite()) return u;
  const Rational& r = s.value();
  const Int a = r.num(), b = r.den();
  if (a == 0) {
    u.kind = UnknotSurgery::Kind::kS1xS2;
    return u;
  }
  if (a == 1 || a == -1) return u;
  u.kind = UnknotSurgery::Kind::kLens;
  if (a < 0) {
    Int p = -a;
    u.lens = LensSpace(p, mod(b, p));
  } else {
    u.lens = LensSpace(a, mod(b, a)).mirror();
  }
  return u;
}

/// Collapses every split linear chain to a single unknot: inf nodes are
/// deleted, then leaves with an integral neighbour are slam-dunked until each
/// component is one node. `from_end` picks the last eligible leaf (in node
/// order) instead of the first. Returns the surviving framings in node order.
inline std::vector<Slope> collapse_chains(PlumbingForest f, bool from_end = false) {
  for (const auto& id : f.nodes())
    if (f.degree(id) > 2) throw std::invalid_argument("identify_summands: '" + id + "' has degree > 2");
  while (true) {
    auto comps = f.components();
    if (from_end) std::reverse(comps.begin(), comps.end());
    auto it = std::find_if(comps.begin(), comps.end(), [](const auto& c) { return c.size() > 1; });
    if (it == comps.end()) break;
    const auto& comp = *it;
    auto inf = std::find_if(comp.begin(), comp.end(), [&](const auto& id) { return f.framing(id).is_infinite(); });
    if (inf != comp.end()) {
      f = delete_infinity(f, *inf);
      continue;
    }
    std::vector<std::string> leaves;
    for (const auto& id : comp)
      if (f.degree(id) == 1 && f.framing(f.neighbors(id).front()).is_integral()) leaves.push_back(id);
    if (leaves.empty())
      throw std::invalid_argument("identify_summands: chain at '" + comp.front() +
                                  "' has non-integral interior framings");
    f = slam_dunk(f, from_end ? leaves.back() : leaves.front());
  }
  std::vector<Slope> out;
  for (const auto& id : f.nodes()) out.push_back(f.framing(id));
  return out;
}

/// Lens-space summands of a forest of split linear chains.
inline CanonicalSummands identify_summands(const PlumbingForest& f, bool from_end = false) {
  CanonicalSummands out;
  for (const auto& s : collapse_chains(f, from_end)) {
    auto u = unknot_surgery(s);
    if (u.kind == UnknotSurgery::Kind::kS1xS2) ++out.s1xs2;
    if (u.kind == UnknotSurgery::Kind::kLens) out.lens.push_back(u.lens->canonical());
  }
  std::sort(out.lens.begin(), out.lens.end());
  return out;
}

/// AHU canonical string of the tree containing `root`, rooted there.
inline std::string rooted_code(const PlumbingForest& f, const std::string& root, const std::string& parent = {}) {
  std::vector<std::string> kids;
  for (const auto& nb : f.neighbors(root))
    if (nb != parent) kids.push_back(rooted_code(f, nb, root));
  std::sort(kids.begin(), kids.end());
  std::string s = "(" + f.framing(root).str();
  for (const auto& k : kids) s += k;
  return s + ")";
}

/// Isomorphism of framed forests (node ids ignored).
inline bool forests_isomorphic(const PlumbingForest& a, const PlumbingForest& b) {
  auto codes = [](const PlumbingForest& f) {
    std::vector<std::string> out;
    for (const auto& comp : f.components()) {
      std::string best;
      for (const auto& r : comp) {
        std::string c = rooted_code(f, r);
        if (best.empty() || c < best) best = c;
      }
      out.push_back(best);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  return a.size() == b.size() && codes(a) == codes(b);
}

/// Left diagram: 0-framed central circle B meeting F (framed 0) and three
/// circles framed -2, 3, 5.
inline PlumbingForest figure1_left(Slope f_framing = Slope(Rational(0))) {
  PlumbingForest f;
  f.add_node("F", f_framing);
  f.add_node("B", Slope(Rational(0)));
  f.add_node("a", Slope(Rational(-2)));
  f.add_node("b", Slope(Rational(3)));
  f.add_node("c", Slope(Rational(5)));
  for (const char* s : {"F", "a", "b", "c"}) f.add_edge(s, "B");
  return f;
}

/// Right diagram: split unknots framed -2, 3, 5.
inline PlumbingForest figure1_right() {
  PlumbingForest f;
  f.add_node("a", Slope(Rational(-2)));
  f.add_node("b", Slope(Rational(3)));
  f.add_node("c", Slope(Rational(5)));
  return f;
}

inline CanonicalSummands figure1_expected() {
  CanonicalSummands s;
  s.lens = {LensSpace(2, 1), LensSpace(3, 2), LensSpace(5, 4)};
  return s;
}

struct Figure1Report {
  struct Check {
    std::string name;
    bool ok = false;
    std::string detail;
  };
  std::vector<Check> checks;
  std::vector<std::string> transcript;
  std::optional<CanonicalSummands> left_summands, right_summands;
  Int h1_left = -1, h1_right = -1;

  bool passed() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
  }
};

/// Reduces the left diagram by slam-dunking F and deleting the resulting
/// inf-framed circle, then compares with the right diagram.
inline Figure1Report verify_figure1(const PlumbingForest& left = figure1_left()) {
  Figure1Report rep;
  const PlumbingForest right = figure1_right();
  const CanonicalSummands expected = figure1_expected();
  auto check = [&](std::string name, bool ok, std::string detail = {}) {
    rep.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  rep.h1_left = h1_order(left);
  rep.h1_right = h1_order(right);
  check("h1 left = 30", rep.h1_left == 30, std::to_string(rep.h1_left));
  check("h1 right = 30", rep.h1_right == 30, std::to_string(rep.h1_right));

  rep.right_summands = identify_summands(right);
  check("right summands", *rep.right_summands == expected, rep.right_summands->str());

  PlumbingForest cur = left;
  bool reduced = false;
  try {
    if (!cur.contains("F")) throw std::invalid_argument("no node F");
    const std::string nb = cur.neighbors("F").empty() ? std::string() : cur.neighbors("F").front();
    cur = slam_dunk(cur, "F");
    rep.transcript.push_back("slam-dunk F into " + nb + ": " + nb + " framed " + cur.framing(nb).str());
    if (cur.framing(nb).is_infinite()) {
      cur = delete_infinity(cur, nb);
      rep.transcript.push_back("delete inf-framed " + nb);
      reduced = true;
    } else {
      check("central circle becomes inf", false, nb + " framed " + cur.framing(nb).str());
    }
  } catch (const std::exception& e) {
    check("reduction moves", false, e.what());
  }
  check("reduced left isomorphic to right", reduced && forests_isomorphic(cur, right), cur.to_text());

  try {
    rep.left_summands = identify_summands(reduced ? cur : left);
    check("left summands", *rep.left_summands == expected, rep.left_summands->str());
  } catch (const std::exception& e) {
    check("left summands", false, e.what());
  }
  return rep;
}

}  // namespace lenslat
