#include "symmetry.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

#include "json.hpp"

namespace exfill {

ExtSlope apply_mobius(const std::array<std::int64_t, 4>& mat,
                      const ExtSlope& s) {
  const auto [a, b, c, d] = mat;
  if (s.is_empty()) return s;
  // s = p/q (∞ is p=1, q=0): (a p + b q) / (c p + d q)
  return normalize_slope(a * s.p + b * s.q, c * s.p + d * s.q);
}

std::optional<FillingInstruction> apply_filling_map(
    const FillingMap& m, const FillingInstruction& f) {
  if (static_cast<int>(f.size()) != m.arity())
    throw std::invalid_argument("filling map arity mismatch");
  for (const auto& [pos, val] : m.guards)
    if (f[pos] != val) return std::nullopt;
  FillingInstruction out(f.size());
  for (int i = 0; i < m.arity(); ++i)
    out[i] = apply_mobius(m.mats[i], f[m.sigma[i]]);
  return out;
}

namespace {

constexpr std::array<std::int64_t, 4> kId{1, 0, 0, 1};

std::array<std::int64_t, 4> shift(std::int64_t k) { return {1, k, 0, 1}; }

FillingMap make_map(std::vector<int> sigma,
                    std::vector<std::array<std::int64_t, 4>> mats,
                    std::vector<std::pair<int, ExtSlope>> guards = {}) {
  FillingMap m;
  m.sigma = std::move(sigma);
  m.mats = std::move(mats);
  m.guards = std::move(guards);
  return m;
}

ExtSlope fr(std::int64_t p, std::int64_t q = 1) { return normalize_slope(p, q); }

}  // namespace

std::vector<FillingMap> builtin_map_families(Manifold which) {
  switch (which) {
    case Manifold::M2: {
      auto swap2 = make_map({1, 0}, {kId, kId});
      auto w1 = make_map({0, 1}, {kId, {-1, 0, 0, 1}}, {{0, fr(-1)}});
      auto w2 = make_map({0, 1}, {kId, {1, 0, 1, -1}}, {{0, fr(5)}});
      return {swap2, w1, w2};
    }
    case Manifold::M3: {
      auto cyc = make_map({2, 0, 1}, {kId, kId, kId});
      auto sw = make_map({1, 0, 2}, {kId, kId, kId});
      auto half = make_map({0, 1, 2}, {kId, {-1, 4, 0, 1}, {-1, 4, 0, 1}},
                           {{0, fr(1, 2)}});
      auto threehalf =
          make_map({0, 1, 2}, {kId, {2, -5, 1, -2}, {2, -5, 1, -2}},
                   {{0, fr(3, 2)}});
      auto fivehalf = make_map({0, 1, 2}, {kId, {1, -3, 1, -2}, {2, -3, 1, -1}},
                               {{0, fr(5, 2)}});
      auto four = make_map({0, 1, 2}, {kId, {1, -2, 1, -1}, {1, -2, 1, -1}},
                           {{0, fr(4)}});
      auto mm2 = make_map({0, 1, 2}, {kId, kId, {-1, -2, 0, 1}},
                          {{0, fr(-1)}, {1, fr(-2)}});
      auto m4 = make_map({0, 1, 2}, {kId, kId, {0, 1, 1, 0}},
                         {{0, fr(-1)}, {1, fr(4)}});
      return {cyc, sw, half, threehalf, fivehalf, four, mm2, m4};
    }
    case Manifold::M4: {
      auto cyc = make_map({3, 0, 1, 2}, {kId, kId, kId, kId});
      auto rev = make_map({3, 2, 1, 0}, {kId, kId, kId, kId});
      auto third = make_map(
          {0, 1, 2, 3},
          {{1, -2, 1, -1}, {1, -2, 1, -1}, {1, -2, 1, -1}, {1, -2, 1, -1}});
      auto endm = make_map({0, 1, 2, 3}, {{-1, 2, 0, 1},
                                          {1, 0, 1, -1},
                                          {-1, 2, 0, 1},
                                          {1, 0, 1, -1}});
      auto ind = make_map({0, 2, 1, 3}, {kId, shift(-1), shift(1), kId},
                          {{0, fr(-1)}});
      auto amph = make_map({0, 1, 2, 3}, {kId, kId, kId, {-1, -4, 0, 1}},
                           {{0, fr(-1)}, {1, fr(-2)}, {2, fr(-2)}});
      return {cyc, rev, third, endm, ind, amph};
    }
    case Manifold::M5: {
      auto cyc = make_map({4, 0, 1, 2, 3}, {kId, kId, kId, kId, kId});
      auto rev = make_map({4, 3, 2, 1, 0}, {kId, kId, kId, kId, kId});
      auto tr = make_map({1, 0, 2, 3, 4}, {{0, 1, 1, 0},
                                           {0, 1, 1, 0},
                                           {-1, 1, 0, 1},
                                           {1, 0, 1, -1},
                                           {-1, 1, 0, 1}});
      auto blow = make_map({0, 2, 3, 4, 1},
                           {kId, shift(-1), kId, shift(1), kId}, {{0, fr(-1)}});
      auto amph = make_map({0, 1, 2, 3, 4},
                           {kId, kId, kId, kId, {-1, -6, 0, 1}},
                           {{0, fr(-1)}, {1, fr(-2)}, {2, fr(-2)}, {3, fr(-2)}});
      return {cyc, rev, tr, blow, amph};
    }
  }
  throw std::logic_error("unknown manifold");
}

std::vector<FillingMap> map_family_from_json(const std::string& json_text) {
  nlohmann::json doc = nlohmann::json::parse(json_text);
  if (!doc.is_array()) throw std::invalid_argument("map family must be an array");
  std::vector<FillingMap> out;
  for (const auto& rec : doc) {
    FillingMap m;
    m.sigma = rec.at("sigma").get<std::vector<int>>();
    for (const auto& mat : rec.at("mats")) {
      auto v = mat.get<std::vector<std::int64_t>>();
      if (v.size() != 4)
        throw std::invalid_argument("matrix must have 4 entries");
      std::int64_t det = v[0] * v[3] - v[1] * v[2];
      if (det != 1 && det != -1)
        throw std::invalid_argument("matrix determinant must be ±1");
      m.mats.push_back({v[0], v[1], v[2], v[3]});
    }
    if (m.mats.size() != m.sigma.size())
      throw std::invalid_argument("sigma/mats size mismatch");
    if (rec.contains("guard"))
      for (const auto& g : rec.at("guard"))
        m.guards.emplace_back(g.at(0).get<int>(),
                              parse_slope(g.at(1).get<std::string>()));
    out.push_back(std::move(m));
  }
  return out;
}

OrbitResult orbit_closure(const FillingInstruction& f,
                          const std::vector<FillingMap>& maps, int depth_limit,
                          std::size_t cap) {
  OrbitResult res;
  res.elements.insert(f);
  std::vector<FillingInstruction> frontier{f};
  for (int d = 0; d < depth_limit && !frontier.empty(); ++d) {
    std::vector<FillingInstruction> next;
    for (const auto& u : frontier)
      for (const auto& m : maps)
        if (auto v = apply_filling_map(m, u))
          if (res.elements.insert(*v).second) {
            next.push_back(std::move(*v));
            if (res.elements.size() > cap)
              throw std::runtime_error("orbit closure exceeded element cap");
          }
    frontier = std::move(next);
  }
  res.stabilized = frontier.empty();
  return res;
}

ClassPartition partition_classes(const std::vector<FillingInstruction>& input,
                                 const std::vector<FillingMap>& maps,
                                 int depth_limit) {
  // Discover tuples reachable from the input and union x with m(x): classes
  // are components of the symmetric-transitive closure of map application.
  std::map<FillingInstruction, int> id;
  std::vector<int> parent;
  auto get_id = [&](const FillingInstruction& f) {
    auto [it, fresh] = id.emplace(f, static_cast<int>(parent.size()));
    if (fresh) parent.push_back(it->second);
    return it->second;
  };
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };

  std::vector<FillingInstruction> frontier;
  for (const auto& f : input) {
    std::size_t before = id.size();
    get_id(f);
    if (id.size() > before) frontier.push_back(f);
  }
  for (int d = 0; d < depth_limit && !frontier.empty(); ++d) {
    std::vector<FillingInstruction> next;
    for (const auto& u : frontier) {
      int iu = get_id(u);
      for (const auto& m : maps)
        if (auto v = apply_filling_map(m, u)) {
          std::size_t before = id.size();
          int iv = get_id(*v);
          unite(iu, iv);
          if (id.size() > before) next.push_back(std::move(*v));
        }
    }
    frontier = std::move(next);
  }

  std::map<int, ClassPartition::Class> by_root;
  for (const auto& [f, i] : id) {
    auto& cls = by_root[find(i)];
    if (cls.representative.empty() || f < cls.representative)
      cls.representative = f;
  }
  for (const auto& f : input) by_root[find(id.at(f))].members.push_back(f);

  ClassPartition out;
  for (auto& [root, cls] : by_root)
    if (!cls.members.empty()) out.classes.push_back(std::move(cls));
  std::sort(out.classes.begin(), out.classes.end(),
            [](const auto& a, const auto& b) {
              return a.representative < b.representative;
            });
  return out;
}

std::string instruction_text(const FillingInstruction& f) {
  std::string s = "[";
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) s += ",";
    s += slope_text(f[i]);
  }
  s += "]";
  return s;
}

FillingInstruction parse_instruction(const std::string& text) {
  FillingInstruction out;
  std::size_t i = text.find('[');
  std::size_t end = text.rfind(']');
  if (i == std::string::npos || end == std::string::npos || end < i)
    throw std::invalid_argument("instruction must look like [(p,q),...]");
  ++i;
  while (i < end) {
    std::size_t open = text.find('(', i);
    if (open == std::string::npos || open >= end) break;
    std::size_t close = text.find(')', open);
    if (close == std::string::npos || close > end)
      throw std::invalid_argument("instruction must look like [(p,q),...]");
    out.push_back(parse_slope(text.substr(open, close - open + 1)));
    i = close + 1;
  }
  if (out.empty())
    throw std::invalid_argument("instruction must contain at least one slope");
  return out;
}

}  // namespace exfill
