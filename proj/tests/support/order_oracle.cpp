#include "order_oracle.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace coql::testing {

namespace {

struct Arc {
  std::size_t from;
  std::string label;
  std::size_t to;
};

std::string identity_of(const order::ModelDescription& desc, std::size_t i) {
  const std::size_t n = desc.elements.size();
  if (i == n) return "⊤";
  if (i == n + 1) return "⊥";
  std::vector<std::string> names;
  for (std::optional<std::size_t> cur = i; cur && desc.elements[*cur].parent; cur = desc.elements[*cur].parent) {
    names.push_back(desc.elements[*cur].name);
  }
  std::string out;
  for (auto it = names.rbegin(); it != names.rend(); ++it) out += (out.empty() ? "" : "/") + *it;
  return out;
}

std::vector<Arc> all_arcs(const order::ModelDescription& desc) {
  const std::size_t n = desc.elements.size();
  std::vector<Arc> arcs;
  std::vector<int> outs(n + 2, 0), ins(n + 2, 0);
  for (const auto& e : desc.edges) {
    arcs.push_back({e.source, e.label, e.target});
    ++outs[e.source];
    ++ins[e.target];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!desc.elements[i].parent) continue;  // the root
    if (outs[i] == 0) arcs.push_back({i, "⊤:" + identity_of(desc, i), n});
    if (ins[i] == 0) arcs.push_back({n + 1, "⊥:" + identity_of(desc, i), i});
  }
  return arcs;
}

std::vector<std::string> walk(const order::ModelDescription& desc, std::size_t from, std::optional<std::size_t> stop,
                              bool up) {
  auto arcs = all_arcs(desc);
  std::vector<std::string> out;
  std::vector<std::string> labels;
  std::function<void(std::size_t)> visit = [&](std::size_t node) {
    for (const auto& a : arcs) {
      if ((up ? a.from : a.to) != node) continue;
      std::size_t next = up ? a.to : a.from;
      labels.push_back(a.label);
      if (!stop || next == *stop) {
        std::vector<std::string> ordered = labels;
        if (!up) std::reverse(ordered.begin(), ordered.end());
        std::string text;
        for (const auto& l : ordered) text += (text.empty() ? "" : ".") + l;
        out.push_back(text);
      }
      visit(next);
      labels.pop_back();
    }
  };
  visit(from);
  std::sort(out.begin(), out.end());
  return out;
}

bool within(const order::ModelDescription& desc, std::size_t node, std::size_t ancestor) {
  const std::size_t n = desc.elements.size();
  if (node == ancestor) return true;
  if (node >= n) return false;  // bounds sit directly under the root
  for (auto cur = desc.elements[node].parent; cur; cur = desc.elements[*cur].parent) {
    if (*cur == ancestor) return true;
  }
  return false;
}

}  // namespace

Verdict validate(const order::ModelDescription& desc) {
  const std::size_t n = desc.elements.size();
  auto bad = [](std::string why) { return Verdict{false, std::move(why)}; };
  if (n == 0) return desc.edges.empty() ? Verdict{} : bad("edges without elements");

  std::size_t roots = 0, root = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = desc.elements[i].parent;
    if (!p) {
      ++roots;
      root = i;
    } else if (*p >= n) {
      return bad("parent index out of range or a bound");
    }
  }
  if (roots != 1) return bad("root count " + std::to_string(roots));
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t steps = 0;
    auto cur = desc.elements[i].parent;
    while (cur && steps <= n) {
      cur = desc.elements[*cur].parent;
      ++steps;
    }
    if (steps > n) return bad("parent cycle");
  }
  std::set<std::pair<std::size_t, std::string>> names{{root, "⊤"}, {root, "⊥"}};
  for (std::size_t i = 0; i < n; ++i) {
    const auto& el = desc.elements[i];
    if (el.name.empty()) return bad("unnamed element");
    if (el.parent && !names.insert({*el.parent, el.name}).second) return bad("duplicate sibling name");
  }

  const std::size_t top = n, bottom = n + 1, total = n + 2;
  std::set<std::pair<std::size_t, std::string>> used;
  std::vector<std::vector<bool>> reach(total, std::vector<bool>(total, false));
  for (const auto& e : desc.edges) {
    if (e.source >= total || e.target >= total) return bad("endpoint out of range");
    if (e.source == root || e.target == root) return bad("root as endpoint");
    if (e.source == top || e.target == bottom) return bad("edge leaves top or enters bottom");
    if (e.label.empty() || e.label.find('.') != std::string::npos || e.label.rfind("⊤:", 0) == 0 ||
        e.label.rfind("⊥:", 0) == 0) {
      return bad("bad label");
    }
    if (!used.insert({e.source, e.label}).second) return bad("duplicate label");
    reach[e.source][e.target] = true;
  }
  for (std::size_t k = 0; k < total; ++k) {
    for (std::size_t i = 0; i < total; ++i) {
      for (std::size_t j = 0; j < total; ++j) {
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
      }
    }
  }
  for (std::size_t i = 0; i < total; ++i) {
    if (reach[i][i]) return bad("cycle");
  }
  for (std::size_t s = 0; s < total; ++s) {
    std::size_t outs = 0;
    bool to_top = false;
    for (const auto& e : desc.edges) {
      if (e.source != s) continue;
      ++outs;
      to_top = to_top || e.target == top;
    }
    if (to_top && outs != 1) return bad("primitive element with extra super-element");
  }
  for (const auto& e : desc.edges) {
    if (e.source == bottom || e.target == top) continue;
    auto p = desc.elements[e.source].parent;
    if (!p || *p == root) continue;
    bool ok = false;
    for (const auto& pe : desc.edges) {
      if (pe.source == *p && pe.label == e.label && within(desc, e.target, pe.target)) ok = true;
    }
    if (!ok) return bad("syntactic constraint");
  }
  return {};
}

std::vector<std::string> paths_up(const order::ModelDescription& desc, std::size_t from,
                                  std::optional<std::size_t> stop) {
  return walk(desc, from, stop, true);
}

std::vector<std::string> paths_down(const order::ModelDescription& desc, std::size_t from,
                                    std::optional<std::size_t> stop) {
  return walk(desc, from, stop, false);
}

OraclePrimitive primitive(const order::ModelDescription& desc) {
  const std::size_t n = desc.elements.size();
  const std::size_t top = n, bottom = n + 1;
  OraclePrimitive out;
  out.columns = paths_up(desc, bottom, top);
  const std::size_t width = out.columns.size();
  out.rows[top].push_back(std::vector<std::uint8_t>(width, 0));
  out.rows[bottom].push_back(std::vector<std::uint8_t>(width, 1));
  for (std::size_t e = 0; e < n; ++e) {
    if (!desc.elements[e].parent) continue;
    auto ups = paths_up(desc, e, top);
    auto& rows = out.rows[e];
    for (const auto& f : paths_down(desc, e, bottom)) {
      std::vector<std::uint8_t> row(width, 0);
      for (const auto& d : ups) {
        auto it = std::find(out.columns.begin(), out.columns.end(), f + "." + d);
        if (it != out.columns.end()) row[static_cast<std::size_t>(it - out.columns.begin())] = 1;
      }
      rows.push_back(std::move(row));
    }
  }
  return out;
}

}  // namespace coql::testing
