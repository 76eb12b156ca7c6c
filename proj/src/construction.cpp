#include "facetlab/construction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <limits>

namespace facetlab {

namespace {

std::string join(std::initializer_list<int> idx) {
  std::string out;
  for (int v : idx) {
    if (!out.empty()) out += ',';
    out += std::to_string(v);
  }
  return out;
}

// "_3" for a single digit, "_{10}" or "_{1,2}" otherwise; same for "^".
std::string script(char mark, const std::string& body) {
  if (body.size() == 1) return std::string(1, mark) + body;
  return std::string(1, mark) + "{" + body + "}";
}

std::string name(const std::string& base, const std::string& sup, std::initializer_list<int> sub) {
  return base + (sup.empty() ? "" : script('^', sup)) + script('_', join(sub));
}

}  // namespace

Construction Construction::build(int n, int r, int s, int t) {
  if (n < 1 || r < 1 || s < 1 || t < 1)
    throw std::invalid_argument("construction parameters must be at least 1");
  const long double rs = static_cast<long double>(r) * s;
  const long double nv = 1.0L + 2.0L * n + 2.0L * n * rs;
  const long double max_cost = rs * (std::ldexp(1.0L, 2 * n + 1) + 2.0L);
  // Objective sums |V| distances, each a path of at most |V| edges.
  if (2 * n + 1 >= 62 || max_cost * nv * nv >= std::ldexp(1.0L, 62))
    throw ParameterOverflow("costs of G_{n,r,s,t} exceed 64-bit scaled integers");

  ConstructionParams p{n, r, s, t};
  const int RS = r * s;
  const int level_size = 2 + 2 * RS;
  auto U = [&](int i) { return i > n ? 0 : 1 + (i - 1) * level_size; };
  auto W = [&](int i) { return i > n ? 0 : 2 + (i - 1) * level_size; };
  auto A = [&](int i, int j, int k) { return 3 + (i - 1) * level_size + (j - 1) * s + (k - 1); };
  auto B = [&](int i, int j) { return 3 + (i - 1) * level_size + RS + (j - 1); };

  std::vector<std::string> vnames(static_cast<std::size_t>(1 + n * level_size));
  vnames[0] = "t";
  for (int i = 1; i <= n; ++i) {
    vnames[static_cast<std::size_t>(U(i))] = name("u", "", {i});
    vnames[static_cast<std::size_t>(W(i))] = name("w", "", {i});
    for (int j = 1; j <= r; ++j)
      for (int k = 1; k <= s; ++k) vnames[static_cast<std::size_t>(A(i, j, k))] = name("a", "", {i, j, k});
    for (int j = 1; j <= RS; ++j) vnames[static_cast<std::size_t>(B(i, j))] = name("b", "", {i, j});
  }

  std::vector<Edge> edges;
  std::vector<EdgeRole> roles;
  std::vector<std::vector<EdgeId>> b1(static_cast<std::size_t>(n));
  std::vector<std::vector<EdgeId>> a1(static_cast<std::size_t>(n * r));
  std::vector<std::vector<EdgeId>> multi;
  std::vector<std::string> multi_names;
  std::vector<int> b0_ids, a0_ids, u1_ids, u0_ids, w_ids, w0_ids;

  auto add = [&](int tail, int head, Cost cost, std::string nm, EdgeRole role) {
    edges.push_back(Edge{tail, head, cost, std::move(nm)});
    roles.push_back(role);
    return static_cast<EdgeId>(edges.size() - 1);
  };
  // t parallel copies; returns the multi-edge id.
  auto copies = [&](int tail, int head, Cost cost, EdgeKind kind, const std::string& base,
                    const std::string& sup0, std::initializer_list<int> sub, const std::string& group,
                    int i, int j, int k) {
    const int id = static_cast<int>(multi.size());
    multi.emplace_back();
    multi_names.push_back(group);
    for (int l = 1; l <= t; ++l) {
      EdgeRole role{kind, i, j, k, l, id};
      multi.back().push_back(
          add(tail, head, cost, name(base, sup0 + "," + std::to_string(l), sub), role));
    }
    return id;
  };

  for (int i = 1; i <= n; ++i) {
    const Cost pow_odd = Cost{1} << (2 * i + 1);
    const Cost pow_even = Cost{1} << (2 * i);
    for (int j = 1; j <= r; ++j) {
      for (int k = 1; k <= s; ++k) {
        const int head = k < s ? A(i, j, k + 1) : B(i, 1);
        a1[static_cast<std::size_t>((i - 1) * r + (j - 1))].push_back(
            add(A(i, j, k), head, 0, name("a", "1", {i, j, k}), EdgeRole{EdgeKind::A1, i, j, k, 0, -1}));
        a0_ids.push_back(copies(A(i, j, k), U(i + 1), RS * pow_odd + (k - 1), EdgeKind::A0, "a", "0",
                                {i, j, k}, name("A", "0", {i, j, k}), i, j, k));
      }
    }
    for (int j = 1; j <= RS; ++j) {
      const int head = j < RS ? B(i, j + 1) : W(i + 1);
      b1[static_cast<std::size_t>(i - 1)].push_back(
          add(B(i, j), head, 0, name("b", "1", {i, j}), EdgeRole{EdgeKind::B1, i, j, 0, 0, -1}));
      b0_ids.push_back(copies(B(i, j), U(i + 1), RS * (pow_odd + 1) + (j - 1), EdgeKind::B0, "b", "0",
                              {i, j}, name("B", "0", {i, j}), i, j, 0));
    }
    u1_ids.push_back(copies(U(i), B(i, 1), 0, EdgeKind::U1, "u", "1", {i}, name("U", "1", {i}), i, 0, 0));
    u0_ids.push_back(
        copies(U(i), U(i + 1), RS * pow_even, EdgeKind::U0, "u", "0", {i}, name("U", "0", {i}), i, 0, 0));
    for (int j = 1; j <= r; ++j) {
      w_ids.push_back(copies(W(i), A(i, j, 1), 0, EdgeKind::W, "w", std::to_string(j), {i},
                             name("W", std::to_string(j), {i}), i, j, 0));
    }
    w0_ids.push_back(
        copies(W(i), W(i + 1), RS * pow_even, EdgeKind::W0, "w", "0", {i}, name("W", "0", {i}), i, 0, 0));
  }

  Construction c(p, Digraph(std::move(vnames), 0, std::move(edges), RS));
  c.b1_ = std::move(b1);
  c.a1_ = std::move(a1);
  c.multi_ = std::move(multi);
  c.multi_names_ = std::move(multi_names);
  c.roles_ = std::move(roles);
  c.b0_ids_ = std::move(b0_ids);
  c.a0_ids_ = std::move(a0_ids);
  c.u1_ids_ = std::move(u1_ids);
  c.u0_ids_ = std::move(u0_ids);
  c.w_ids_ = std::move(w_ids);
  c.w0_ids_ = std::move(w0_ids);
  return c;
}

VertexId Construction::u(int i) const { return i > n() ? 0 : 1 + (i - 1) * (2 + 2 * rs()); }
VertexId Construction::w(int i) const { return i > n() ? 0 : 2 + (i - 1) * (2 + 2 * rs()); }
VertexId Construction::a(int i, int j, int k) const {
  return 3 + (i - 1) * (2 + 2 * rs()) + (j - 1) * s() + (k - 1);
}
VertexId Construction::b(int i, int j) const { return 3 + (i - 1) * (2 + 2 * rs()) + rs() + (j - 1); }

int Construction::b0_id(int i, int j) const { return b0_ids_[static_cast<std::size_t>((i - 1) * rs() + (j - 1))]; }
int Construction::a0_id(int i, int j, int k) const {
  return a0_ids_[static_cast<std::size_t>(((i - 1) * r() + (j - 1)) * s() + (k - 1))];
}
int Construction::u1_id(int i) const { return u1_ids_[static_cast<std::size_t>(i - 1)]; }
int Construction::u0_id(int i) const { return u0_ids_[static_cast<std::size_t>(i - 1)]; }
int Construction::w_id(int i, int j) const { return w_ids_[static_cast<std::size_t>((i - 1) * r() + (j - 1))]; }
int Construction::w0_id(int i) const { return w0_ids_[static_cast<std::size_t>(i - 1)]; }

std::vector<EdgeId> Construction::b1_chunk(int i, int j) const {
  const auto& g = b1(i);
  return {g.begin() + (j - 1) * s(), g.begin() + j * s()};
}

bool Construction::is_one_edge(EdgeId e) const {
  switch (role(e).kind) {
    case EdgeKind::A1:
    case EdgeKind::B1:
    case EdgeKind::U1:
    case EdgeKind::W:
      return true;
    default:
      return false;
  }
}

Policy Construction::initial_tree() const {
  std::vector<EdgeId> chosen(graph_.num_vertices(), kNoEdge);
  for (int i = 1; i <= n(); ++i) {
    for (int j = 1; j <= r(); ++j)
      for (int k = 1; k <= s(); ++k) chosen[static_cast<std::size_t>(a(i, j, k))] = a0(i, j, k).front();
    for (int j = 1; j <= rs(); ++j) chosen[static_cast<std::size_t>(b(i, j))] = b0(i, j).front();
    chosen[static_cast<std::size_t>(u(i))] = u0(i).front();
    chosen[static_cast<std::size_t>(w(i))] = w0(i).front();
  }
  return Policy(graph_, std::move(chosen));
}

int Construction::last_b(int i, const EdgeSet& F) const {
  for (int j = rs(); j >= 1; --j) {
    if (!F.contains(b1_edge(i, j))) return j;
  }
  return 0;
}

int Construction::last_a(int i, int j, const EdgeSet& F) const {
  for (int k = s(); k >= 1; --k) {
    if (!F.contains(a1_edge(i, j, k))) return k;
  }
  return 0;
}

bool Construction::is_functional(const EdgeSet& F) const {
  return std::all_of(multi_.begin(), multi_.end(), [&](const std::vector<EdgeId>& m) {
    return std::any_of(m.begin(), m.end(), [&](EdgeId e) { return F.contains(e); });
  });
}

bool Construction::a1_sqsubseteq(int i, const EdgeSet& F) const {
  for (int j = 1; j <= r(); ++j) {
    if (last_a(i, j, F) == 0) return true;
  }
  return false;
}

bool Construction::b1_subset(int i, const EdgeSet& F) const { return last_b(i, F) == 0; }

int Construction::reset_level(const EdgeSet& F) const {
  for (int i = n(); i >= 1; --i) {
    if (b1_subset(i, F) && !a1_sqsubseteq(i, F)) return i;
  }
  return 0;
}

bool Construction::bit_is_one(int i, const EdgeSet& F, const Policy& B) const {
  const int lb = last_b(i, F);
  for (int j = 1; j <= rs(); ++j) {
    if (B.contains(graph_, b1_edge(i, j)) != (j > lb)) return false;
  }
  for (int j = 1; j <= r(); ++j) {
    const int la = lb == 0 ? last_a(i, j, F) : 0;
    for (int k = 1; k <= s(); ++k) {
      const bool in_b = B.contains(graph_, a1_edge(i, j, k));
      if (lb == 0 ? in_b != (k > la) : in_b) return false;
    }
  }
  return true;
}

bool Construction::bit_is_zero(int i, const EdgeSet& /*F*/, const Policy& B) const {
  for (EdgeId e : b1(i)) {
    if (B.contains(graph_, e)) return false;
  }
  for (int j = 1; j <= r(); ++j) {
    for (EdgeId e : a1(i, j)) {
      if (B.contains(graph_, e)) return false;
    }
  }
  return true;
}

BitValue Construction::bit(int i, const EdgeSet& F, const Policy& B) const {
  if (bit_is_one(i, F, B)) return BitValue::One;
  if (bit_is_zero(i, F, B)) return BitValue::Zero;
  return BitValue::Undefined;
}

EdgeSet Construction::bf_edge_set(const EdgeSet& F) const {
  if (!is_functional(F)) throw NotFunctional("B_F requires a functional edge set");
  EdgeSet out(graph_.num_edges());
  auto add_all = [&](const std::vector<EdgeId>& group) {
    for (EdgeId e : group) {
      if (F.contains(e)) out.insert(e);
    }
  };
  auto a_chains_by_last = [&](int i) {
    for (int j = 1; j <= r(); ++j) {
      const int la = last_a(i, j, F);
      for (int k = 1; k <= s(); ++k) {
        if (k > la)
          out.insert(a1_edge(i, j, k));
        else
          add_all(a0(i, j, k));
      }
    }
  };
  auto all_a0 = [&](int i) {
    for (int j = 1; j <= r(); ++j)
      for (int k = 1; k <= s(); ++k) add_all(a0(i, j, k));
  };

  const int reset = reset_level(F);
  for (int i = 1; i <= n(); ++i) {
    const bool b_in = b1_subset(i, F);
    if (i > reset && b_in) {
      for (EdgeId e : b1(i)) out.insert(e);
      a_chains_by_last(i);
      add_all(u1(i));
      for (int j = 1; j <= r(); ++j) {
        if (last_a(i, j, F) == 0) add_all(wj(i, j));
      }
    } else if (i > reset) {
      const int lb = last_b(i, F);
      for (int j = 1; j <= rs(); ++j) {
        if (j > lb)
          out.insert(b1_edge(i, j));
        else
          add_all(b0(i, j));
      }
      all_a0(i);
      add_all(u0(i));
      add_all(w0(i));
    } else if (i == reset) {
      for (EdgeId e : b1(i)) out.insert(e);
      a_chains_by_last(i);
      add_all(u1(i));
      add_all(w0(i));
    } else {
      for (int j = 1; j <= rs(); ++j) add_all(b0(i, j));
      all_a0(i);
      add_all(u0(i));
      for (int j = 1; j <= r(); ++j) add_all(wj(i, j));
    }
  }
  return out;
}

std::vector<VertexId> Construction::unreaching_b(int ip, int jp) const {
  std::vector<VertexId> out;
  for (int i = ip + 1; i <= n(); ++i) {
    out.push_back(u(i));
    out.push_back(w(i));
    for (int j = 1; j <= r(); ++j)
      for (int k = 1; k <= s(); ++k) out.push_back(a(i, j, k));
    for (int j = 1; j <= rs(); ++j) out.push_back(b(i, j));
  }
  for (int j = jp; j <= rs(); ++j) out.push_back(b(ip, j));
  return out;
}

std::vector<VertexId> Construction::unreaching_a(int ip, int jp, int kp) const {
  std::vector<VertexId> out = unreaching_b(ip, 1);
  for (int j = 1; j <= r(); ++j) {
    for (int k = 1; k <= s(); ++k) {
      if (j != jp || k >= kp) out.push_back(a(ip, j, k));
    }
  }
  return out;
}

nlohmann::json Construction::index_json() const {
  nlohmann::json groups = nlohmann::json::object();
  for (int i = 1; i <= n(); ++i) {
    groups[name("B", "1", {i})] = b1(i);
    for (int j = 1; j <= r(); ++j) {
      groups[name("A", "1", {i, j})] = a1(i, j);
      groups[name("B", "1", {i, j})] = b1_chunk(i, j);
    }
  }
  for (std::size_t m = 0; m < multi_.size(); ++m) groups[multi_names_[m]] = multi_[m];
  return {{"construction", {{"n", n()}, {"r", r()}, {"s", s()}, {"t", t()}}},
          {"scale", rs()},
          {"num_multi_edges", multi_.size()},
          {"groups", std::move(groups)}};
}

EdgeSet random_functional_set(const Construction& c, Rng& rng) {
  EdgeSet F(c.num_edges(), true);
  auto thin = [&](const std::vector<EdgeId>& group) {
    if (rng.uniform_index(2) == 0) return;
    for (EdgeId e : group) {
      if (rng.uniform_index(2) == 0) F.erase(e);
    }
  };
  for (int i = 1; i <= c.n(); ++i) {
    thin(c.b1(i));
    for (int j = 1; j <= c.r(); ++j) thin(c.a1(i, j));
  }
  for (std::size_t m = 0; m < c.num_multi(); ++m) {
    const auto& copies = c.multi(static_cast<int>(m));
    thin(copies);
    if (std::none_of(copies.begin(), copies.end(), [&](EdgeId e) { return F.contains(e); }))
      F.insert(copies[rng.uniform_index(copies.size())]);
  }
  return F;
}

}  // namespace facetlab
