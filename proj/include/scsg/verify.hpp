#pragma once

#include <algorithm>
#include <chrono>
#include <random>
#include <string>
#include <vector>

#include "scsg/container.hpp"
#include "scsg/oracle.hpp"

namespace scsg {

// Random instance of a class. Size counts edges for SP, vertices otherwise.
inline MultiGraph generate(GraphClass c, size_t size, uint64_t seed) {
  switch (c) {
    case GraphClass::SP: return gen_sp(size, seed);
    case GraphClass::Block: return gen_bc(size, seed, BcMode::Block);
    case GraphClass::Cactus: return gen_bc(size, seed, BcMode::Cactus);
    case GraphClass::BlockCactus: return gen_bc(size, seed, BcMode::BlockCactus);
    case GraphClass::Leaf3: return gen_lp(size, seed);
  }
  throw std::invalid_argument("generate: unknown class");
}

struct VerifyResult {
  size_t checks = 0;
  size_t mismatches = 0;
  std::string first;  // description of the first mismatch

  void note(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (mismatches++ == 0) first = what;
  }
  void merge(const VerifyResult& o) {
    if (mismatches == 0 && o.mismatches) first = o.first;
    checks += o.checks;
    mismatches += o.mismatches;
  }
};

// Every query of every vertex, every edge pair and `pairs` random pairs,
// answered by the structure after a save/load round trip.
inline VerifyResult verify_graph(const MultiGraph& g, GraphClass c, size_t ell_cap, uint64_t seed, size_t pairs) {
  VerifyResult res;
  Encoded built = Encoded::build(g, c, ell_cap);
  auto bytes = built.save();
  Encoded e = Encoded::load(bytes);
  res.note(e.save() == bytes, "container bytes differ after reload");
  auto tag = [](const char* op, vertex_t u) { return std::string(op) + " " + std::to_string(u + 1); };
  for (vertex_t u = 0; u < g.n(); ++u) {
    res.note(e.degree(u) == o_degree(g, u), tag("degree", u));
    auto nb = e.neighborhood(u);
    std::sort(nb.begin(), nb.end());
    res.note(nb == o_neighborhood(g, u), tag("neighborhood", u));
  }
  auto pair = [&](vertex_t u, vertex_t v) {
    std::string t = " " + std::to_string(u + 1) + " " + std::to_string(v + 1);
    res.note(e.adjacent(u, v) == o_adjacent(g, u, v), "adjacent" + t);
    res.note(e.multiplicity(u, v) == o_multiplicity(g, u, v), "multiplicity" + t);
  };
  for (auto [u, v] : g.edges()) pair(u, v);
  std::mt19937_64 rng(seed);
  for (size_t i = 0; i < pairs && g.n() > 0; ++i) pair(rng() % g.n(), rng() % g.n());
  return res;
}

struct Latency {
  double adjacent_ns = 0, degree_ns = 0, neighborhood_ns = 0;
};

// Median over batches of random queries, nanoseconds per query.
inline Latency measure_latency(const Encoded& e, uint64_t seed, size_t batches = 31, size_t per_batch = 2000) {
  std::mt19937_64 rng(seed);
  size_t n = e.n();
  std::vector<vertex_t> q(2 * per_batch);
  volatile size_t sink = 0;
  auto median_of = [&](auto&& run) {
    std::vector<double> t;
    for (size_t b = 0; b < batches; ++b) {
      for (auto& x : q) x = static_cast<vertex_t>(rng() % n);
      auto s = std::chrono::steady_clock::now();
      run();
      auto d = std::chrono::steady_clock::now() - s;
      t.push_back(std::chrono::duration<double, std::nano>(d).count() / static_cast<double>(per_batch));
    }
    std::nth_element(t.begin(), t.begin() + t.size() / 2, t.end());
    return t[t.size() / 2];
  };
  Latency l;
  l.adjacent_ns = median_of([&] {
    size_t acc = 0;
    for (size_t i = 0; i < per_batch; ++i) acc += e.adjacent(q[2 * i], q[2 * i + 1]);
    sink = sink + acc;
  });
  l.degree_ns = median_of([&] {
    size_t acc = 0;
    for (size_t i = 0; i < per_batch; ++i) acc += e.degree(q[i]);
    sink = sink + acc;
  });
  l.neighborhood_ns = median_of([&] {
    size_t acc = 0;
    for (size_t i = 0; i < per_batch; ++i) acc += e.neighborhood(q[i]).size();
    sink = sink + acc;
  });
  return l;
}

}  // namespace scsg
