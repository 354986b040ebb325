// scsg: generate, encode, query and check succinct graph encodings.
#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <iterator>
#include <thread>

#include "scsg/container.hpp"
#include "scsg/edgelist.hpp"
#include "scsg/verify.hpp"

using namespace scsg;

namespace {

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kNotInClass = 3, kMismatch = 4 };

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "bc" picks the block-cactus family member from --mode.
GraphClass resolve(const std::string& name, const std::string& mode) {
  try {
    return parse_class(name == "bc" ? mode : name);
  } catch (const std::invalid_argument& e) {
    throw usage_error(e.what());
  }
}

MultiGraph read_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path);
  return read_edge_list(in);
}

Encoded read_container(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw format_error("cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return Encoded::load(bytes);
}

vertex_t vertex_arg(const Encoded& e, const std::string& s) {
  size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || v < 1 || v > e.n()) throw usage_error("vertex '" + s + "' is not in 1.." + std::to_string(e.n()));
  return static_cast<vertex_t>(v - 1);
}

int query(const Encoded& e, const std::string& op, const std::vector<std::string>& args) {
  auto need = [&](size_t k) {
    if (args.size() != k) throw usage_error(op + " takes " + std::to_string(k) + " vertex argument(s)");
  };
  if (op == "degree") {
    need(1);
    std::printf("%zu\n", e.degree(vertex_arg(e, args[0])));
  } else if (op == "adjacent") {
    need(2);
    std::printf("%s\n", e.adjacent(vertex_arg(e, args[0]), vertex_arg(e, args[1])) ? "true" : "false");
  } else if (op == "multiplicity") {
    need(2);
    std::printf("%zu\n", e.multiplicity(vertex_arg(e, args[0]), vertex_arg(e, args[1])));
  } else if (op == "neighborhood") {
    need(1);
    auto nb = e.neighborhood(vertex_arg(e, args[0]));
    std::sort(nb.begin(), nb.end());
    for (size_t i = 0; i < nb.size(); ++i) std::printf(i ? " %u" : "%u", nb[i] + 1);
    std::printf("\n");
  } else {
    throw usage_error("unknown query '" + op + "' (degree, adjacent, multiplicity, neighborhood)");
  }
  return kOk;
}

int verify(GraphClass c, const std::vector<size_t>& sizes, size_t trials, uint64_t seed, size_t ell_cap) {
  VerifyResult total;
  std::string where;
  size_t workers = std::max<size_t>(1, std::thread::hardware_concurrency());
  for (size_t size : sizes) {
    for (size_t start = 0; start < trials; start += workers) {
      std::vector<std::future<VerifyResult>> jobs;
      for (size_t t = start; t < std::min(trials, start + workers); ++t)
        jobs.push_back(std::async(std::launch::async, [=] {
          uint64_t s = seed + 1000003ULL * t + size;
          return verify_graph(generate(c, size, s), c, ell_cap, s, 2000);
        }));
      for (size_t t = 0; t < jobs.size(); ++t) {
        VerifyResult r = jobs[t].get();
        if (r.mismatches && total.mismatches == 0)
          where = "size " + std::to_string(size) + " trial " + std::to_string(start + t) + ": ";
        total.merge(r);
      }
    }
  }
  if (total.mismatches) {
    std::printf("verify %s: %zu mismatches in %zu checks; first at %s%s\n", class_name(c), total.mismatches,
                total.checks, where.c_str(), total.first.c_str());
    return kMismatch;
  }
  std::printf("verify %s: %zu checks, 0 mismatches\n", class_name(c), total.checks);
  return kOk;
}

int bench(GraphClass c, const std::vector<size_t>& sizes, uint64_t seed, size_t ell_cap) {
  std::printf("%10s %10s %10s %12s %12s %12s %10s\n", "size", "n", "build_ms", "adjacent_ns", "degree_ns",
              "nbhd_ns", "bits/unit");
  for (size_t size : sizes) {
    MultiGraph g = generate(c, size, seed);
    auto s = std::chrono::steady_clock::now();
    Encoded e = Encoded::build(g, c, ell_cap);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - s).count();
    Latency l = measure_latency(e, seed);
    std::printf("%10zu %10zu %10.1f %12.1f %12.1f %12.1f %10.3f\n", size, g.n(), ms, l.adjacent_ns, l.degree_ns,
                l.neighborhood_ns, e.space().per_unit());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Succinct encodings of series-parallel, block-cactus and 3-leaf power graphs"};
  app.require_subcommand(1);
  uint64_t seed = 1;
  size_t ell_cap = 8, trials = 10;
  std::string mode = "blockcactus";
  std::vector<size_t> sizes{10, 100, 1000};
  std::string cls, in, out, file, op;
  size_t size = 0;
  std::vector<std::string> qargs;

  auto* gen = app.add_subcommand("gen", "write a random graph of a class as an edge list");
  gen->add_option("class", cls, "sp, block, cactus, blockcactus, leaf3 or bc")->required();
  gen->add_option("size", size, "edges for sp, vertices otherwise")->required()->check(CLI::PositiveNumber);
  gen->add_option("seed", seed, "random seed");
  gen->add_option("out", out, "output edge list (stdout if omitted)");

  auto* enc = app.add_subcommand("encode", "encode an edge list into a container");
  enc->add_option("class", cls)->required();
  enc->add_option("in", in)->required();
  enc->add_option("out", out)->required();

  auto* qry = app.add_subcommand("query", "answer one query on a container (1-based vertices)");
  qry->add_option("file", file)->required();
  qry->add_option("op", op, "degree, adjacent, multiplicity or neighborhood")->required();
  qry->add_option("vertices", qargs);

  auto* sta = app.add_subcommand("stats", "print the space report of a container");
  sta->add_option("file", file)->required();

  auto* ver = app.add_subcommand("verify", "differential check against the brute-force oracle");
  ver->add_option("class", cls)->required();
  ver->add_option("--trials", trials)->check(CLI::PositiveNumber);

  auto* ben = app.add_subcommand("bench", "query latency and space per size");
  ben->add_option("class", cls)->required();

  for (auto* sc : {gen, enc, ver, ben}) sc->add_option("--mode", mode, "block, cactus or blockcactus (with class bc)");
  for (auto* sc : {ver, ben}) sc->add_option("--seed", seed);
  for (auto* sc : {ver, ben}) sc->add_option("--sizes", sizes)->delimiter(',')->check(CLI::PositiveNumber);
  for (auto* sc : {enc, ver, ben}) sc->add_option("--ell-cap", ell_cap, "largest micro size parameter")->check(CLI::Range(1, 8));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) {
      MultiGraph g = generate(resolve(cls, mode), size, seed);
      if (out.empty()) {
        write_edge_list(std::cout, g);
      } else {
        std::ofstream f(out);
        write_edge_list(f, g);
        if (!f) throw usage_error("cannot write " + out);
      }
    } else if (*enc) {
      GraphClass c = resolve(cls, mode);
      Encoded e = Encoded::build(read_graph(in), c, ell_cap);
      auto bytes = e.save();
      std::ofstream f(out, std::ios::binary);
      f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
      if (!f) throw usage_error("cannot write " + out);
    } else if (*qry) {
      return query(read_container(file), op, qargs);
    } else if (*sta) {
      std::fputs(read_container(file).space().text().c_str(), stdout);
    } else if (*ver) {
      return verify(resolve(cls, mode), sizes, trials, seed, ell_cap);
    } else if (*ben) {
      return bench(resolve(cls, mode), sizes, seed, ell_cap);
    }
  } catch (const usage_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const parse_error& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kParse;
  } catch (const format_error& e) {
    std::fprintf(stderr, "format error: %s\n", e.what());
    return kParse;
  } catch (const not_in_class& e) {
    std::fprintf(stderr, "not in class: %s\n", e.what());
    return kNotInClass;
  } catch (const std::invalid_argument& e) {  // disconnected or empty where a class needs more
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNotInClass;
  }
  return kOk;
}
