#include "hyperalpha/hypergraph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <unordered_set>

#include "hyperalpha/error.hpp"
#include "hyperalpha/rng.hpp"

namespace hyperalpha {

bool colex_less(std::span<const unsigned> a, std::span<const unsigned> b) {
  return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
}

Hypergraph::Hypergraph(unsigned n, unsigned k, std::vector<std::vector<unsigned>> edges)
    : n_(n), k_(k) {
  if (k < 1) throw DomainError("uniformity k must be positive");
  for (auto& e : edges) {
    if (e.size() != k)
      throw DomainError("edge has " + std::to_string(e.size()) + " vertices, expected " + std::to_string(k));
    std::sort(e.begin(), e.end());
    if (std::adjacent_find(e.begin(), e.end()) != e.end()) throw DomainError("edge repeats a vertex");
    if (e.back() >= n) throw DomainError("vertex " + std::to_string(e.back()) + " out of range");
  }
  std::sort(edges.begin(), edges.end(),
            [](const auto& a, const auto& b) { return colex_less(a, b); });
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) throw DomainError("duplicate edge");
  vertices_.reserve(edges.size() * k);
  for (const auto& e : edges) vertices_.insert(vertices_.end(), e.begin(), e.end());
  build_index();
}

Hypergraph Hypergraph::from_canonical(unsigned n, unsigned k, std::vector<unsigned> flat) {
  Hypergraph h;
  h.n_ = n;
  h.k_ = k;
  h.vertices_ = std::move(flat);
  h.build_index();
  return h;
}

Hypergraph Hypergraph::empty(unsigned n, unsigned k) { return from_canonical(n, k, {}); }

Hypergraph Hypergraph::complete(unsigned n, unsigned k) {
  std::vector<unsigned> flat;
  if (k <= n) {
    std::vector<unsigned> subset(k);
    std::iota(subset.begin(), subset.end(), 0u);
    do {
      flat.insert(flat.end(), subset.begin(), subset.end());
    } while (next_colex(subset, n));
  }
  return from_canonical(n, k, std::move(flat));
}

void Hypergraph::build_index() {
  const std::size_t m = edge_count();
  incident_offsets_.assign(n_ + 1, 0);
  for (unsigned v : vertices_) ++incident_offsets_[v + 1];
  std::partial_sum(incident_offsets_.begin(), incident_offsets_.end(), incident_offsets_.begin());
  incident_ids_.assign(vertices_.size(), 0);
  std::vector<std::size_t> cursor(incident_offsets_.begin(), incident_offsets_.end() - 1);
  for (std::size_t id = 0; id < m; ++id)
    for (unsigned v : edge(id)) incident_ids_[cursor[v]++] = static_cast<std::uint32_t>(id);

  edge_masks_.clear();
  incident_masks_.clear();
  if (!has_masks()) return;
  edge_masks_.resize(m);
  for (std::size_t id = 0; id < m; ++id)
    for (unsigned v : edge(id)) edge_masks_[id].insert(v);
  incident_masks_.resize(incident_ids_.size());
  for (std::size_t i = 0; i < incident_ids_.size(); ++i) incident_masks_[i] = edge_masks_[incident_ids_[i]];
}

std::vector<std::vector<unsigned>> Hypergraph::edges() const {
  std::vector<std::vector<unsigned>> out;
  out.reserve(edge_count());
  for (std::size_t id = 0; id < edge_count(); ++id) {
    auto e = edge(id);
    out.emplace_back(e.begin(), e.end());
  }
  return out;
}

void Hypergraph::require_masks() const {
  if (!has_masks())
    throw CapacityError("n = " + std::to_string(n_) + " exceeds the solver vertex cap of " +
                        std::to_string(VertexSet::kCapacity));
}

bool Hypergraph::has_edge(std::span<const unsigned> sorted_edge) const {
  if (sorted_edge.size() != k_) return false;
  std::size_t lo = 0;
  std::size_t hi = edge_count();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (colex_less(edge(mid), sorted_edge)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo < edge_count() && std::ranges::equal(edge(lo), sorted_edge);
}

bool Hypergraph::incidence_consistent() const {
  Hypergraph rebuilt = from_canonical(n_, k_, vertices_);
  return rebuilt.incident_offsets_ == incident_offsets_ && rebuilt.incident_ids_ == incident_ids_ &&
         rebuilt.edge_masks_ == edge_masks_ && rebuilt.incident_masks_ == incident_masks_;
}

void ModelParams::validate() const {
  if (k < 2) throw DomainError("k must be at least 2");
  if (k > n) throw DomainError("k must not exceed n");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0, 1]");
}

namespace {

constexpr std::uint64_t kSparseStream = 0x5350415253450001ULL;

Hypergraph sample_enumerate(const ModelParams& params, Rank total) {
  std::vector<unsigned> flat;
  flat.reserve(static_cast<std::size_t>(static_cast<double>(total) * params.p * 1.05) * params.k + params.k);
  std::vector<unsigned> subset(params.k);
  std::iota(subset.begin(), subset.end(), 0u);
  for (Rank r = 0; r < total; ++r) {
    if (rng::uniform_at(params.seed, r) < params.p) flat.insert(flat.end(), subset.begin(), subset.end());
    next_colex(subset, params.n);
  }
  return Hypergraph::from_canonical(params.n, params.k, std::move(flat));
}

Hypergraph sample_sparse(const ModelParams& params, Rank total) {
  rng::SplitMix64 engine(rng::derive(params.seed, kSparseStream));
  const auto t = static_cast<std::int64_t>(total);
  const std::int64_t m = std::binomial_distribution<std::int64_t>(t, params.p)(engine);

  // Draw the smaller of the edge set and its complement by rejection.
  const bool complement = m > t / 2;
  const std::int64_t draws = complement ? t - m : m;
  std::uniform_int_distribution<Rank> pick(0, total - 1);
  std::unordered_set<Rank> chosen;
  chosen.reserve(static_cast<std::size_t>(draws) * 2);
  while (static_cast<std::int64_t>(chosen.size()) < draws) chosen.insert(pick(engine));

  std::vector<Rank> ranks;
  if (complement) {
    ranks.reserve(static_cast<std::size_t>(m));
    for (Rank r = 0; r < total; ++r)
      if (!chosen.contains(r)) ranks.push_back(r);
  } else {
    ranks.assign(chosen.begin(), chosen.end());
    std::sort(ranks.begin(), ranks.end());
  }

  // Ascending rank is canonical order.
  const ColexRanker ranker(params.n, params.k);
  std::vector<unsigned> flat(ranks.size() * params.k);
  for (std::size_t i = 0; i < ranks.size(); ++i)
    ranker.unrank(ranks[i], std::span<unsigned>(flat.data() + i * params.k, params.k));
  return Hypergraph::from_canonical(params.n, params.k, std::move(flat));
}

}  // namespace

Hypergraph sample_hnkp(const ModelParams& params, SamplerStrategy strategy) {
  params.validate();
  const u128 total128 = binomial128(params.n, params.k);
  if (total128 > static_cast<u128>(std::numeric_limits<std::int64_t>::max()))
    throw CapacityError("C(n,k) exceeds the 63-bit rank width");
  const auto total = static_cast<Rank>(total128);
  if (strategy == SamplerStrategy::kAuto)
    strategy = total <= kEnumerationCap ? SamplerStrategy::kEnumerate : SamplerStrategy::kSparse;
  return strategy == SamplerStrategy::kEnumerate ? sample_enumerate(params, total)
                                                 : sample_sparse(params, total);
}

InducedHypergraph induced(const Hypergraph& h, std::span<const unsigned> subset) {
  std::vector<unsigned> keep(subset.begin(), subset.end());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (!keep.empty() && keep.back() >= h.n())
    throw DomainError("vertex " + std::to_string(keep.back()) + " out of range");

  constexpr unsigned kAbsent = ~0u;
  std::vector<unsigned> relabel(h.n(), kAbsent);
  for (unsigned i = 0; i < keep.size(); ++i) relabel[keep[i]] = i;

  // Relabeling is monotone, so canonical order is preserved.
  std::vector<unsigned> flat;
  for (std::size_t id = 0; id < h.edge_count(); ++id) {
    auto e = h.edge(id);
    if (std::ranges::all_of(e, [&](unsigned v) { return relabel[v] != kAbsent; }))
      for (unsigned v : e) flat.push_back(relabel[v]);
  }
  return {Hypergraph::from_canonical(static_cast<unsigned>(keep.size()), h.k(), std::move(flat)),
          std::move(keep)};
}

void write_hypergraph(std::ostream& out, const Hypergraph& h) {
  out << h.n() << ' ' << h.k() << ' ' << h.edge_count() << '\n';
  for (std::size_t id = 0; id < h.edge_count(); ++id) {
    auto e = h.edge(id);
    for (unsigned i = 0; i < e.size(); ++i) out << (i ? " " : "") << e[i];
    out << '\n';
  }
}

void write_hypergraph_file(const std::filesystem::path& path, const Hypergraph& h) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_hypergraph(out, h);
}

namespace {

// Parses a line of single-space-separated unsigned integers.
std::vector<std::uint64_t> parse_numbers(const std::string& line, std::size_t line_no) {
  std::vector<std::uint64_t> out;
  const char* p = line.data();
  const char* end = p + line.size();
  if (p == end) throw ParseError(line_no, "empty line");
  while (true) {
    std::uint64_t value = 0;
    auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc{} || next == p) throw ParseError(line_no, "expected a non-negative integer");
    out.push_back(value);
    p = next;
    if (p == end) break;
    if (*p != ' ' || p + 1 == end) throw ParseError(line_no, "fields must be separated by single spaces");
    ++p;
  }
  return out;
}

}  // namespace

Hypergraph read_hypergraph(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError(line_no, "missing header \"n k m\"");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = parse_numbers(line, line_no);
  if (header.size() != 3) throw ParseError(line_no, "header must be \"n k m\"");
  const std::uint64_t n = header[0];
  const std::uint64_t k = header[1];
  const std::uint64_t m = header[2];
  if (k < 2 || k > n) throw ParseError(line_no, "header requires 2 <= k <= n");
  if (n > std::numeric_limits<unsigned>::max()) throw ParseError(line_no, "n too large");

  std::vector<unsigned> flat;
  for (std::uint64_t i = 0; i < m; ++i) {
    ++line_no;
    if (!std::getline(in, line)) throw ParseError(line_no, "expected " + std::to_string(m) + " edges");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto ids = parse_numbers(line, line_no);
    if (ids.size() != k)
      throw ParseError(line_no, "edge has " + std::to_string(ids.size()) + " vertices, expected " + std::to_string(k));
    for (std::size_t j = 0; j < ids.size(); ++j) {
      if (ids[j] >= n) throw ParseError(line_no, "vertex " + std::to_string(ids[j]) + " out of range");
      if (j > 0 && ids[j] <= ids[j - 1])
        throw ParseError(line_no, ids[j] == ids[j - 1] ? "edge repeats a vertex" : "vertex ids must be strictly increasing");
      flat.push_back(static_cast<unsigned>(ids[j]));
    }
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line != "\r") throw ParseError(line_no, "unexpected content after the last edge");
  }

  const auto kk = static_cast<unsigned>(k);
  const std::size_t count = flat.size() / kk;
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  auto edge_at = [&](std::size_t i) { return std::span<const unsigned>(flat.data() + i * kk, kk); };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return colex_less(edge_at(a), edge_at(b)); });
  std::vector<unsigned> canonical;
  canonical.reserve(flat.size());
  for (std::size_t i = 0; i < count; ++i) {
    if (i > 0 && std::ranges::equal(edge_at(order[i]), edge_at(order[i - 1]))) {
      // Report the later of the two lines.
      throw ParseError(2 + std::max(order[i], order[i - 1]), "duplicate edge");
    }
    auto e = edge_at(order[i]);
    canonical.insert(canonical.end(), e.begin(), e.end());
  }
  return Hypergraph::from_canonical(static_cast<unsigned>(n), kk, std::move(canonical));
}

Hypergraph read_hypergraph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_hypergraph(in);
}

}  // namespace hyperalpha
