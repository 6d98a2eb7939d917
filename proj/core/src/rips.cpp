#include "milnorkit/rips.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "milnorkit/error.hpp"

namespace milnorkit {

std::int64_t ComplexStats::chi_from_counts() const {
  std::int64_t s = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const auto c = static_cast<std::int64_t>(counts[k]);
    s += (k % 2 == 0) ? c : -c;
  }
  return s;
}

std::vector<Edge> edges_within(const PointCloud& cloud, double r) {
  const std::size_t n = cloud.size();
  const std::size_t dim = cloud.dim;
  std::vector<Edge> edges;
  if (n < 2) return edges;
  // Sweep along the first coordinate.
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return cloud.coords[a * dim] < cloud.coords[b * dim];
  });
  const double r2 = r * r;
  for (std::size_t ii = 0; ii < n; ++ii) {
    const std::uint32_t i = order[ii];
    const double* p = cloud.coords.data() + i * dim;
    for (std::size_t jj = ii + 1; jj < n; ++jj) {
      const std::uint32_t j = order[jj];
      const double* q = cloud.coords.data() + j * dim;
      if (q[0] - p[0] > r) break;
      double d2 = 0.0;
      for (std::size_t t = 0; t < dim && d2 <= r2; ++t) {
        const double d = p[t] - q[t];
        d2 += d * d;
      }
      if (d2 <= r2) edges.push_back({std::min(i, j), std::max(i, j), std::sqrt(d2)});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    if (x.length != y.length) return x.length < y.length;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  return edges;
}

std::size_t count_components(std::size_t n, std::span<const Edge> edges) {
  std::vector<std::uint32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0u);
  const auto find = [&](std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::size_t comps = n;
  for (const auto& e : edges) {
    const auto ra = find(e.a);
    const auto rb = find(e.b);
    if (ra != rb) {
      parent[std::max(ra, rb)] = std::min(ra, rb);
      --comps;
    }
  }
  return comps;
}

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

/// Pascal triangle with saturation at 2^64-1.
class BinomialTable {
 public:
  explicit BinomialTable(std::size_t rows) : rows_(rows), table_(rows * rows, 0) {
    for (std::size_t n = 0; n < rows; ++n) {
      at(n, 0) = 1;
      for (std::size_t k = 1; k <= n; ++k) {
        const std::uint64_t a = at(n - 1, k - 1);
        const std::uint64_t b = k <= n - 1 ? at(n - 1, k) : 0;
        std::uint64_t s;
        at(n, k) = (a == kSaturated || b == kSaturated || __builtin_add_overflow(a, b, &s))
                       ? kSaturated
                       : s;
      }
    }
  }
  std::size_t rows() const noexcept { return rows_; }
  std::uint64_t operator()(std::size_t n, std::size_t k) const { return table_[n * rows_ + k]; }

 private:
  std::uint64_t& at(std::size_t n, std::size_t k) { return table_[n * rows_ + k]; }
  std::size_t rows_;
  std::vector<std::uint64_t> table_;
};

const BinomialTable& binomials() {
  static const BinomialTable table(512);
  return table;
}

using Word = std::uint64_t;

/// Clique counting on one root's forward neighborhood using pivoting: each
/// clique is represented once by a leaf (held set H, pivot set P) and stands
/// for H plus any subset of P.
class LocalCounter {
 public:
  LocalCounter(std::size_t size, std::size_t max_clique, std::vector<std::uint64_t>& counts,
               std::atomic<std::uint64_t>& work, std::uint64_t budget)
      : size_(size),
        words_(std::max<std::size_t>(1, (size + 63) / 64)),
        adj_(size * words_, 0),
        max_clique_(max_clique),
        counts_(counts),
        work_(work),
        budget_(budget) {}

  void connect(std::size_t a, std::size_t b) {
    adj_[a * words_ + b / 64] |= Word{1} << (b % 64);
    adj_[b * words_ + a / 64] |= Word{1} << (a % 64);
  }

  /// Count all cliques of {root} + subsets of the local vertex set.
  /// Returns false when aborted (budget or overflow).
  bool run() {
    std::vector<Word> cand(words_, 0);
    for (std::size_t v = 0; v < size_; ++v) cand[v / 64] |= Word{1} << (v % 64);
    return recurse(cand, 1, 0);
  }

  bool overflowed() const noexcept { return overflow_; }

 private:
  const Word* row(std::size_t v) const { return adj_.data() + v * words_; }

  bool leaf(std::size_t held, std::size_t pivots) {
    const auto& binom = binomials();
    if (pivots >= binom.rows()) {
      overflow_ = true;
      return false;
    }
    for (std::size_t j = 0; j <= pivots; ++j) {
      const std::size_t size = held + j;
      if (size > max_clique_) break;
      if (counts_.size() < size) counts_.resize(size, 0);
      const std::uint64_t c = binom(pivots, j);
      if (c == kSaturated || __builtin_add_overflow(counts_[size - 1], c, &counts_[size - 1])) {
        overflow_ = true;
        return false;
      }
    }
    return true;
  }

  bool recurse(const std::vector<Word>& cand, std::size_t held, std::size_t pivots) {
    if (work_.fetch_add(1, std::memory_order_relaxed) + 1 > budget_) return false;
    if (held >= max_clique_) return leaf(held, pivots);
    bool any = false;
    for (Word w : cand) any = any || w != 0;
    if (!any) return leaf(held, pivots);

    // Pivot: candidate with the most candidate neighbours.
    std::size_t pivot = 0;
    int best = -1;
    for (std::size_t wi = 0; wi < words_; ++wi) {
      for (Word bits = cand[wi]; bits; bits &= bits - 1) {
        const std::size_t v = wi * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        const Word* r = row(v);
        int deg = 0;
        for (std::size_t t = 0; t < words_; ++t) deg += std::popcount(cand[t] & r[t]);
        if (deg > best) {
          best = deg;
          pivot = v;
        }
      }
    }

    std::vector<Word> rest = cand;
    std::vector<Word> child(words_);
    const Word* prow = row(pivot);
    // Pivot child first, then every candidate not adjacent to the pivot.
    for (std::size_t t = 0; t < words_; ++t) child[t] = rest[t] & prow[t];
    if (!recurse(child, held, pivots + 1)) return false;
    rest[pivot / 64] &= ~(Word{1} << (pivot % 64));
    for (std::size_t wi = 0; wi < words_; ++wi) {
      Word bits = cand[wi] & ~prow[wi];
      if (wi == pivot / 64) bits &= ~(Word{1} << (pivot % 64));
      for (; bits; bits &= bits - 1) {
        const std::size_t v = wi * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        const Word* r = row(v);
        for (std::size_t t = 0; t < words_; ++t) child[t] = rest[t] & r[t];
        if (!recurse(child, held + 1, pivots)) return false;
        rest[v / 64] &= ~(Word{1} << (v % 64));
      }
    }
    return true;
  }

  std::size_t size_;
  std::size_t words_;
  std::vector<Word> adj_;
  std::size_t max_clique_;
  std::vector<std::uint64_t>& counts_;
  std::atomic<std::uint64_t>& work_;
  std::uint64_t budget_;
  bool overflow_ = false;
};

/// Degeneracy ordering (repeatedly remove a minimum-degree vertex).
std::vector<std::uint32_t> degeneracy_rank(const std::vector<std::vector<std::uint32_t>>& adj) {
  const std::size_t n = adj.size();
  std::size_t max_deg = 0;
  std::vector<std::size_t> deg(n);
  for (std::size_t v = 0; v < n; ++v) {
    deg[v] = adj[v].size();
    max_deg = std::max(max_deg, deg[v]);
  }
  std::vector<std::vector<std::uint32_t>> buckets(max_deg + 1);
  for (std::size_t v = 0; v < n; ++v) buckets[deg[v]].push_back(static_cast<std::uint32_t>(v));
  std::vector<char> removed(n, 0);
  std::vector<std::uint32_t> rank(n);
  std::size_t next = 0;
  std::size_t cur = 0;
  while (next < n) {
    cur = std::min(cur, max_deg);
    while (cur <= max_deg && buckets[cur].empty()) ++cur;
    const std::uint32_t v = buckets[cur].back();
    buckets[cur].pop_back();
    if (removed[v] || deg[v] != cur) continue;  // stale bucket entry
    removed[v] = 1;
    rank[v] = static_cast<std::uint32_t>(next++);
    for (std::uint32_t u : adj[v]) {
      if (removed[u]) continue;
      --deg[u];
      buckets[deg[u]].push_back(u);
      if (deg[u] < cur) cur = deg[u];
    }
  }
  return rank;
}

}  // namespace

ComplexStats clique_complex_stats(std::size_t n, std::span<const Edge> edges, int dim_hint,
                                  const RipsOptions& opts) {
  ComplexStats stats;
  stats.dim_hint = dim_hint;
  stats.components = count_components(n, edges);
  if (n == 0) {
    stats.counts = {};
    stats.chi = 0;
    return stats;
  }
  const std::size_t max_clique = (opts.truncate_to_dim && dim_hint >= 0)
                                     ? static_cast<std::size_t>(dim_hint) + 1
                                     : std::numeric_limits<std::size_t>::max();

  std::vector<std::vector<std::uint32_t>> adj(n);
  for (const auto& e : edges) {
    if (e.a == e.b || e.a >= n || e.b >= n)
      throw Error(Errc::precondition, "edge endpoint out of range");
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  const auto rank = degeneracy_rank(adj);

  const unsigned threads = std::max(1u, opts.threads);
  std::atomic<std::uint64_t> work{0};
  std::atomic<bool> failed{false};
  std::atomic<bool> overflow{false};
  std::vector<std::vector<std::uint64_t>> partial(threads);

  const auto worker = [&](unsigned t) {
    auto& counts = partial[t];
    std::vector<std::uint32_t> local;
    std::vector<std::int32_t> index(n, -1);
    for (std::size_t v = t; v < n && !failed.load(std::memory_order_relaxed); v += threads) {
      local.clear();
      for (std::uint32_t u : adj[v])
        if (rank[u] > rank[v]) local.push_back(u);
      for (std::size_t i = 0; i < local.size(); ++i) index[local[i]] = static_cast<std::int32_t>(i);
      LocalCounter counter(local.size(), max_clique, counts, work, opts.budget);
      for (std::size_t i = 0; i < local.size(); ++i) {
        for (std::uint32_t u : adj[local[i]]) {
          const auto j = index[u];
          if (j > static_cast<std::int32_t>(i)) counter.connect(i, static_cast<std::size_t>(j));
        }
      }
      for (std::uint32_t u : local) index[u] = -1;
      if (!counter.run()) {
        if (counter.overflowed()) overflow = true;
        failed = true;
      }
    }
  };

  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }

  stats.work = work.load();
  if (failed) {
    stats.valid = false;
    stats.note = overflow ? "simplex count overflow" : "clique budget exceeded";
    return stats;
  }
  for (const auto& c : partial) {
    if (stats.counts.size() < c.size()) stats.counts.resize(c.size(), 0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (__builtin_add_overflow(stats.counts[k], c[k], &stats.counts[k])) {
        stats.valid = false;
        stats.note = "simplex count overflow";
        return stats;
      }
    }
  }
  // Alternating sum with overflow detection (counts can exceed int64 range).
  std::int64_t chi = 0;
  for (std::size_t k = 0; k < stats.counts.size(); ++k) {
    const std::uint64_t c = stats.counts[k];
    const bool ok = c <= static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()) &&
                    !((k % 2 == 0) ? __builtin_add_overflow(chi, static_cast<std::int64_t>(c), &chi)
                                   : __builtin_sub_overflow(chi, static_cast<std::int64_t>(c), &chi));
    if (!ok) {
      stats.valid = false;
      stats.note = "simplex count overflow";
      return stats;
    }
  }
  stats.chi = chi;
  return stats;
}

ComplexStats rips_chi(const PointCloud& cloud, double r, int dim_hint, const RipsOptions& opts) {
  if (!(r > 0.0)) throw Error(Errc::precondition, "scale must be positive");
  if (dim_hint < 0) throw Error(Errc::precondition, "dimension must be >= 0");
  const auto edges = edges_within(cloud, r);
  auto stats = clique_complex_stats(cloud.size(), edges, dim_hint, opts);
  stats.scale = r;
  return stats;
}

}  // namespace milnorkit
