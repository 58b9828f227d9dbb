#include "orthograph/cliques.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <mutex>
#include <sstream>

#include "orthograph/parallel.hpp"

namespace orthograph {

namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
  Clock::time_point at;
  bool expired() const { return Clock::now() >= at; }
};

// Search for a clique through one top-level vertex v, restricted to later
// neighbors of v. Works on a compact bitset graph over those neighbors.
class LocalSearch {
 public:
  LocalSearch(const Graph& g, const Deadline& deadline, const std::atomic<std::size_t>& best)
      : g_(g), deadline_(deadline), best_(best) {}

  // Returns the clique (including v) or an empty vector; nodes() afterwards.
  // Throws CliqueTimeout; returns early when a smaller top-level vertex wins.
  std::vector<std::size_t> run(std::size_t v, std::size_t size) {
    v_ = v;
    nodes_ = 1;
    aborted_ = false;
    collect_candidates(v);
    if (cand_.size() + 1 < size) return {};
    build_local();
    words_ = (cand_.size() + 63) / 64;
    depth_buffers_.assign(size + 1, std::vector<std::uint64_t>(words_ * 3, 0));
    auto& root = depth_buffers_[0];
    std::fill(root.begin(), root.begin() + static_cast<std::ptrdiff_t>(words_), 0);
    for (std::size_t i = 0; i < cand_.size(); ++i) root[i / 64] |= std::uint64_t{1} << (i % 64);
    path_.clear();
    if (!expand(0, size - 1)) return {};
    std::vector<std::size_t> out{v};
    for (auto i : path_) out.push_back(cand_[i]);
    return out;
  }

  std::uint64_t nodes() const { return nodes_; }
  bool aborted() const { return aborted_; }

 private:
  void collect_candidates(std::size_t v) {
    cand_.clear();
    const auto row = g_.row(v);
    for (std::size_t wi = (v + 1) / 64; wi < row.size(); ++wi) {
      std::uint64_t w = row[wi];
      if (wi == (v + 1) / 64) w &= ~std::uint64_t{0} << ((v + 1) % 64);
      while (w) {
        cand_.push_back(wi * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  void build_local() {
    const std::size_t m = cand_.size();
    const std::size_t lw = (m + 63) / 64;
    local_.assign(m * lw, 0);
    thread_local std::vector<std::int32_t> position;
    if (position.size() < g_.size()) position.assign(g_.size(), -1);
    for (std::size_t i = 0; i < m; ++i) position[cand_[i]] = static_cast<std::int32_t>(i);
    const auto vrow = g_.row(v_);
    const std::size_t first_word = (v_ + 1) / 64;
    for (std::size_t i = 0; i < m; ++i) {
      const auto urow = g_.row(cand_[i]);
      // Only later candidates; the relation is symmetric so fill both sides.
      const std::size_t start = (cand_[i] + 1) / 64;
      for (std::size_t wi = std::max(first_word, start); wi < vrow.size(); ++wi) {
        std::uint64_t w = urow[wi] & vrow[wi];
        if (wi == start) w &= ~std::uint64_t{0} << ((cand_[i] + 1) % 64);
        while (w) {
          const std::size_t u = wi * 64 + static_cast<std::size_t>(std::countr_zero(w));
          w &= w - 1;
          const auto j = static_cast<std::size_t>(position[u]);
          local_[i * lw + j / 64] |= std::uint64_t{1} << (j % 64);
          local_[j * lw + i / 64] |= std::uint64_t{1} << (i % 64);
        }
      }
    }
    for (auto c : cand_) position[c] = -1;
  }

  const std::uint64_t* nbr(std::size_t i) const { return local_.data() + i * words_; }

  void tick() {
    if ((++nodes_ & 0x3FFU) == 0) {
      if (deadline_.expired()) throw CliqueTimeout(0, {});
      if (best_.load(std::memory_order_relaxed) < v_) {
        aborted_ = true;
      }
    }
  }

  // Greedy sequential coloring of the set, stopping once `enough` colors are used.
  std::size_t color_bound(const std::uint64_t* set, std::uint64_t* uncolored, std::uint64_t* layer,
                          std::size_t enough) const {
    std::copy(set, set + words_, uncolored);
    std::size_t colors = 0;
    while (true) {
      bool any = false;
      for (std::size_t wi = 0; wi < words_; ++wi) any = any || uncolored[wi] != 0;
      if (!any) return colors;
      if (++colors >= enough) return colors;
      std::copy(uncolored, uncolored + words_, layer);
      for (std::size_t wi = 0; wi < words_; ++wi) {
        while (layer[wi]) {
          const std::size_t i = wi * 64 + static_cast<std::size_t>(std::countr_zero(layer[wi]));
          uncolored[wi] &= ~(std::uint64_t{1} << (i % 64));
          layer[wi] &= ~(std::uint64_t{1} << (i % 64));
          const std::uint64_t* n = nbr(i);
          for (std::size_t wj = wi; wj < words_; ++wj) layer[wj] &= ~n[wj];
        }
      }
    }
  }

  bool expand(std::size_t depth, std::size_t need) {
    tick();
    if (aborted_) return false;
    if (need == 0) return true;
    std::uint64_t* set = depth_buffers_[depth].data();
    std::size_t count = 0;
    for (std::size_t wi = 0; wi < words_; ++wi) count += static_cast<std::size_t>(std::popcount(set[wi]));
    if (count < need) return false;

    if (need == 1) {
      for (std::size_t wi = 0; wi < words_; ++wi) {
        if (set[wi]) {
          path_.push_back(wi * 64 + static_cast<std::size_t>(std::countr_zero(set[wi])));
          return true;
        }
      }
    }

    if (need == 2) {
      for (std::size_t wi = 0; wi < words_; ++wi) {
        std::uint64_t w = set[wi];
        while (w) {
          const std::size_t i = wi * 64 + static_cast<std::size_t>(std::countr_zero(w));
          w &= w - 1;
          const std::uint64_t* n = nbr(i);
          for (std::size_t wj = wi; wj < words_; ++wj) {
            std::uint64_t x = n[wj] & set[wj];
            if (wj == wi) x &= w;  // strictly after i
            if (x) {
              path_.push_back(i);
              path_.push_back(wj * 64 + static_cast<std::size_t>(std::countr_zero(x)));
              return true;
            }
          }
        }
      }
      return false;
    }

    std::uint64_t* scratch_a = set + words_;
    std::uint64_t* scratch_b = set + 2 * words_;
    if (color_bound(set, scratch_a, scratch_b, need) < need) return false;

    // scratch_a holds the candidates not yet branched on.
    std::copy(set, set + words_, scratch_a);
    std::uint64_t* child = depth_buffers_[depth + 1].data();
    for (std::size_t wi = 0; wi < words_; ++wi) {
      while (scratch_a[wi]) {
        const std::size_t i = wi * 64 + static_cast<std::size_t>(std::countr_zero(scratch_a[wi]));
        scratch_a[wi] &= scratch_a[wi] - 1;
        std::size_t remaining = 0;
        for (std::size_t wj = wi; wj < words_; ++wj) remaining += static_cast<std::size_t>(std::popcount(scratch_a[wj]));
        if (remaining + 1 < need) return false;
        const std::uint64_t* n = nbr(i);
        for (std::size_t wj = 0; wj < words_; ++wj) child[wj] = scratch_a[wj] & n[wj];
        path_.push_back(i);
        if (expand(depth + 1, need - 1)) return true;
        path_.pop_back();
        if (aborted_) return false;
      }
    }
    return false;
  }

  const Graph& g_;
  const Deadline& deadline_;
  const std::atomic<std::size_t>& best_;
  std::size_t v_ = 0;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
  std::vector<std::size_t> cand_;
  std::vector<std::uint64_t> local_;
  std::size_t words_ = 0;
  std::vector<std::vector<std::uint64_t>> depth_buffers_;
  std::vector<std::size_t> path_;
};

std::optional<std::vector<std::size_t>> find_clique_until(const Graph& g, std::size_t size, const Deadline& deadline,
                                                          unsigned threads, std::uint64_t* nodes) {
  const std::size_t n = g.size();
  if (size == 0) return std::vector<std::size_t>{};
  if (size == 1) {
    if (nodes) *nodes += 1;
    if (n == 0) return std::nullopt;
    return std::vector<std::size_t>{0};
  }

  std::atomic<std::size_t> best{n};
  std::vector<std::uint64_t> node_counts(n, 0);
  std::vector<std::size_t> winner;
  std::mutex winner_mutex;

  parallel_for(n, threads, [&](std::size_t v) {
    if (best.load() < v) return;
    LocalSearch search(g, deadline, best);
    auto clique = search.run(v, size);
    node_counts[v] = search.nodes();
    if (clique.empty()) return;
    std::lock_guard lock(winner_mutex);
    if (v < best.load()) {
      best.store(v);
      winner = std::move(clique);
    }
  });

  const std::size_t last = std::min(best.load(), n - 1);
  if (nodes) {
    for (std::size_t v = 0; v <= last; ++v) *nodes += node_counts[v];
  }
  if (best.load() == n) return std::nullopt;
  return winner;
}

}  // namespace

CliqueTimeout::CliqueTimeout(std::size_t lower_bound, std::vector<std::size_t> witness)
    : std::runtime_error("clique search exceeded its time budget (best lower bound " + std::to_string(lower_bound) +
                         ")"),
      lower_bound_(lower_bound),
      witness_(std::move(witness)) {}

std::optional<std::vector<std::size_t>> find_clique(const Graph& g, std::size_t size, const CliqueOptions& options,
                                                    std::uint64_t* nodes) {
  const Deadline deadline{Clock::now() + options.time_budget};
  return find_clique_until(g, size, deadline, options.threads, nodes);
}

CliqueResult max_clique(const Graph& g, const CliqueOptions& options) {
  const Deadline deadline{Clock::now() + options.time_budget};
  CliqueResult result;
  if (g.size() == 0) return result;
  const std::size_t limit = options.cutoff ? *options.cutoff + 1 : g.size();
  try {
    for (std::size_t t = 1; t <= limit; ++t) {
      auto found = find_clique_until(g, t, deadline, options.threads, &result.nodes);
      if (!found) break;
      result.omega = t;
      result.witness = std::move(*found);
      if (options.cutoff && t == limit) result.exact = false;
    }
  } catch (const CliqueTimeout&) {
    throw CliqueTimeout(result.omega, result.witness);
  }
  return result;
}

CliqueCertificate verify_k_free(const Graph& g, std::size_t k, const CliqueOptions& options) {
  const auto start = Clock::now();
  CliqueCertificate cert;
  cert.bound_k = k;
  auto found = find_clique(g, k, options, &cert.nodes);
  if (found) {
    cert.mode = CertificateMode::WitnessFound;
    cert.witness = std::move(*found);
  }
  cert.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return cert;
}

bool check_certificate(const Graph& g, const CliqueCertificate& cert) {
  if (cert.mode == CertificateMode::UpperBoundProof) return cert.witness.empty();
  const auto& w = cert.witness;
  if (w.size() != cert.bound_k) return false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] >= g.size()) return false;
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      if (w[i] == w[j] || !g.adjacent(w[i], w[j])) return false;
    }
  }
  return true;
}

std::string to_string(CertificateMode mode) {
  return mode == CertificateMode::UpperBoundProof ? "upper-bound-proof" : "witness-found";
}

std::string to_record(const GraphMeta& meta, const CliqueCertificate& cert) {
  std::ostringstream out;
  out << "[clique-certificate]\n";
  out << "family = " << meta.family << '\n';
  out << "k = " << meta.k << '\n';
  out << "q = " << meta.q << '\n';
  out << "epsilon = " << (meta.epsilon ? to_string(*meta.epsilon) : std::string("-")) << '\n';
  out << "mode = " << to_string(cert.mode) << '\n';
  out << "bound_k = " << cert.bound_k << '\n';
  out << "witness =";
  for (auto v : cert.witness) out << ' ' << v;
  out << '\n';
  out << "nodes = " << cert.nodes << '\n';
  return out.str();
}

}  // namespace orthograph
