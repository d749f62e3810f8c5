#include "molskit/search.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include <json.hpp>

#include "molskit/error.hpp"

namespace molskit {

// ---------------------------------------------------------------------------
// fixed points of a stabilizer

namespace {

struct FixConstraint {
  std::vector<Point> lower, lower_inv, upper, upper_inv;
  bool swap = false;
};

FixConstraint make_constraint(const IsoElement& s) {
  const auto n = s.n();
  const auto& inner = s.inner();
  FixConstraint c;
  c.swap = s.block_swap();
  c.lower.resize(n);
  c.upper.resize(n);
  c.lower_inv.resize(n);
  c.upper_inv.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    c.lower[i] = static_cast<Point>(c.swap ? inner[i] - n : inner[i]);
    c.upper[i] = static_cast<Point>(c.swap ? inner[i + n] : inner[i + n] - n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    c.lower_inv[c.lower[i]] = static_cast<Point>(i);
    c.upper_inv[c.upper[i]] = static_cast<Point>(i);
  }
  return c;
}

constexpr Point kUnset = static_cast<Point>(-1);

class FixedPointSolver {
public:
  FixedPointSolver(std::size_t n, std::span<const IsoElement> stabilizer, std::size_t node_limit,
                   const std::function<void(const Permutation&)>& visit)
      : n_(n), image_(n, kUnset), preimage_(n, kUnset), limit_(node_limit), visit_(visit) {
    for (const auto& s : stabilizer) {
      if (s.n() != n) throw DegreeMismatch("enumerate_fixed_points: stabilizer degree mismatch");
      if (s.inner().is_identity()) continue;
      constraints_.push_back(make_constraint(s));
    }
  }

  bool run() {
    search();
    return !stopped_;
  }
  std::size_t nodes() const { return std::min(nodes_, limit_); }

private:
  // b is fixed by a block-preserving s iff b[L[i]] = R[b[i]] for all i, and
  // by a block-swapping s iff b[R[b[i]]] = L[i] for all i.
  bool assign(Point x, Point v) {
    if (image_[x] == v) return true;
    if (image_[x] != kUnset || preimage_[v] != kUnset) return false;
    image_[x] = v;
    preimage_[v] = x;
    trail_.push_back(x);
    queue_.push_back(x);
    return true;
  }

  bool propagate() {
    while (!queue_.empty()) {
      const Point x = queue_.back();
      queue_.pop_back();
      const Point v = image_[x];
      for (const auto& c : constraints_) {
        bool ok = c.swap ? assign(c.upper[v], c.lower[x]) && assign(c.lower_inv[v], c.upper_inv[x])
                         : assign(c.lower[x], c.upper[v]) && assign(c.lower_inv[x], c.upper_inv[v]);
        if (!ok) {
          queue_.clear();
          return false;
        }
      }
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      const auto x = trail_.back();
      trail_.pop_back();
      preimage_[image_[x]] = kUnset;
      image_[x] = kUnset;
    }
  }

  void search() {
    std::size_t x = 0;
    while (x < n_ && image_[x] != kUnset) ++x;
    if (x == n_) {
      visit_(Permutation::from_images(image_));
      return;
    }
    for (std::size_t v = 0; v < n_ && !stopped_; ++v) {
      if (preimage_[v] != kUnset) continue;
      if (++nodes_ > limit_) {
        stopped_ = true;
        return;
      }
      const auto mark = trail_.size();
      if (assign(static_cast<Point>(x), static_cast<Point>(v)) && propagate()) search();
      undo(mark);
    }
  }

  std::size_t n_;
  std::vector<Point> image_, preimage_;
  std::vector<FixConstraint> constraints_;
  std::vector<Point> trail_, queue_;
  std::size_t limit_;
  std::size_t nodes_ = 0;
  bool stopped_ = false;
  const std::function<void(const Permutation&)>& visit_;
};

}  // namespace

bool enumerate_fixed_points(std::size_t n, std::span<const IsoElement> stabilizer,
                            std::size_t node_limit,
                            const std::function<void(const Permutation&)>& visit,
                            std::size_t* nodes_used) {
  FixedPointSolver solver(n, stabilizer, node_limit, visit);
  const bool complete = solver.run();
  if (nodes_used) *nodes_used = solver.nodes();
  return complete;
}

// ---------------------------------------------------------------------------
// candidates

std::optional<OrbitCandidate> make_candidate(const Permutation& representative, const IsoGroup& group) {
  auto words = orbit(representative, group);
  std::sort(words.begin(), words.end());
  OrbitCandidate cand;
  cand.representative = words.front();
  try {
    cand.internal_partition = separability_partition(words);
  } catch (const ValidationError&) {
    return std::nullopt;
  }
  cand.stabilizer_order = group.order() ? *group.order() / words.size() : 0;
  cand.words = std::move(words);
  return cand;
}

EnumerationResult enumerate_orbits(const SearchConfig& config,
                                   std::optional<std::span<const Permutation>> universe) {
  const IsoGroup group = config.group.materialized() ? config.group : generate_group(config.group.generators());
  for (const auto& s : config.required_stabilizer) {
    if (!group.contains(s)) {
      throw ValidationError("required stabilizer element " + format_cycles(s.inner()) + " is not in U");
    }
  }

  EnumerationResult result;
  std::unordered_set<Permutation, PermutationHash> covered;
  auto consider = [&](const Permutation& b) {
    if (b.degree() != group.n()) throw DegreeMismatch("enumerate_orbits: representative degree mismatch");
    if (covered.contains(b)) return;
    auto cand = make_candidate(b, group);
    const auto& words = cand ? cand->words : orbit(b, group);
    covered.insert(words.begin(), words.end());
    if (cand) result.candidates.push_back(std::move(*cand));
  };

  for (const auto& b : config.seed_orbits) consider(b);
  if (universe) {
    for (const auto& b : *universe) consider(b);
  }
  const bool enumerate = !config.required_stabilizer.empty() || (config.seed_orbits.empty() && !universe);
  if (enumerate) {
    result.complete = enumerate_fixed_points(group.n(), config.required_stabilizer, config.node_limit,
                                             consider, &result.nodes);
  }
  std::sort(result.candidates.begin(), result.candidates.end(), [](const auto& a, const auto& b) {
    if (a.words.size() != b.words.size()) return a.words.size() > b.words.size();
    return a.representative < b.representative;
  });
  return result;
}

// ---------------------------------------------------------------------------
// joining

namespace {

using Edge = std::pair<std::uint32_t, std::uint32_t>;

/// Union-find over word ids with an undo trail; tracks component size and
/// the number of distance-n edges inside each component.
class ClassForest {
public:
  explicit ClassForest(std::size_t words) : parent_(words), size_(words, 1), edges_(words, 0) {}

  void reset(std::uint32_t w) {
    trail_.push_back({w, parent_[w], size_[w], edges_[w]});
    parent_[w] = w;
    size_[w] = 1;
    edges_[w] = 0;
  }

  std::uint32_t find(std::uint32_t w) const {
    while (parent_[w] != w) w = parent_[w];
    return w;
  }

  void unite(std::uint32_t a, std::uint32_t b) {
    auto ra = find(a), rb = find(b);
    if (ra == rb) {
      trail_.push_back({ra, parent_[ra], size_[ra], edges_[ra]});
      ++edges_[ra];
      return;
    }
    if (size_[ra] < size_[rb]) std::swap(ra, rb);
    trail_.push_back({ra, parent_[ra], size_[ra], edges_[ra]});
    trail_.push_back({rb, parent_[rb], size_[rb], edges_[rb]});
    parent_[rb] = ra;
    size_[ra] += size_[rb];
    edges_[ra] += edges_[rb] + 1;
  }

  std::size_t mark() const { return trail_.size(); }
  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      const auto& t = trail_.back();
      parent_[t.id] = t.parent;
      size_[t.id] = t.size;
      edges_[t.id] = t.edges;
      trail_.pop_back();
    }
  }

  std::size_t size(std::uint32_t root) const { return size_[root]; }
  std::size_t edges(std::uint32_t root) const { return edges_[root]; }

private:
  struct Change {
    std::uint32_t id, parent, size;
    std::size_t edges;
  };
  std::vector<std::uint32_t> parent_, size_;
  std::vector<std::size_t> edges_;
  std::vector<Change> trail_;
};

/// Precomputed distance data for a fixed candidate list.
class JoinTables {
public:
  JoinTables(const std::vector<OrbitCandidate>& cands, std::size_t n) : n_(n), count_(cands.size()) {
    offsets_.push_back(0);
    for (const auto& c : cands) offsets_.push_back(offsets_.back() + static_cast<std::uint32_t>(c.words.size()));
    internal_.resize(count_);
    for (std::size_t a = 0; a < count_; ++a) {
      const auto& w = cands[a].words;
      for (std::uint32_t i = 0; i < w.size(); ++i)
        for (std::uint32_t j = i + 1; j < w.size(); ++j)
          if (hamming_distance(w[i], w[j]) == n) internal_[a].push_back({offsets_[a] + i, offsets_[a] + j});
    }
    cross_.resize(count_ * count_);
    distance_ok_.assign(count_ * count_, 0);
    for (std::size_t a = 0; a < count_; ++a) {
      for (std::size_t b = a + 1; b < count_; ++b) {
        bool ok = true;
        std::vector<Edge> edges;
        for (std::uint32_t i = 0; i < cands[a].words.size() && ok; ++i) {
          for (std::uint32_t j = 0; j < cands[b].words.size(); ++j) {
            const auto d = hamming_distance(cands[a].words[i], cands[b].words[j]);
            if (d + 1 < n) {
              ok = false;
              break;
            }
            if (d == n) edges.push_back({offsets_[a] + i, offsets_[b] + j});
          }
        }
        if (ok) {
          distance_ok_[a * count_ + b] = distance_ok_[b * count_ + a] = 1;
          cross_[a * count_ + b] = std::move(edges);
        }
      }
    }
  }

  std::size_t count() const { return count_; }
  std::size_t total_words() const { return offsets_.back(); }
  std::size_t words(std::size_t c) const { return offsets_[c + 1] - offsets_[c]; }
  bool distance_ok(std::size_t a, std::size_t b) const { return distance_ok_[a * count_ + b]; }

  /// Adds candidate x to the chosen set. Returns the number of new classes
  /// of size n, or -1 if some class stops being a clique of at most n words.
  long extend(ClassForest& forest, std::span<const std::size_t> chosen, std::size_t x) const {
    for (auto w = offsets_[x]; w < offsets_[x + 1]; ++w) forest.reset(w);
    for (const auto& [u, v] : internal_[x]) forest.unite(u, v);
    for (auto c : chosen) {
      const auto& edges = c < x ? cross_[c * count_ + x] : cross_[x * count_ + c];
      for (const auto& [u, v] : edges) forest.unite(u, v);
    }
    std::vector<std::uint32_t> roots;
    for (auto w = offsets_[x]; w < offsets_[x + 1]; ++w) roots.push_back(forest.find(w));
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    long full = 0;
    for (auto r : roots) {
      const auto s = forest.size(r);
      if (s > n_ || forest.edges(r) != s * (s - 1) / 2) return -1;
      if (s == n_) ++full;
    }
    return full;
  }

private:
  std::size_t n_;
  std::size_t count_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::vector<Edge>> internal_;
  std::vector<std::vector<Edge>> cross_;
  std::vector<std::uint8_t> distance_ok_;
};

struct BranchResult {
  std::size_t m = 0;
  std::vector<std::size_t> chosen;
  bool done = false;
};

class Joiner {
public:
  Joiner(const std::vector<OrbitCandidate>& cands, const SearchConfig& config, std::size_t n)
      : cands_(cands), config_(config), n_(n), tables_(cands, n), branches_(cands.size()) {}

  std::string fingerprint() const {
    std::size_t h = 1469598103934665603ull;
    auto mix = [&](std::size_t v) {
      h ^= v;
      h *= 1099511628211ull;
    };
    mix(n_);
    mix(config_.target_m.value_or(0));
    for (const auto& c : cands_) {
      mix(c.words.size());
      mix(PermutationHash{}(c.representative));
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
  }

  void load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) return;
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("checkpoint " + path.string() + ": " + e.what());
    }
    if (doc.value("format", "") != "molskit-search-checkpoint" || doc.value("version", 0) != 1) {
      throw ParseError("checkpoint " + path.string() + ": unsupported format");
    }
    if (doc.value("fingerprint", "") != fingerprint()) {
      throw ValidationError("checkpoint " + path.string() + " belongs to a different search");
    }
    resumed_nodes_ = doc.value("nodes", std::size_t{0});
    for (const auto& b : doc.at("branches")) {
      const auto idx = b.at("branch").get<std::size_t>();
      if (idx >= branches_.size()) throw ParseError("checkpoint: branch index out of range");
      branches_[idx] = {b.at("m").get<std::size_t>(), b.at("chosen").get<std::vector<std::size_t>>(), true};
      note_best(idx, branches_[idx].m);
    }
  }

  void write_checkpoint() {
    if (!config_.checkpoint) return;
    nlohmann::json doc;
    doc["format"] = "molskit-search-checkpoint";
    doc["version"] = 1;
    doc["fingerprint"] = fingerprint();
    doc["nodes"] = resumed_nodes_ + nodes_.load();
    doc["branches"] = nlohmann::json::array();
    {
      std::lock_guard lock(results_mutex_);
      for (std::size_t i = 0; i < branches_.size(); ++i) {
        if (!branches_[i].done) continue;
        doc["branches"].push_back({{"branch", i}, {"m", branches_[i].m}, {"chosen", branches_[i].chosen}});
      }
    }
    const auto tmp = config_.checkpoint->string() + ".tmp";
    {
      std::ofstream out(tmp);
      out << doc.dump(1) << '\n';
    }
    std::filesystem::rename(tmp, *config_.checkpoint);
  }

  void run() {
    if (config_.checkpoint) load_checkpoint(*config_.checkpoint);
    const auto workers = std::max<std::size_t>(1, config_.workers);
    if (workers == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (std::size_t i = 0; i < workers; ++i) pool.emplace_back([this] { work(); });
      for (auto& t : pool) t.join();
    }
    write_checkpoint();
  }

  SearchResult result() const {
    SearchResult out;
    out.nodes = std::min(resumed_nodes_ + nodes_.load(), config_.node_limit);
    out.complete = !stop_.load();
    // A target hit decides by branch order; otherwise the largest m wins,
    // ties going to the lowest branch.
    const auto hit = first_hit_.load();
    if (hit < branches_.size()) {
      out.m = branches_[hit].m;
      out.chosen = branches_[hit].chosen;
      out.complete = true;
      return out;
    }
    for (const auto& b : branches_) {
      if (b.m > out.m) {
        out.m = b.m;
        out.chosen = b.chosen;
      }
    }
    return out;
  }

private:
  void note_best(std::size_t branch, std::size_t m) {
    auto cur = global_best_.load();
    while (m > cur && !global_best_.compare_exchange_weak(cur, m)) {
    }
    if (config_.target_m && m >= *config_.target_m) {
      auto h = first_hit_.load();
      while (branch < h && !first_hit_.compare_exchange_weak(h, branch)) {
      }
    }
  }

  void work() {
    while (!stop_.load()) {
      const auto b = next_branch_.fetch_add(1);
      if (b >= cands_.size()) return;
      if (b > first_hit_.load()) return;
      {
        std::lock_guard lock(results_mutex_);
        if (branches_[b].done) continue;
      }
      Branch br{this, b, 0, {}, false, false};
      br.run();
      if (br.aborted) continue;
      std::lock_guard lock(results_mutex_);
      branches_[b] = {br.best_m, br.best_chosen, true};
    }
  }

  struct Branch {
    Joiner* self;
    std::size_t index;
    std::size_t best_m = 0;
    std::vector<std::size_t> best_chosen;
    bool aborted = false;
    bool hit = false;

    void run() {
      ClassForest forest(self->tables_.total_words());
      std::vector<std::size_t> chosen;
      const long full = self->tables_.extend(forest, chosen, index);
      if (full < 0) return;
      chosen.push_back(index);
      std::vector<std::size_t> allowed;
      for (std::size_t j = index + 1; j < self->cands_.size(); ++j)
        if (self->tables_.distance_ok(index, j)) allowed.push_back(j);
      dfs(forest, chosen, allowed, self->tables_.words(index), static_cast<std::size_t>(full));
    }

    bool should_abort() {
      if (self->stop_.load() || self->first_hit_.load() < index) {
        aborted = true;
        return true;
      }
      const auto count = self->nodes_.fetch_add(1) + 1;
      if (self->resumed_nodes_ + count > self->config_.node_limit) {
        self->stop_.store(true);
        aborted = true;
        return true;
      }
      if (self->config_.checkpoint && count % self->config_.checkpoint_interval == 0) {
        self->write_checkpoint();
      }
      return false;
    }

    void dfs(ClassForest& forest, std::vector<std::size_t>& chosen, const std::vector<std::size_t>& allowed,
             std::size_t words, std::size_t full) {
      if (aborted || hit || should_abort()) return;
      const auto n = self->n_;
      if (full * n == words) {
        const auto m = words / n;
        if (m > best_m) {
          best_m = m;
          best_chosen = chosen;
          self->note_best(index, m);
          if (self->config_.target_m && m >= *self->config_.target_m) {
            hit = true;
            return;
          }
        }
      }
      std::size_t budget = words;
      for (auto j : allowed) budget += self->tables_.words(j);
      auto floor_bound = self->global_best_.load();
      if (self->config_.target_m) floor_bound = std::min(floor_bound, *self->config_.target_m);
      if (budget / n <= best_m || budget / n < floor_bound) return;

      for (std::size_t k = 0; k < allowed.size(); ++k) {
        const auto j = allowed[k];
        const auto mark = forest.mark();
        const long added = self->tables_.extend(forest, chosen, j);
        if (added >= 0) {
          std::vector<std::size_t> next;
          for (std::size_t t = k + 1; t < allowed.size(); ++t)
            if (self->tables_.distance_ok(j, allowed[t])) next.push_back(allowed[t]);
          chosen.push_back(j);
          dfs(forest, chosen, next, words + self->tables_.words(j), full + static_cast<std::size_t>(added));
          chosen.pop_back();
        }
        forest.undo(mark);
        if (aborted || hit) return;
      }
    }
  };

  const std::vector<OrbitCandidate>& cands_;
  const SearchConfig& config_;
  std::size_t n_;
  JoinTables tables_;
  std::vector<BranchResult> branches_;
  std::mutex results_mutex_;
  std::atomic<std::size_t> next_branch_{0};
  std::atomic<std::size_t> nodes_{0};
  std::size_t resumed_nodes_ = 0;
  std::atomic<std::size_t> global_best_{0};
  std::atomic<std::size_t> first_hit_{static_cast<std::size_t>(-1)};
  std::atomic<bool> stop_{false};
};

}  // namespace

bool compatible(const OrbitCandidate& a, const OrbitCandidate& b) {
  if (a.words.empty() || b.words.empty()) return false;
  const auto n = a.words.front().degree();
  if (b.words.front().degree() != n) return false;
  std::vector<OrbitCandidate> pair{a, b};
  JoinTables tables(pair, n);
  if (!tables.distance_ok(0, 1)) return false;
  ClassForest forest(tables.total_words());
  std::vector<std::size_t> chosen;
  if (tables.extend(forest, chosen, 0) < 0) return false;
  chosen.push_back(0);
  return tables.extend(forest, chosen, 1) >= 0;
}

SearchResult backtrack_join(std::vector<OrbitCandidate> candidates, const SearchConfig& config) {
  if (candidates.empty()) throw ValidationError("backtrack_join: no candidates");
  const auto n = candidates.front().words.front().degree();
  for (const auto& c : candidates) {
    if (c.words.empty() || c.words.front().degree() != n) {
      throw DegreeMismatch("backtrack_join: candidates of mixed degree");
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (a.words.size() != b.words.size()) return a.words.size() > b.words.size();
    return a.representative < b.representative;
  });

  Joiner joiner(candidates, config, n);
  joiner.run();
  auto result = joiner.result();
  std::vector<Permutation> words;
  for (auto c : result.chosen) words.insert(words.end(), candidates[c].words.begin(), candidates[c].words.end());
  result.code = PermutationCode(n, std::move(words));
  if (result.m > 0) {
    if (result.code.size() >= 2 && !verify_pa(result.code.words(), n - 1).ok) {
      throw std::logic_error("backtrack_join produced a code below distance n-1");
    }
    auto partition = separability_partition(result.code.words());
    if (partition.r != n || partition.m != result.m) {
      throw std::logic_error("backtrack_join produced an unverified separable code");
    }
    result.partition = std::move(partition);
  }
  return result;
}

}  // namespace molskit
