#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "floodpulse/dates.hpp"
#include "floodpulse/errors.hpp"
#include "floodpulse/rng.hpp"
#include "floodpulse/social.hpp"

namespace floodpulse::netdyn {

enum class NodeKind { Poster, Target };

inline const char* node_kind_name(NodeKind k) { return k == NodeKind::Poster ? "poster" : "target"; }

/// A handle may exist as both a poster node and a target node; the pair
/// (kind, id) identifies a node.
struct ActorNode {
  std::string id;
  NodeKind kind = NodeKind::Poster;
  social::Gender gender = social::Gender::Unknown;
};

enum class EdgeKind { Mention, Retweet };

inline const char* edge_kind_name(EdgeKind k) { return k == EdgeKind::Mention ? "mention" : "retweet"; }

struct TemporalEdge {
  std::string src;  // poster node id
  std::string dst;  // target node id
  Date date{};
  EdgeKind kind = EdgeKind::Mention;
  std::string post_id;
};

struct Network {
  std::vector<ActorNode> nodes;  // posters first, then targets, each sorted by id
  std::vector<TemporalEdge> edges;
};

namespace detail {

inline bool handle_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

struct ParsedTarget {
  std::string handle;  // case-folded
  EdgeKind kind;
};

// "@handle" tokens, case-folded; a leading "RT @handle" marks a retweet.
// The '@' must not be glued to a preceding handle character (emails).
inline std::vector<ParsedTarget> parse_targets(const std::string& text) {
  std::vector<ParsedTarget> out;
  std::size_t start = 0;
  while (start < text.size() && std::isspace(static_cast<unsigned char>(text[start]))) ++start;

  bool retweet_prefix = false;
  std::size_t scan = start;
  if (text.compare(start, 2, "RT") == 0) {
    std::size_t i = start + 2;
    bool spaced = false;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) {
      spaced = true;
      ++i;
    }
    if (spaced && i < text.size() && text[i] == '@') {
      retweet_prefix = true;
      scan = i;
    }
  }

  bool first = true;
  for (std::size_t i = scan; i < text.size(); ++i) {
    if (text[i] != '@') continue;
    if (i > 0 && handle_char(text[i - 1])) continue;
    std::size_t j = i + 1;
    while (j < text.size() && handle_char(text[j])) ++j;
    if (j == i + 1) continue;
    std::string handle = text.substr(i + 1, j - i - 1);
    std::transform(handle.begin(), handle.end(), handle.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    const bool is_retweet = retweet_prefix && first && i == scan;
    out.push_back({std::move(handle), is_retweet ? EdgeKind::Retweet : EdgeKind::Mention});
    first = false;
    i = j - 1;
  }
  return out;
}

}  // namespace detail

/// Bipartite temporal network from posts inside the interval: authors become
/// poster nodes, parsed "@" addresses become target nodes. Duplicate
/// (post, target) pairs collapse to one edge.
inline Network build_network(std::span<const social::SocialPost> posts, DateRange interval) {
  if (interval.end < interval.start) throw InvalidRange("inverted interval");

  std::map<std::string, social::Gender> posters;
  std::set<std::string> targets;
  Network net;
  for (const auto& post : posts) {
    if (!interval.contains(post.ts.day())) continue;
    auto [it, fresh] = posters.emplace(post.author_id, post.gender);
    if (!fresh && it->second == social::Gender::Unknown) it->second = post.gender;

    std::set<std::string> seen;
    for (auto& target : detail::parse_targets(post.text)) {
      if (!seen.insert(target.handle).second) continue;  // one edge per (post, target)
      targets.insert(target.handle);
      net.edges.push_back({post.author_id, target.handle, post.ts.day(), target.kind, post.id});
    }
  }
  for (const auto& [id, gender] : posters) net.nodes.push_back({id, NodeKind::Poster, gender});
  for (const auto& id : targets)
    net.nodes.push_back({id, NodeKind::Target, social::Gender::Unknown});
  return net;
}

/// Per-node daily link counts over the interval.
struct LinkTimeline {
  std::string node_id;
  NodeKind kind = NodeKind::Poster;
  DateRange interval;
  std::vector<double> bins;  // length = interval.days()
};

/// Timelines for every node of the requested kind with at least one incident
/// edge inside the interval.
inline std::vector<LinkTimeline> node_timelines(std::span<const TemporalEdge> edges,
                                                DateRange interval, NodeKind kind) {
  if (interval.end < interval.start) throw InvalidRange("inverted interval");
  const std::size_t n_days = std::size_t(interval.days());
  std::map<std::string, std::vector<double>> bins;
  for (const auto& e : edges) {
    if (!interval.contains(e.date)) continue;
    const std::string& id = kind == NodeKind::Poster ? e.src : e.dst;
    auto [it, fresh] = bins.try_emplace(id, std::vector<double>(n_days, 0.0));
    it->second[std::size_t((e.date - interval.start).count())] += 1.0;
  }
  std::vector<LinkTimeline> out;
  out.reserve(bins.size());
  for (auto& [id, b] : bins) out.push_back({id, kind, interval, std::move(b)});
  return out;
}

struct KMeansResult {
  std::vector<int> assignments;
  std::vector<std::vector<double>> centroids;
  double inertia = 0;
  std::vector<double> inertia_history;  // one entry per Lloyd iteration
};

namespace detail {

inline double sq_dist(std::span<const double> a, std::span<const double> b) {
  double acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

}  // namespace detail

/// Seeded k-means++ with Lloyd iterations until the assignment fixpoint.
/// Empty clusters are reseeded to the point farthest from its own centroid.
/// The result is a deterministic function of (vectors, k, seed).
inline KMeansResult kmeans(const std::vector<std::vector<double>>& vectors, int k,
                           std::uint64_t seed, int max_iter = 100) {
  const std::size_t n = vectors.size();
  if (k < 1 || std::size_t(k) > n) throw InvalidParameter("k must be in [1, n]");
  if (max_iter < 1) throw InvalidParameter("max_iter must be >= 1");
  const std::size_t dim = vectors[0].size();
  for (const auto& v : vectors)
    if (v.size() != dim) throw InvalidParameter("vectors must share one length");

  rng::Generator gen(seed);
  std::vector<std::vector<double>> centroids;
  centroids.reserve(std::size_t(k));

  // k-means++ seeding
  centroids.push_back(vectors[gen.index(n)]);
  std::vector<double> d2(n);
  for (int j = 1; j < k; ++j) {
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : centroids) best = std::min(best, detail::sq_dist(vectors[i], c));
      d2[i] = best;
      total += best;
    }
    std::size_t pick;
    if (total > 0) {
      const double r = gen.uniform01() * total;
      double acc = 0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= r) {
          pick = i;
          break;
        }
      }
    } else {
      pick = gen.index(n);  // coincident points
    }
    centroids.push_back(vectors[pick]);
  }

  KMeansResult res;
  res.assignments.assign(n, 0);
  std::vector<int> prev(n, -1);

  for (int iter = 0; iter < max_iter; ++iter) {
    // assignment step; ties go to the lowest centroid index
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int arg = 0;
      for (int c = 0; c < k; ++c) {
        const double d = detail::sq_dist(vectors[i], centroids[std::size_t(c)]);
        if (d < best) {
          best = d;
          arg = c;
        }
      }
      res.assignments[i] = arg;
    }

    // reseed empty clusters with the globally worst-fit point
    std::vector<std::size_t> sizes(std::size_t(k), 0);
    for (int a : res.assignments) ++sizes[std::size_t(a)];
    for (int c = 0; c < k; ++c) {
      if (sizes[std::size_t(c)] > 0) continue;
      std::size_t worst = 0;
      double worst_d = -1;
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[std::size_t(res.assignments[i])] <= 1) continue;
        const double d =
            detail::sq_dist(vectors[i], centroids[std::size_t(res.assignments[i])]);
        if (d > worst_d) {
          worst_d = d;
          worst = i;
        }
      }
      --sizes[std::size_t(res.assignments[worst])];
      res.assignments[worst] = c;
      sizes[std::size_t(c)] = 1;
      centroids[std::size_t(c)] = vectors[worst];
    }

    // update step
    for (int c = 0; c < k; ++c) {
      std::vector<double> mean(dim, 0.0);
      std::size_t count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (res.assignments[i] != c) continue;
        for (std::size_t d = 0; d < dim; ++d) mean[d] += vectors[i][d];
        ++count;
      }
      for (std::size_t d = 0; d < dim; ++d) mean[d] /= double(count);
      centroids[std::size_t(c)] = std::move(mean);
    }

    double inertia = 0;
    for (std::size_t i = 0; i < n; ++i)
      inertia += detail::sq_dist(vectors[i], centroids[std::size_t(res.assignments[i])]);
    res.inertia_history.push_back(inertia);

    if (res.assignments == prev) break;
    prev = res.assignments;
  }

  res.centroids = centroids;
  res.inertia = res.inertia_history.back();
  return res;
}

/// Cluster roll-up: member ids, elementwise-summed timeline, and the member
/// mean as centroid (identical to the converged k-means centroid).
struct ProfileCluster {
  std::vector<double> centroid;
  std::vector<std::string> member_ids;
  std::vector<double> aggregate;
};

inline std::vector<ProfileCluster> profile_aggregate(const std::vector<int>& assignments,
                                                     const std::vector<LinkTimeline>& timelines) {
  if (assignments.size() != timelines.size())
    throw InvalidParameter("assignments must cover all timelines");
  if (timelines.empty()) return {};
  int k = 0;
  for (int a : assignments) k = std::max(k, a + 1);
  const std::size_t dim = timelines[0].bins.size();

  std::vector<ProfileCluster> out{std::size_t(k)};
  for (auto& c : out) c.aggregate.assign(dim, 0.0);
  for (std::size_t i = 0; i < timelines.size(); ++i) {
    auto& cluster = out[std::size_t(assignments[i])];
    cluster.member_ids.push_back(timelines[i].node_id);
    for (std::size_t d = 0; d < dim; ++d) cluster.aggregate[d] += timelines[i].bins[d];
  }
  std::erase_if(out, [](const ProfileCluster& c) { return c.member_ids.empty(); });
  for (auto& c : out) {
    c.centroid.assign(dim, 0.0);
    for (std::size_t d = 0; d < dim; ++d)
      c.centroid[d] = c.aggregate[d] / double(c.member_ids.size());
  }
  return out;
}

struct GenderSplit {
  std::vector<LinkTimeline> female, male, unknown;
};

/// Partitions timelines by the gender annotated on the matching node.
inline GenderSplit gender_split(std::span<const ActorNode> nodes,
                                std::span<const LinkTimeline> timelines) {
  std::map<std::pair<std::string, NodeKind>, social::Gender> gender_of;
  for (const auto& node : nodes) gender_of[{node.id, node.kind}] = node.gender;

  GenderSplit out;
  for (const auto& tl : timelines) {
    auto it = gender_of.find({tl.node_id, tl.kind});
    const auto g = it == gender_of.end() ? social::Gender::Unknown : it->second;
    switch (g) {
      case social::Gender::Female: out.female.push_back(tl); break;
      case social::Gender::Male: out.male.push_back(tl); break;
      default: out.unknown.push_back(tl); break;
    }
  }
  return out;
}

/// Optional per-vector L1 normalization ahead of clustering.
inline std::vector<std::vector<double>> l1_normalized(const std::vector<LinkTimeline>& timelines) {
  std::vector<std::vector<double>> out;
  out.reserve(timelines.size());
  for (const auto& tl : timelines) {
    double sum = 0;
    for (double v : tl.bins) sum += v;
    std::vector<double> row = tl.bins;
    if (sum > 0)
      for (double& v : row) v /= sum;
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace floodpulse::netdyn
