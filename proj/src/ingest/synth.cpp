#include <algorithm>
#include <cmath>

#include "common.hpp"
#include "lakebench/error.hpp"
#include "lakebench/rng.hpp"

namespace lakebench {
namespace {

class ZipfSampler {
 public:
  ZipfSampler(std::uint64_t vocab, double exponent) : cdf_(vocab) {
    double total = 0.0;
    for (std::uint64_t r = 0; r < vocab; ++r) {
      total += std::pow(static_cast<double>(r + 1), -exponent);
      cdf_[r] = total;
    }
  }

  std::size_t draw(RandomStream& rng) const {
    const double u = rng.uniform_unit() * cdf_.back();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

  // Exact draw from the distribution restricted to ranks not in `taken`.
  std::size_t draw_excluding(RandomStream& rng, const std::vector<std::size_t>& taken) const {
    const auto weight = [&](std::size_t r) { return cdf_[r] - (r == 0 ? 0.0 : cdf_[r - 1]); };
    double remaining = cdf_.back();
    for (auto r : taken) remaining -= weight(r);
    double u = rng.uniform_unit() * remaining;
    std::size_t last = cdf_.size();
    for (std::size_t r = 0; r < cdf_.size(); ++r) {
      if (std::find(taken.begin(), taken.end(), r) != taken.end()) continue;
      last = r;
      u -= weight(r);
      if (u < 0.0) return r;
    }
    return last;
  }

 private:
  std::vector<double> cdf_;
};

}  // namespace

void SynthConfig::validate() const {
  if (node_count == 0) throw InvalidInput("node_count must be at least 1");
  if (vocab_size == 0) throw InvalidInput("vocab_size must be at least 1");
  if (keywords_per_node == 0) throw InvalidInput("keywords_per_node must be at least 1");
  if (vocab_size < keywords_per_node) {
    throw InvalidInput("vocab_size (" + std::to_string(vocab_size) +
                       ") must be at least keywords_per_node (" +
                       std::to_string(keywords_per_node) + ")");
  }
  if (!(zipf_exponent > 0.0) || !std::isfinite(zipf_exponent)) {
    throw InvalidInput("zipf_exponent must be a positive number");
  }
  if (!(mean_degree >= 0.0) || !std::isfinite(mean_degree)) {
    throw InvalidInput("mean_degree must be a non-negative number");
  }
  if (!(mean_degree < static_cast<double>(node_count))) {
    throw InvalidInput("mean_degree must be less than node_count");
  }
}

IngestReport generate_synthetic(const SynthConfig& config, const std::filesystem::path& out_dir) {
  config.validate();
  const auto n = config.node_count;
  const auto k = static_cast<std::size_t>(config.keywords_per_node);

  GraphBuilder builder;
  {
    RandomStream rng(config.seed, "synthetic.keywords");
    const ZipfSampler zipf(config.vocab_size, config.zipf_exponent);
    std::vector<std::size_t> ranks;
    std::vector<std::string> keywords;
    for (std::uint64_t i = 0; i < n; ++i) {
      ranks.clear();
      while (ranks.size() < k) {
        std::size_t r = zipf.draw(rng);
        for (int tries = 0; std::find(ranks.begin(), ranks.end(), r) != ranks.end(); ++tries) {
          r = tries < 32 ? zipf.draw(rng) : zipf.draw_excluding(rng, ranks);
        }
        ranks.push_back(r);
      }
      keywords.clear();
      for (auto r : ranks) keywords.push_back("kw" + std::to_string(r));
      builder.add_node(i, keywords);
    }
  }

  // Preferential attachment: node i links to about mean_degree/2 earlier
  // nodes, each picked with probability proportional to degree + 1. `pool`
  // holds every node once per unit of attractiveness.
  {
    RandomStream rng(config.seed, "synthetic.edges");
    const double half = config.mean_degree / 2.0;
    const auto base = static_cast<std::uint64_t>(std::floor(half));
    const double frac = half - static_cast<double>(base);
    std::vector<std::uint32_t> pool;
    std::vector<std::uint32_t> chosen;
    for (std::uint64_t i = 0; i < n; ++i) {
      std::uint64_t m = base + (rng.uniform_unit() < frac ? 1 : 0);
      m = std::min(m, i);
      chosen.clear();
      std::uint64_t rejections = 0;
      while (chosen.size() < m) {
        std::uint32_t t;
        if (rejections < 64 + 32 * m) {
          t = pool[rng.uniform_index(pool.size())];
        } else {
          // Uniform over the earlier nodes not yet chosen.
          auto pick = rng.uniform_index(i - chosen.size());
          t = 0;
          for (;; ++t) {
            if (std::find(chosen.begin(), chosen.end(), t) != chosen.end()) continue;
            if (pick-- == 0) break;
          }
        }
        if (std::find(chosen.begin(), chosen.end(), t) != chosen.end()) {
          ++rejections;
          continue;
        }
        chosen.push_back(t);
      }
      for (auto t : chosen) {
        builder.add_edge(node_id(i), node_id(t));
        pool.push_back(t);
      }
      pool.insert(pool.end(), m + 1, static_cast<std::uint32_t>(i));
    }
  }

  IngestReport report;
  report.records_read = n;
  report.records_accepted = n;
  detail::write_outputs(std::move(builder), out_dir, report);
  return report;
}

}  // namespace lakebench
