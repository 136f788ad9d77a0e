// Copyright 2026 The cexec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cexec/downstream.h"

#include <algorithm>
#include <numeric>

#include "cexec/error.h"

namespace cexec {

namespace {

std::string_view StripNewline(std::string_view text) {
  if (!text.empty() && text.back() == '\n') {
    text.remove_suffix(1);
  }
  return text;
}

// C(n, k) when it fits in 128 bits, else 0.
unsigned __int128 Binomial(long long n, long long k) {
  if (k < 0 || k > n) {
    return 0;
  }
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (long long i = 1; i <= k; ++i) {
    unsigned __int128 next = result * static_cast<unsigned __int128>(n - k + i);
    if (next / static_cast<unsigned __int128>(n - k + i) != result) {
      return 0;
    }
    result = next / static_cast<unsigned __int128>(i);
  }
  return result;
}

}  // namespace

std::size_t EditDistance(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) {
    std::swap(a, b);
  }
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t above = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diagonal + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diagonal = above;
    }
  }
  return row[b.size()];
}

double EditSimilarity(std::string_view a, std::string_view b) {
  std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) {
    return 1.0;
  }
  return 1.0 - static_cast<double>(EditDistance(a, b)) /
                   static_cast<double>(longest);
}

std::vector<RankedCandidate> RankCandidates(const SearchInstance& instance) {
  std::vector<RankedCandidate> ranked;
  std::string_view query = StripNewline(instance.query_output);
  for (const SearchCandidate& candidate : instance.candidates) {
    ranked.push_back(RankedCandidate{
        candidate, EditSimilarity(query, StripNewline(candidate.output))});
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const RankedCandidate& a, const RankedCandidate& b) {
              if (a.similarity != b.similarity) {
                return a.similarity > b.similarity;
              }
              return a.candidate.id < b.candidate.id;
            });
  return ranked;
}

double AveragePrecision(const std::vector<bool>& relevant) {
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < relevant.size(); ++i) {
    if (relevant[i]) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return hits == 0 ? 0.0 : sum / static_cast<double>(hits);
}

double MeanAveragePrecision(const std::vector<SearchInstance>& instances) {
  if (instances.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no search queries");
  }
  double sum = 0.0;
  for (const SearchInstance& instance : instances) {
    if (instance.candidates.empty()) {
      throw Error(ErrorCode::kDomainError,
                  "query " + instance.query_id + " has no candidates");
    }
    std::vector<bool> relevant;
    for (const RankedCandidate& r : RankCandidates(instance)) {
      relevant.push_back(r.candidate.problem_id == instance.query_problem_id);
    }
    sum += AveragePrecision(relevant);
  }
  return sum / static_cast<double>(instances.size());
}

double PassAtK(long long n, long long c, long long k) {
  if (n < 0 || c < 0 || c > n || k < 1 || k > n) {
    throw Error(ErrorCode::kDomainError,
                "pass@k needs 0 <= c <= n and 1 <= k <= n (n=" +
                    std::to_string(n) + ", c=" + std::to_string(c) +
                    ", k=" + std::to_string(k) + ")");
  }
  if (n - c < k) {
    return 1.0;
  }
  unsigned __int128 total = Binomial(n, k);
  unsigned __int128 misses = Binomial(n - c, k);
  if (total != 0) {
    return static_cast<double>(total - misses) / static_cast<double>(total);
  }
  // Product form for sizes whose binomials overflow.
  double miss = 1.0;
  for (long long i = n - c + 1; i <= n; ++i) {
    miss *= 1.0 - static_cast<double>(k) / static_cast<double>(i);
  }
  return 1.0 - miss;
}

std::vector<double> FilterAndScore(const RankingInstance& instance, int top_m,
                                   const std::vector<int>& ks) {
  if (instance.solutions.empty() || top_m < 1) {
    throw Error(ErrorCode::kDomainError,
                "ranking needs solutions and top_m >= 1");
  }
  SearchInstance search;
  search.query_output = instance.expected_output;
  for (const RankingSolution& s : instance.solutions) {
    search.candidates.push_back(SearchCandidate{s.id, s.output, ""});
  }
  std::vector<RankedCandidate> ranked = RankCandidates(search);
  long long n = std::min<long long>(top_m, static_cast<long long>(ranked.size()));
  long long c = 0;
  for (long long i = 0; i < n; ++i) {
    const std::string& id = ranked[static_cast<std::size_t>(i)].candidate.id;
    auto it = std::find_if(
        instance.solutions.begin(), instance.solutions.end(),
        [&](const RankingSolution& s) { return s.id == id; });
    c += it->is_correct ? 1 : 0;
  }
  std::vector<double> out;
  for (int k : ks) {
    out.push_back(PassAtK(n, c, k));
  }
  return out;
}

}  // namespace cexec
