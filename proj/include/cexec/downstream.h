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

#ifndef CEXEC_DOWNSTREAM_H_
#define CEXEC_DOWNSTREAM_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cexec {

// Levenshtein distance over bytes.
std::size_t EditDistance(std::string_view a, std::string_view b);

// 1 - distance / max(|a|, |b|); two empty strings are identical.
double EditSimilarity(std::string_view a, std::string_view b);

struct SearchCandidate {
  std::string id;
  std::string output;
  std::string problem_id;
};

struct SearchInstance {
  std::string query_id;
  std::string query_output;
  std::string query_problem_id;
  std::vector<SearchCandidate> candidates;
};

struct RankedCandidate {
  SearchCandidate candidate;
  double similarity = 0.0;
};

// Descending similarity to the query output, ties by ascending id. Outputs
// lose one trailing newline before comparison.
std::vector<RankedCandidate> RankCandidates(const SearchInstance& instance);

// Mean of precision@i over the ranks i holding relevant items; 0 when
// nothing is relevant.
double AveragePrecision(const std::vector<bool>& relevant);

// AP of each query's ranking with relevance = same problem. Throws
// Error(kEmptyCorpus) or Error(kDomainError) for an instance without
// candidates.
double MeanAveragePrecision(const std::vector<SearchInstance>& instances);

// 1 - C(n-c, k) / C(n, k). Throws Error(kDomainError) unless
// 0 <= c <= n and 1 <= k <= n.
double PassAtK(long long n, long long c, long long k);

struct RankingSolution {
  std::string id;
  std::string output;
  bool is_correct = false;
};

struct RankingInstance {
  std::string problem_id;
  std::string expected_output;
  std::vector<RankingSolution> solutions;
};

// Ranks solutions by similarity to the expected output (ties by id), keeps
// the first `top_m` and returns pass@k for each k over them.
std::vector<double> FilterAndScore(const RankingInstance& instance, int top_m,
                                   const std::vector<int>& ks);

}  // namespace cexec

#endif  // CEXEC_DOWNSTREAM_H_
