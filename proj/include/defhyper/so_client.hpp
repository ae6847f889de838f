#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace defhyper {

// Client for Stack Exchange tag-wiki excerpts, cache-first.

struct HttpResponse {
  int status = 0;     // 0 when the request never completed
  std::string body;
  std::string error;  // transport-level failure description
};

// GET https://<host><path_and_query>
using Transport = std::function<HttpResponse(const std::string& host, const std::string& path)>;
using Sleeper = std::function<void(int seconds)>;

Transport https_transport();
Sleeper real_sleeper();

struct TagRequest {
  std::string tag;
  std::vector<std::string> partners;
};

// Each line lists co-listed tags; every tag gets the others as partners.
// Tags keep their first-seen order and partners merge across lines.
std::vector<TagRequest> read_tag_list(std::istream& in);

struct FetchOptions {
  std::string cache_dir;
  bool offline = false;
  bool annotate_pattern = false;
  std::string site = "stackoverflow";
};

struct FetchReport {
  std::vector<std::string> records;  // JSON Lines
  std::vector<std::string> warnings;
  bool quota_exhausted = false;
  std::size_t requests = 0;
  std::size_t cache_hits = 0;
};

std::string wiki_path(std::string_view tag, std::string_view site);
std::string cache_file(const std::string& cache_dir, std::string_view tag);

// Cache directory: explicit value, else $DEFHYPER_CACHE, else ".defhyper-cache".
std::string resolve_cache_dir(const std::string& explicit_dir);

std::string decode_html_entities(std::string_view s);
// Whitespace split, then leading/trailing punctuation split off as tokens.
std::vector<std::string> tokenize_excerpt(std::string_view excerpt);

// Heuristic gold: first noun after "is/are/was/were a/an/the" (1-based
// token index). Meant to pre-fill annotations for human review.
std::optional<int> pattern_hypernym(const std::vector<std::string>& tokens);

FetchReport fetch_tag_wikis(const std::vector<TagRequest>& tags, const FetchOptions& options,
                            const Transport& transport, const Sleeper& sleeper);

}  // namespace defhyper
