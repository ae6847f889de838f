#include "defhyper/so_client.hpp"

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "defhyper/corpus.hpp"
#include "defhyper/postag.hpp"

namespace defhyper {

using nlohmann::json;
namespace fs = std::filesystem;

std::vector<TagRequest> read_tag_list(std::istream& in) {
  std::vector<TagRequest> out;
  std::unordered_map<std::string, std::size_t> where;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash == 0) continue;
    std::istringstream words(line);
    std::vector<std::string> group;
    for (std::string t; words >> t;) group.push_back(to_lower(t));
    for (const auto& tag : group) {
      auto [it, fresh] = where.emplace(tag, out.size());
      if (fresh) out.push_back({tag, {}});
      auto& partners = out[it->second].partners;
      for (const auto& other : group) {
        if (other != tag && std::find(partners.begin(), partners.end(), other) == partners.end()) {
          partners.push_back(other);
        }
      }
    }
  }
  return out;
}

namespace {

std::string percent_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 15];
    }
  }
  return out;
}

}  // namespace

std::string wiki_path(std::string_view tag, std::string_view site) {
  return "/2.3/tags/" + percent_encode(tag) + "/wikis?site=" + percent_encode(site);
}

std::string cache_file(const std::string& cache_dir, std::string_view tag) {
  // "c++" and "c%2B%2B" must not collide with a tag literally named that way,
  // so '%' itself is encoded too.
  return (fs::path(cache_dir) / (percent_encode(tag) + ".json")).string();
}

std::string resolve_cache_dir(const std::string& explicit_dir) {
  if (!explicit_dir.empty()) return explicit_dir;
  if (const char* env = std::getenv("DEFHYPER_CACHE"); env && *env) return env;
  return ".defhyper-cache";
}

std::string decode_html_entities(std::string_view s) {
  static const std::unordered_map<std::string, std::string> kNamed = {
      {"amp", "&"}, {"lt", "<"}, {"gt", ">"}, {"quot", "\""}, {"apos", "'"}, {"nbsp", " "}};
  std::string out;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] == '&') {
      const auto semi = s.find(';', k);
      if (semi != std::string_view::npos && semi - k <= 8) {
        const std::string name(s.substr(k + 1, semi - k - 1));
        if (const auto it = kNamed.find(name); it != kNamed.end()) {
          out += it->second;
          k = semi;
          continue;
        }
        if (name.size() > 1 && name[0] == '#') {
          const bool hex = name[1] == 'x' || name[1] == 'X';
          const long code = std::strtol(name.c_str() + (hex ? 2 : 1), nullptr, hex ? 16 : 10);
          if (code > 0 && code < 128) {
            out += static_cast<char>(code);
            k = semi;
            continue;
          }
        }
      }
    }
    out += s[k];
  }
  return out;
}

std::vector<std::string> tokenize_excerpt(std::string_view excerpt) {
  static constexpr std::string_view kPunct = ".,;:!?()\"'[]";
  std::vector<std::string> out;
  std::istringstream in{std::string(excerpt)};
  for (std::string w; in >> w;) {
    std::vector<std::string> tail;
    std::size_t b = 0, e = w.size();
    while (b < e && kPunct.find(w[b]) != std::string_view::npos) out.push_back(std::string(1, w[b++]));
    while (e > b && kPunct.find(w[e - 1]) != std::string_view::npos) tail.push_back(std::string(1, w[--e]));
    if (e > b) out.push_back(w.substr(b, e - b));
    out.insert(out.end(), tail.rbegin(), tail.rend());
  }
  return out;
}

std::optional<int> pattern_hypernym(const std::vector<std::string>& tokens) {
  const auto tags = fallback_tag(tokens);
  for (std::size_t k = 0; k + 2 < tokens.size(); ++k) {
    const std::string verb = to_lower(tokens[k]);
    const std::string det = to_lower(tokens[k + 1]);
    if (verb != "is" && verb != "are" && verb != "was" && verb != "were") continue;
    if (det != "a" && det != "an" && det != "the") continue;
    for (std::size_t j = k + 2; j < tokens.size(); ++j) {
      if (is_punctuation(tokens[j])) break;
      if (tags[j] == "NN" || tags[j] == "NNS") return static_cast<int>(j + 1);
    }
  }
  return std::nullopt;
}

FetchReport fetch_tag_wikis(const std::vector<TagRequest>& tags, const FetchOptions& options,
                            const Transport& transport, const Sleeper& sleeper) {
  FetchReport report;
  int pending_backoff = 0;
  if (!options.cache_dir.empty()) {
    std::error_code ec;
    fs::create_directories(options.cache_dir, ec);
  }

  for (const auto& req : tags) {
    const std::string path = cache_file(options.cache_dir, req.tag);
    std::string body;
    bool from_network = false;
    if (std::ifstream cached(path, std::ios::binary); cached) {
      std::ostringstream ss;
      ss << cached.rdbuf();
      body = ss.str();
      ++report.cache_hits;
    } else if (options.offline) {
      report.warnings.push_back(req.tag + ": not cached (offline)");
      continue;
    } else {
      if (pending_backoff > 0) {
        sleeper(pending_backoff);
        pending_backoff = 0;
      }
      ++report.requests;
      const HttpResponse resp = transport("api.stackexchange.com", wiki_path(req.tag, options.site));
      if (resp.status != 200) {
        std::string why = resp.status == 0 ? resp.error : "HTTP " + std::to_string(resp.status);
        // The API reports throttling and quota exhaustion in the error body.
        try {
          const auto err = json::parse(resp.body);
          if (err.contains("error_name")) why += " (" + err["error_name"].get<std::string>() + ")";
          if (err.value("error_id", 0) == 502) {
            report.warnings.push_back(req.tag + ": " + why);
            report.quota_exhausted = true;
            return report;
          }
        } catch (const json::exception&) {
        }
        report.warnings.push_back(req.tag + ": " + why);
        continue;
      }
      body = resp.body;
      from_network = true;
    }

    json j;
    try {
      j = json::parse(body);
    } catch (const json::exception&) {
      report.warnings.push_back(req.tag + ": unreadable response");
      continue;
    }
    if (from_network) {
      std::ofstream(path, std::ios::binary) << body;
      pending_backoff = j.value("backoff", 0);
    }

    const auto items = j.value("items", json::array());
    std::string excerpt;
    for (const auto& item : items) {
      if (item.contains("excerpt") && item["excerpt"].is_string()) {
        excerpt = item["excerpt"].get<std::string>();
        break;
      }
    }
    const auto tokens = tokenize_excerpt(decode_html_entities(excerpt));
    if (tokens.empty()) {
      report.warnings.push_back(req.tag + ": no tag wiki excerpt");
    } else {
      json rec;
      rec["term"] = req.tag;
      rec["tokens"] = tokens;
      rec["tag_partners"] = req.partners;
      if (options.annotate_pattern) {
        if (const auto g = pattern_hypernym(tokens)) {
          rec["hypernym_index"] = *g;
          rec["annotation"] = "pattern-heuristic";
        }
      }
      report.records.push_back(rec.dump());
    }
    if (from_network && j.contains("quota_remaining") && j["quota_remaining"].get<long>() <= 0) {
      report.warnings.push_back("API quota exhausted after tag " + req.tag);
      report.quota_exhausted = true;
      return report;
    }
  }
  return report;
}

}  // namespace defhyper
