#include "defhyper/postag.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace defhyper {
namespace {

constexpr std::array<std::string_view, kPosCount> kNames = {
    "DT",  "EX",  "IN",  "NN",  "TO",  "VB",  "VBD", "VBG",
    "VBN", "VBP", "VBZ", "WDT", "WP",  "WP$", "WRB", "NULL"};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

const std::unordered_map<std::string, std::string>& lexicon() {
  static const std::unordered_map<std::string, std::string> table = [] {
    std::unordered_map<std::string, std::string> t;
    auto put = [&t](std::initializer_list<const char*> words, const char* tag) {
      for (const char* w : words) t.emplace(w, tag);
    };
    put({"a", "an", "the", "this", "these", "those", "each", "every", "some",
         "any", "no", "another", "all", "both", "either", "neither"},
        "DT");
    put({"there"}, "EX");
    put({"of", "in", "for", "on", "with", "at", "by", "from", "about", "into",
         "as", "like", "through", "over", "between", "after", "before",
         "under", "within", "without", "during", "including", "against",
         "among", "upon", "via", "across", "than", "because", "while", "if",
         "whether", "since", "until", "onto", "toward", "towards", "per",
         "around", "behind", "beyond", "throughout", "unlike", "above",
         "below", "inside", "outside", "near", "along", "although"},
        "IN");
    put({"to"}, "TO");
    put({"that", "which", "whatever", "whichever"}, "WDT");
    put({"who", "whom", "what", "whoever"}, "WP");
    put({"whose"}, "WP$");
    put({"where", "when", "why", "how", "whenever", "wherever"}, "WRB");
    put({"is", "does", "has"}, "VBZ");
    put({"are", "do", "have", "am"}, "VBP");
    put({"was", "were", "did", "had"}, "VBD");
    put({"be", "become"}, "VB");
    put({"been", "done", "known", "called", "used", "based", "written",
         "built", "given", "made", "defined", "designed"},
        "VBN");
    put({"being", "having", "doing"}, "VBG");
    put({"can", "could", "may", "might", "must", "shall", "should", "will",
         "would"},
        "MD");
    put({"it", "its", "they", "them", "their", "he", "she", "we", "you",
         "i", "his", "her", "our", "your", "itself"},
        "PRP");
    put({"and", "or", "but", "nor"}, "CC");
    put({"not", "also", "very", "often", "usually", "typically", "mainly",
         "only", "just", "commonly", "generally", "mostly", "widely"},
        "RB");
    return t;
  }();
  return table;
}

// Stems whose "-s" form is read as a 3rd-person verb.
const std::unordered_set<std::string>& verb_stems() {
  static const std::unordered_set<std::string> stems = {
      "use", "provide", "allow", "contain", "define", "describe", "refer",
      "denote", "represent", "implement", "support", "run", "make", "store",
      "manage", "enable", "offer", "include", "consist", "perform", "create",
      "handle", "generate", "produce", "return", "compute", "call", "mean",
      "specify", "extend", "build", "process", "read", "write", "convert",
      "let", "help", "work", "act", "serve", "connect", "display", "render",
      "execute", "test", "measure", "identify", "design"};
  return stems;
}

bool is_verb_s_form(const std::string& w) {
  const auto& stems = verb_stems();
  if (!ends_with(w, "s") || w.size() < 3) return false;
  const std::string one = w.substr(0, w.size() - 1);
  if (stems.count(one)) return true;
  if (ends_with(w, "es")) {
    const std::string two = w.substr(0, w.size() - 2);
    if (stems.count(two)) return true;
  }
  if (ends_with(w, "ies")) {
    if (stems.count(w.substr(0, w.size() - 3) + "y")) return true;
  }
  return false;
}

bool is_number(std::string_view s) {
  bool digit = false;
  for (char c : s) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digit = true;
    } else if (c != '.' && c != ',' && c != '-') {
      return false;
    }
  }
  return digit;
}

}  // namespace

PosType pos_from_index(int index) {
  if (index < 1 || index > static_cast<int>(kPosCount)) {
    throw std::out_of_range("PoS index out of range: " + std::to_string(index));
  }
  return static_cast<PosType>(index);
}

std::string_view pos_name(PosType p) { return kNames[pos_index(p) - 1]; }

std::optional<PosType> pos_from_name(std::string_view name) {
  for (std::size_t k = 0; k < kNames.size(); ++k) {
    if (kNames[k] == name) return static_cast<PosType>(k + 1);
  }
  return std::nullopt;
}

const std::array<PosType, kPosCount>& all_pos_types() {
  static const std::array<PosType, kPosCount> all = [] {
    std::array<PosType, kPosCount> a{};
    for (std::size_t k = 0; k < kPosCount; ++k) a[k] = static_cast<PosType>(k + 1);
    return a;
  }();
  return all;
}

std::optional<PosType> map_penn_tag(std::string_view tag) {
  if (tag == "NN" || tag == "NNS" || tag == "NNP" || tag == "NNPS") return PosType::NN;
  if (tag == "NULL") return std::nullopt;
  return pos_from_name(tag);
}

std::array<double, kPosCount> one_hot(PosType p) {
  std::array<double, kPosCount> v{};
  v[static_cast<std::size_t>(pos_index(p) - 1)] = 1.0;
  return v;
}

bool is_punctuation(std::string_view surface) {
  if (surface.empty()) return false;
  if (surface == "-LRB-" || surface == "-RRB-") return true;
  return std::all_of(surface.begin(), surface.end(),
                     [](char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; });
}

std::vector<std::string> fallback_tag(std::span<const std::string> tokens) {
  std::vector<std::string> tags;
  tags.reserve(tokens.size());
  const auto& lex = lexicon();
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    const std::string& surface = tokens[k];
    const std::string w = lower(surface);
    if (surface == "(") {
      tags.emplace_back("-LRB-");
      continue;
    }
    if (surface == ")") {
      tags.emplace_back("-RRB-");
      continue;
    }
    if (is_punctuation(surface)) {
      tags.emplace_back(surface == "," || surface == ":" || surface == "." ? surface : ":");
      continue;
    }
    if (auto it = lex.find(w); it != lex.end()) {
      tags.push_back(it->second);
      continue;
    }
    if (is_number(w)) {
      tags.emplace_back("CD");
    } else if (w.size() > 4 && ends_with(w, "ing")) {
      tags.emplace_back("VBG");
    } else if (w.size() > 3 && ends_with(w, "ed")) {
      // Participle after an auxiliary, simple past otherwise.
      bool after_aux = false;
      if (k > 0) {
        const auto prev = lex.find(lower(tokens[k - 1]));
        after_aux = prev != lex.end() &&
                    (prev->second == "VBZ" || prev->second == "VBP" ||
                     prev->second == "VBD" || prev->second == "VB" ||
                     prev->second == "VBN" || prev->second == "VBG");
      }
      tags.emplace_back(after_aux ? "VBN" : "VBD");
    } else if (is_verb_s_form(w)) {
      tags.emplace_back("VBZ");
    } else if (w.size() > 4 && ends_with(w, "ly")) {
      tags.emplace_back("RB");
    } else {
      tags.emplace_back("NN");
    }
  }
  return tags;
}

}  // namespace defhyper
