#pragma once

// The analysis capabilities the morphological and semantic scores consume,
// and the errors a backend may raise.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "shallow/morphological.hpp"
#include "shallow/text.hpp"

namespace shallow {

using Vector = std::vector<double>;

enum class Capability { kEmbedTokens, kEmbedSentence, kNli, kTokenMatch, kParse, kGrammar };

inline constexpr Capability kAllCapabilities[] = {
    Capability::kEmbedTokens, Capability::kEmbedSentence, Capability::kNli,
    Capability::kTokenMatch,  Capability::kParse,         Capability::kGrammar};

inline std::string_view capability_name(Capability c) {
  switch (c) {
    case Capability::kEmbedTokens: return "embed_tokens";
    case Capability::kEmbedSentence: return "embed_sentence";
    case Capability::kNli: return "nli";
    case Capability::kTokenMatch: return "token_match_f1";
    case Capability::kParse: return "parse";
    case Capability::kGrammar: return "grammar";
  }
  return "unknown";
}

struct CapabilityFlags {
  bool embed_tokens = false;
  bool embed_sentence = false;
  bool nli = false;
  bool token_match = false;
  bool parse = false;
  bool grammar = false;

  bool has(Capability c) const {
    switch (c) {
      case Capability::kEmbedTokens: return embed_tokens;
      case Capability::kEmbedSentence: return embed_sentence;
      case Capability::kNli: return nli;
      case Capability::kTokenMatch: return token_match;
      case Capability::kParse: return parse;
      case Capability::kGrammar: return grammar;
    }
    return false;
  }
  static CapabilityFlags all() { return {true, true, true, true, true, true}; }
  bool operator==(const CapabilityFlags&) const = default;
};

struct BackendDescriptor {
  std::string id;
  CapabilityFlags capabilities;
  std::string version;
  bool deterministic = false;
  bool operator==(const BackendDescriptor&) const = default;
};

inline void to_json(nlohmann::json& j, const BackendDescriptor& d) {
  j = nlohmann::json{{"id", d.id},
                     {"version", d.version},
                     {"deterministic", d.deterministic},
                     {"capabilities",
                      {{"embed_tokens", d.capabilities.embed_tokens},
                       {"embed_sentence", d.capabilities.embed_sentence},
                       {"nli", d.capabilities.nli},
                       {"token_match", d.capabilities.token_match},
                       {"parse", d.capabilities.parse},
                       {"grammar", d.capabilities.grammar}}}};
}

enum class NliLabel { kEntailment, kNeutral, kContradiction };

inline std::string_view nli_label_name(NliLabel l) {
  switch (l) {
    case NliLabel::kEntailment: return "entailment";
    case NliLabel::kNeutral: return "neutral";
    case NliLabel::kContradiction: return "contradiction";
  }
  return "neutral";
}

inline std::optional<NliLabel> parse_nli_label(std::string_view s) {
  if (s == "entailment") return NliLabel::kEntailment;
  if (s == "neutral") return NliLabel::kNeutral;
  if (s == "contradiction") return NliLabel::kContradiction;
  return std::nullopt;
}

struct NliVerdict {
  NliLabel label = NliLabel::kNeutral;

  // Entailment probability factor applied to the token-match F1.
  double factor() const {
    switch (label) {
      case NliLabel::kEntailment: return 1.0;
      case NliLabel::kNeutral: return 0.5;
      case NliLabel::kContradiction: return 0.0;
    }
    return 0.5;
  }
};

enum class BackendErrorKind {
  kTransport,
  kTimeout,
  kProtocol,
  kVersionMismatch,
  kRemote,
  kCapability,
};

inline std::string_view backend_error_kind_name(BackendErrorKind k) {
  switch (k) {
    case BackendErrorKind::kTransport: return "transport";
    case BackendErrorKind::kTimeout: return "timeout";
    case BackendErrorKind::kProtocol: return "protocol";
    case BackendErrorKind::kVersionMismatch: return "version_mismatch";
    case BackendErrorKind::kRemote: return "remote";
    case BackendErrorKind::kCapability: return "capability";
  }
  return "unknown";
}

struct BackendError : Error {
  BackendError(BackendErrorKind kind, std::string message, std::string pair_id = {})
      : Error(format(kind, message, pair_id)),
        kind(kind),
        detail(std::move(message)),
        pair_id(std::move(pair_id)) {}

  BackendErrorKind kind;
  std::string detail;
  std::string pair_id;

  BackendError with_pair(std::string id) const { return BackendError(kind, detail, std::move(id)); }

 private:
  static std::string format(BackendErrorKind kind, const std::string& message,
                            const std::string& pair_id) {
    std::string s = "backend ";
    s += backend_error_kind_name(kind);
    s += " error";
    if (!pair_id.empty()) s += " (pair " + pair_id + ")";
    s += ": " + message;
    return s;
  }
};

// Implementations must be safe to call concurrently.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual BackendDescriptor descriptor() const = 0;
  virtual std::vector<Vector> embed_tokens(std::span<const std::string> tokens) const = 0;
  virtual Vector embed_sentence(const std::string& text) const = 0;
  virtual NliVerdict nli(const std::string& premise, const std::string& hypothesis) const = 0;
  virtual double token_match_f1(const std::string& reference,
                                const std::string& hypothesis) const = 0;
  virtual DependencyRelationSet parse(const std::string& text) const = 0;
  virtual GrammarErrorCounts grammar(const std::string& text) const = 0;
};

// Fails at configuration time if `backend` lacks any of `required`.
inline void require_capabilities(const BackendDescriptor& d, std::span<const Capability> required) {
  for (Capability c : required) {
    if (!d.capabilities.has(c))
      throw BackendError(BackendErrorKind::kCapability,
                         "backend '" + d.id + "' does not provide " +
                             std::string(capability_name(c)));
  }
}

}  // namespace shallow
