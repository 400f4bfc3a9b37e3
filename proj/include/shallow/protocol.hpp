#pragma once

// Sidecar wire format: one JSON object per line, {"id", "payload"} out and
// {"id", "ok", "result" | "error"} back. Everything here is pure so the
// encoding can be checked without a socket.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "shallow/backend.hpp"

namespace shallow::protocol {

using nlohmann::json;

inline constexpr std::string_view kProtocolVersion = "1";

inline std::string endpoint_path(Capability c) { return "/v1/" + std::string(capability_name(c)); }

inline BackendError violation(std::string message) {
  return BackendError(BackendErrorKind::kProtocol, std::move(message));
}

struct Request {
  std::string id;
  json payload;
};

struct Response {
  std::string id;
  bool ok = false;
  json result;
  std::string error_kind;
  std::string error_message;
};

inline std::string encode_request(const Request& r) {
  return json{{"id", r.id}, {"payload", r.payload}}.dump();
}

// Requests joined as NDJSON, each line newline-terminated.
inline std::string encode_batch(const std::vector<Request>& requests) {
  std::string body;
  for (const Request& r : requests) {
    body += encode_request(r);
    body += '\n';
  }
  return body;
}

inline std::string encode_response(const Response& r) {
  json j{{"id", r.id}, {"ok", r.ok}};
  if (r.ok)
    j["result"] = r.result;
  else
    j["error"] = {{"kind", r.error_kind}, {"message", r.error_message}};
  return j.dump();
}

inline Request decode_request(std::string_view line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw violation("request is not a JSON object");
  if (!j.contains("id") || !j["id"].is_string()) throw violation("request without string id");
  if (!j.contains("payload") || !j["payload"].is_object())
    throw violation("request without object payload");
  return {j["id"].get<std::string>(), j["payload"]};
}

inline Response decode_response(std::string_view line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw violation("response is not a JSON object");
  if (!j.contains("id") || !j["id"].is_string()) throw violation("response without string id");
  if (!j.contains("ok") || !j["ok"].is_boolean()) throw violation("response without boolean ok");
  Response r;
  r.id = j["id"].get<std::string>();
  r.ok = j["ok"].get<bool>();
  if (r.ok) {
    if (!j.contains("result")) throw violation("ok response without result");
    r.result = j["result"];
  } else {
    const auto it = j.find("error");
    if (it == j.end() || !it->is_object() || !it->contains("kind") ||
        !(*it)["kind"].is_string())
      throw violation("failed response without error.kind");
    r.error_kind = (*it)["kind"].get<std::string>();
    if (it->contains("message") && (*it)["message"].is_string())
      r.error_message = (*it)["message"].get<std::string>();
  }
  return r;
}

inline std::vector<std::string_view> split_lines(std::string_view body) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < body.size()) {
    std::size_t end = body.find('\n', start);
    if (end == std::string_view::npos) end = body.size();
    std::string_view line = body.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) out.push_back(line);
    start = end + 1;
  }
  return out;
}

// Pairs every request id with exactly one response, whatever order the lines
// came back in. Missing, duplicate and unknown ids are protocol violations.
inline std::vector<Response> match_responses(const std::vector<Request>& requests,
                                             std::string_view body) {
  std::unordered_map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < requests.size(); ++i) slot.emplace(requests[i].id, i);
  std::vector<std::optional<Response>> got(requests.size());
  for (std::string_view line : split_lines(body)) {
    Response r = decode_response(line);
    const auto it = slot.find(r.id);
    if (it == slot.end()) throw violation("response for unknown id '" + r.id + "'");
    if (got[it->second]) throw violation("duplicate response for id '" + r.id + "'");
    got[it->second] = std::move(r);
  }
  std::vector<Response> out;
  out.reserve(requests.size());
  for (std::size_t i = 0; i < requests.size(); ++i) {
    if (!got[i]) throw violation("no response for id '" + requests[i].id + "'");
    out.push_back(std::move(*got[i]));
  }
  return out;
}

// Payloads.

inline json embed_tokens_payload(std::span<const std::string> tokens) {
  return {{"tokens", std::vector<std::string>(tokens.begin(), tokens.end())}};
}
inline json embed_sentence_payload(const std::string& text) { return {{"text", text}}; }
inline json nli_payload(const std::string& premise, const std::string& hypothesis) {
  return {{"premise", premise}, {"hypothesis", hypothesis}};
}
inline json token_match_payload(const std::string& reference, const std::string& hypothesis) {
  return {{"reference", reference}, {"hypothesis", hypothesis}};
}
inline json parse_payload(const std::string& text) { return {{"text", text}}; }
inline json grammar_payload(const std::string& text) { return {{"text", text}}; }

// Result validation. Each throws a protocol violation rather than returning
// something partially filled.

inline const json& field(const json& result, const char* key) {
  if (!result.is_object() || !result.contains(key))
    throw violation(std::string("result missing '") + key + "'");
  return result[key];
}

inline Vector read_vector(const json& j) {
  if (!j.is_array() || j.empty()) throw violation("vector must be a non-empty array");
  Vector v;
  v.reserve(j.size());
  for (const json& x : j) {
    if (!x.is_number()) throw violation("vector element is not a number");
    const double d = x.get<double>();
    if (!std::isfinite(d)) throw violation("vector element is not finite");
    v.push_back(d);
  }
  return v;
}

inline std::vector<Vector> embed_tokens_result(const json& result, std::size_t expected_count) {
  const json& arr = field(result, "vectors");
  if (!arr.is_array()) throw violation("vectors must be an array");
  if (arr.size() != expected_count)
    throw violation("expected " + std::to_string(expected_count) + " vectors, got " +
                    std::to_string(arr.size()));
  std::vector<Vector> out;
  out.reserve(arr.size());
  for (const json& v : arr) {
    out.push_back(read_vector(v));
    if (out.back().size() != out.front().size())
      throw violation("inconsistent vector dimensions " + std::to_string(out.front().size()) +
                      " and " + std::to_string(out.back().size()));
  }
  return out;
}

inline Vector embed_sentence_result(const json& result) { return read_vector(field(result, "vector")); }

inline NliVerdict nli_result(const json& result) {
  const json& l = field(result, "label");
  if (!l.is_string()) throw violation("label must be a string");
  const auto label = parse_nli_label(l.get<std::string>());
  if (!label) throw violation("unknown NLI label '" + l.get<std::string>() + "'");
  return {*label};
}

inline double token_match_result(const json& result) {
  const json& f = field(result, "f1");
  if (!f.is_number()) throw violation("f1 must be a number");
  const double v = f.get<double>();
  if (!(v >= 0.0 && v <= 1.0)) throw violation("f1 outside [0,1]");
  return v;
}

inline DependencyRelationSet parse_result(const json& result) {
  const json& rels = field(result, "relations");
  if (!rels.is_array()) throw violation("relations must be an array");
  DependencyRelationSet out;
  for (const json& r : rels) {
    if (!r.is_array() || r.size() != 3 || !r[0].is_string() || !r[1].is_string() ||
        !r[2].is_string())
      throw violation("relation must be [head, label, dependent] strings");
    out.insert({r[0].get<std::string>(), r[1].get<std::string>(), r[2].get<std::string>()});
  }
  return out;
}

inline GrammarErrorCounts grammar_result(const json& result) {
  auto count = [&](const char* key) -> long long {
    const json& v = field(result, key);
    if (!v.is_number_integer()) throw violation(std::string(key) + " must be an integer");
    const long long n = v.get<long long>();
    if (n < 0) throw violation(std::string(key) + " must be non-negative");
    return n;
  };
  return {count("grammar"), count("spelling"), count("punctuation")};
}

// Inverse helpers used by servers and golden tests.

inline json vectors_json(const std::vector<Vector>& vs) { return {{"vectors", vs}}; }
inline json vector_json(const Vector& v) { return {{"vector", v}}; }
inline json nli_json(NliVerdict v) { return {{"label", std::string(nli_label_name(v.label))}}; }
inline json f1_json(double f) { return {{"f1", f}}; }
inline json relations_json(const DependencyRelationSet& rels) {
  json arr = json::array();
  for (const auto& r : rels) arr.push_back({r.head, r.label, r.dependent});
  return {{"relations", arr}};
}
inline json grammar_json(const GrammarErrorCounts& c) {
  return {{"grammar", c.e_gr}, {"spelling", c.e_sp}, {"punctuation", c.e_pu}};
}

inline BackendDescriptor descriptor_from_json(const json& j) {
  if (!j.is_object()) throw violation("info is not a JSON object");
  try {
    BackendDescriptor d;
    d.id = j.at("id").get<std::string>();
    d.version = j.at("version").get<std::string>();
    d.deterministic = j.value("deterministic", false);
    const json& caps = j.at("capabilities");
    d.capabilities.embed_tokens = caps.value("embed_tokens", false);
    d.capabilities.embed_sentence = caps.value("embed_sentence", false);
    d.capabilities.nli = caps.value("nli", false);
    d.capabilities.token_match = caps.value("token_match", false);
    d.capabilities.parse = caps.value("parse", false);
    d.capabilities.grammar = caps.value("grammar", false);
    return d;
  } catch (const json::exception& e) {
    throw violation(std::string("malformed info: ") + e.what());
  }
}

// Answers one NDJSON body against a local backend. Used by in-process fakes
// and to produce golden transcripts; a real sidecar speaks the same format.
inline std::string serve_batch(const Backend& backend, Capability cap, std::string_view body) {
  std::string out;
  for (std::string_view line : split_lines(body)) {
    Response resp;
    try {
      const Request req = decode_request(line);
      resp.id = req.id;
      const json& p = req.payload;
      auto str = [&](const char* k) { return field(p, k).get<std::string>(); };
      switch (cap) {
        case Capability::kEmbedTokens: {
          const auto tokens = field(p, "tokens").get<std::vector<std::string>>();
          resp.result = vectors_json(backend.embed_tokens(tokens));
          break;
        }
        case Capability::kEmbedSentence: resp.result = vector_json(backend.embed_sentence(str("text"))); break;
        case Capability::kNli: resp.result = nli_json(backend.nli(str("premise"), str("hypothesis"))); break;
        case Capability::kTokenMatch:
          resp.result = f1_json(backend.token_match_f1(str("reference"), str("hypothesis")));
          break;
        case Capability::kParse: resp.result = relations_json(backend.parse(str("text"))); break;
        case Capability::kGrammar: resp.result = grammar_json(backend.grammar(str("text"))); break;
      }
      resp.ok = true;
    } catch (const std::exception& e) {
      resp.ok = false;
      resp.error_kind = "bad_request";
      resp.error_message = e.what();
    }
    out += encode_response(resp);
    out += '\n';
  }
  return out;
}

}  // namespace shallow::protocol
