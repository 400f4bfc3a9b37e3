#pragma once

// Client for a model sidecar speaking the NDJSON protocol over HTTP.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <httplib.h>

#include "shallow/backend.hpp"
#include "shallow/protocol.hpp"
#include "shallow/weights.hpp"

namespace shallow {

struct RemoteConfig {
  std::string url;                    // http://host:port[/prefix]
  std::optional<std::string> token;   // bearer token; falls back to SHALLOW_BACKEND_TOKEN
  double timeout_seconds = 30.0;
  std::size_t max_batch = 64;
  std::optional<std::string> expected_version;
};

struct ParsedUrl {
  std::string origin;  // scheme://host:port
  std::string prefix;  // path prefix without trailing slash
};

inline ParsedUrl parse_backend_url(const std::string& url) {
  const std::string scheme = "http://";
  if (url.rfind(scheme, 0) != 0) {
    if (url.rfind("https://", 0) == 0)
      throw ConfigError("https backends are not supported in this build: " + url);
    throw ConfigError("backend url must start with http://: " + url);
  }
  const std::size_t slash = url.find('/', scheme.size());
  ParsedUrl out;
  out.origin = url.substr(0, slash);
  if (out.origin.size() == scheme.size()) throw ConfigError("backend url has no host: " + url);
  if (slash != std::string::npos) out.prefix = url.substr(slash);
  while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  return out;
}

inline std::optional<std::string> token_from_env() {
  if (const char* t = std::getenv("SHALLOW_BACKEND_TOKEN"); t && *t) return std::string(t);
  return std::nullopt;
}

class RemoteBackend final : public Backend {
 public:
  // Fetches /v1/info and checks the protocol and backend versions; any
  // failure surfaces here, before a run starts.
  explicit RemoteBackend(RemoteConfig config)
      : config_(std::move(config)), url_(parse_backend_url(config_.url)) {
    if (!config_.token) config_.token = token_from_env();
    if (config_.max_batch == 0) throw ConfigError("max_batch must be positive");
    if (!(config_.timeout_seconds > 0.0)) throw ConfigError("timeout must be positive");

    const std::string body = get("/v1/info");
    const auto j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded()) throw protocol::violation("info is not valid JSON");
    if (j.is_object() && j.contains("protocol")) {
      const auto& p = j["protocol"];
      const std::string got = p.is_string() ? p.get<std::string>() : p.dump();
      if (got != protocol::kProtocolVersion)
        throw BackendError(BackendErrorKind::kVersionMismatch,
                           "sidecar speaks protocol " + got + ", client speaks " +
                               std::string(protocol::kProtocolVersion));
    }
    descriptor_ = protocol::descriptor_from_json(j);
    if (config_.expected_version && *config_.expected_version != descriptor_.version)
      throw BackendError(BackendErrorKind::kVersionMismatch,
                         "expected backend version '" + *config_.expected_version + "', got '" +
                             descriptor_.version + "'");
  }

  BackendDescriptor descriptor() const override { return descriptor_; }
  const RemoteConfig& config() const { return config_; }

  // One POST carrying up to max_batch requests per chunk; results come back in
  // payload order whatever order the sidecar answered in.
  std::vector<nlohmann::json> batch(Capability cap, const std::vector<nlohmann::json>& payloads) const {
    if (!descriptor_.capabilities.has(cap))
      throw BackendError(BackendErrorKind::kCapability, "sidecar '" + descriptor_.id +
                                                            "' does not provide " +
                                                            std::string(capability_name(cap)));
    std::vector<nlohmann::json> results;
    results.reserve(payloads.size());
    for (std::size_t start = 0; start < payloads.size(); start += config_.max_batch) {
      const std::size_t end = std::min(payloads.size(), start + config_.max_batch);
      std::vector<protocol::Request> requests;
      for (std::size_t i = start; i < end; ++i) requests.push_back({next_id(), payloads[i]});
      const std::string body = post(protocol::endpoint_path(cap), protocol::encode_batch(requests));
      for (protocol::Response& r : protocol::match_responses(requests, body)) {
        if (!r.ok)
          throw BackendError(BackendErrorKind::kRemote,
                             std::string(capability_name(cap)) + " failed: " + r.error_kind +
                                 (r.error_message.empty() ? "" : ": " + r.error_message));
        results.push_back(std::move(r.result));
      }
    }
    return results;
  }

  nlohmann::json call(Capability cap, nlohmann::json payload) const {
    return std::move(batch(cap, {std::move(payload)}).front());
  }

  std::vector<Vector> embed_tokens(std::span<const std::string> tokens) const override {
    if (tokens.empty()) return {};
    auto vs = protocol::embed_tokens_result(
        call(Capability::kEmbedTokens, protocol::embed_tokens_payload(tokens)), tokens.size());
    check_dimension(token_dim_, vs.front().size(), "token");
    return vs;
  }

  Vector embed_sentence(const std::string& text) const override {
    auto v = protocol::embed_sentence_result(
        call(Capability::kEmbedSentence, protocol::embed_sentence_payload(text)));
    check_dimension(sentence_dim_, v.size(), "sentence");
    return v;
  }

  NliVerdict nli(const std::string& premise, const std::string& hypothesis) const override {
    return protocol::nli_result(call(Capability::kNli, protocol::nli_payload(premise, hypothesis)));
  }

  double token_match_f1(const std::string& reference, const std::string& hypothesis) const override {
    return protocol::token_match_result(
        call(Capability::kTokenMatch, protocol::token_match_payload(reference, hypothesis)));
  }

  DependencyRelationSet parse(const std::string& text) const override {
    return protocol::parse_result(call(Capability::kParse, protocol::parse_payload(text)));
  }

  GrammarErrorCounts grammar(const std::string& text) const override {
    return protocol::grammar_result(call(Capability::kGrammar, protocol::grammar_payload(text)));
  }

 private:
  std::string next_id() const { return "q" + std::to_string(counter_.fetch_add(1) + 1); }

  // Every vector from one sidecar must share a dimension for the run.
  static void check_dimension(std::atomic<std::size_t>& slot, std::size_t dim, const char* what) {
    std::size_t expected = 0;
    if (slot.compare_exchange_strong(expected, dim) || expected == dim) return;
    throw protocol::violation(std::string(what) + " vector dimension changed from " +
                              std::to_string(expected) + " to " + std::to_string(dim));
  }

  // A client per call keeps concurrent callers independent.
  httplib::Client client() const {
    httplib::Client cli(url_.origin);
    const auto usec = std::chrono::microseconds(
        static_cast<long long>(config_.timeout_seconds * 1e6));
    cli.set_connection_timeout(usec);
    cli.set_read_timeout(usec);
    cli.set_write_timeout(usec);
    cli.set_keep_alive(false);
    if (config_.token) cli.set_bearer_token_auth(*config_.token);
    return cli;
  }

  BackendError transport_error(const std::string& path, httplib::Error err,
                               std::chrono::steady_clock::duration elapsed) const {
    const std::string where = url_.origin + url_.prefix + path;
    const double secs = std::chrono::duration<double>(elapsed).count();
    const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                           (err == httplib::Error::Read && secs >= 0.9 * config_.timeout_seconds);
    if (timed_out)
      return BackendError(BackendErrorKind::kTimeout,
                          "no answer from " + where + " within " +
                              std::to_string(config_.timeout_seconds) + "s");
    return BackendError(BackendErrorKind::kTransport, "cannot reach " + where + ": " +
                                                          httplib::to_string(err));
  }

  std::string check_status(const std::string& path, const httplib::Result& res) const {
    if (res->status < 200 || res->status >= 300)
      throw BackendError(BackendErrorKind::kRemote, url_.origin + url_.prefix + path +
                                                        " answered HTTP " +
                                                        std::to_string(res->status));
    return res->body;
  }

  std::string get(const std::string& path) const {
    auto cli = client();
    const auto t0 = std::chrono::steady_clock::now();
    auto res = cli.Get(url_.prefix + path);
    if (!res) throw transport_error(path, res.error(), std::chrono::steady_clock::now() - t0);
    return check_status(path, res);
  }

  std::string post(const std::string& path, const std::string& body) const {
    auto cli = client();
    const auto t0 = std::chrono::steady_clock::now();
    auto res = cli.Post(url_.prefix + path, body, "application/x-ndjson");
    if (!res) throw transport_error(path, res.error(), std::chrono::steady_clock::now() - t0);
    return check_status(path, res);
  }

  RemoteConfig config_;
  ParsedUrl url_;
  BackendDescriptor descriptor_;
  mutable std::atomic<std::uint64_t> counter_{0};
  mutable std::atomic<std::size_t> token_dim_{0};
  mutable std::atomic<std::size_t> sentence_dim_{0};
};

}  // namespace shallow
