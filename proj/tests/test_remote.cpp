#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <future>

#include "fake_sidecar.hpp"
#include "shallow/remote_backend.hpp"
#include "shallow/score.hpp"

using namespace shallow;
using testing::FakeOptions;
using testing::FakeSidecar;

namespace {

RemoteConfig config_for(const FakeSidecar& s) {
  RemoteConfig c;
  c.url = s.url();
  c.timeout_seconds = 5.0;
  return c;
}

BackendErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const BackendError& e) {
    return e.kind;
  }
  FAIL("expected a backend error");
  return BackendErrorKind::kTransport;
}

}  // namespace

TEST_CASE("remote results equal the local backend", "[remote]") {
  FakeSidecar sidecar;
  const RemoteBackend remote(config_for(sidecar));
  const ReferenceBackend local;
  CHECK(remote.descriptor().id == "fake");
  CHECK(remote.descriptor().version == "fake-1");
  const std::vector<std::string> toks{"she", "bakes", "with", "flour"};
  CHECK(remote.embed_tokens(toks) == local.embed_tokens(toks));
  CHECK(remote.embed_tokens(std::vector<std::string>{}).empty());
  CHECK(remote.embed_sentence("She bakes") == local.embed_sentence("She bakes"));
  CHECK(remote.nli("i can not go", "i can go").label == local.nli("i can not go", "i can go").label);
  CHECK(remote.token_match_f1("a red flower", "a dead flower") ==
        local.token_match_f1("a red flower", "a dead flower"));
  CHECK(remote.parse("they ride horses") == local.parse("they ride horses"));
  CHECK(remote.grammar("they sings!!") == local.grammar("they sings!!"));

  // Whole-pair scoring through the sidecar matches the reference backend
  // apart from the backend id.
  const TranscriptPair p{"p1", "He painted the wall red", "He paints walls redly", {}, {}, {}};
  ScoreRecord a = score_pair(p, remote);
  ScoreRecord b = score_pair(p, local);
  CHECK(a.backend == "fake");
  a.backend = b.backend;
  CHECK(a == b);
}

TEST_CASE("out-of-order responses are matched by id", "[remote]") {
  FakeOptions opt;
  opt.reverse = true;
  FakeSidecar sidecar(opt);
  const RemoteBackend remote(config_for(sidecar));
  std::vector<nlohmann::json> payloads;
  for (int i = 0; i < 10; ++i) payloads.push_back(protocol::embed_sentence_payload("w" + std::to_string(i)));
  const auto results = remote.batch(Capability::kEmbedSentence, payloads);
  const ReferenceBackend local;
  REQUIRE(results.size() == 10);
  for (int i = 0; i < 10; ++i)
    CHECK(protocol::embed_sentence_result(results[i]) == local.embed_sentence("w" + std::to_string(i)));
}

TEST_CASE("batches are split at max_batch", "[remote]") {
  FakeSidecar sidecar;
  RemoteConfig c = config_for(sidecar);
  c.max_batch = 4;
  const RemoteBackend remote(c);
  std::vector<nlohmann::json> payloads(10, protocol::parse_payload("a b c"));
  const int before = sidecar.posts();
  CHECK(remote.batch(Capability::kParse, payloads).size() == 10);
  CHECK(sidecar.posts() - before == 3);
  CHECK(sidecar.max_lines() == 4);
}

TEST_CASE("64 concurrent callers each get their own answer", "[remote]") {
  FakeOptions opt;
  opt.delay = std::chrono::milliseconds(5);
  FakeSidecar sidecar(opt);
  const RemoteBackend remote(config_for(sidecar));
  const ReferenceBackend local;
  std::vector<std::future<bool>> futures;
  for (int i = 0; i < 64; ++i) {
    futures.push_back(std::async(std::launch::async, [&, i] {
      const std::string text = "sentence number " + std::to_string(i);
      return remote.embed_sentence(text) == local.embed_sentence(text);
    }));
  }
  int good = 0;
  for (auto& f : futures) good += f.get() ? 1 : 0;
  CHECK(good == 64);
}

TEST_CASE("bearer token", "[remote]") {
  FakeOptions opt;
  opt.token = "s3cret";
  FakeSidecar sidecar(opt);
  RemoteConfig c = config_for(sidecar);
  CHECK(kind_of([&] { RemoteBackend r(c); }) == BackendErrorKind::kRemote);
  c.token = "s3cret";
  const RemoteBackend remote(c);
  CHECK(remote.grammar("fine words here") == GrammarErrorCounts{});

  RemoteConfig from_env = config_for(sidecar);
  ::setenv("SHALLOW_BACKEND_TOKEN", "s3cret", 1);
  CHECK_NOTHROW(RemoteBackend(from_env));
  ::unsetenv("SHALLOW_BACKEND_TOKEN");
}

TEST_CASE("version checks", "[remote]") {
  {
    FakeOptions opt;
    opt.protocol = "2";
    FakeSidecar sidecar(opt);
    CHECK(kind_of([&] { RemoteBackend r(config_for(sidecar)); }) == BackendErrorKind::kVersionMismatch);
  }
  {
    FakeSidecar sidecar;
    RemoteConfig c = config_for(sidecar);
    c.expected_version = "fake-2";
    CHECK(kind_of([&] { RemoteBackend r(c); }) == BackendErrorKind::kVersionMismatch);
    c.expected_version = "fake-1";
    CHECK_NOTHROW(RemoteBackend(c));
  }
  {
    FakeOptions opt;
    opt.protocol.clear();
    FakeSidecar sidecar(opt);
    CHECK_NOTHROW(RemoteBackend(config_for(sidecar)));
  }
}

TEST_CASE("capability gating", "[remote]") {
  FakeOptions opt;
  opt.capabilities.nli = false;
  FakeSidecar sidecar(opt);
  const RemoteBackend remote(config_for(sidecar));
  CHECK(kind_of([&] { remote.nli("a", "b"); }) == BackendErrorKind::kCapability);
  const auto need = MetricFamilies{}.required_capabilities();
  CHECK(kind_of([&] { require_capabilities(remote.descriptor(), need); }) == BackendErrorKind::kCapability);
  const auto lexical_only = parse_metric_families("lf,pf,me").required_capabilities();
  CHECK_NOTHROW(require_capabilities(remote.descriptor(), lexical_only));
}

TEST_CASE("malformed results are protocol violations", "[remote]") {
  SECTION("unknown nli label") {
    FakeOptions opt;
    opt.rewrite = [](const std::string&, const std::string& body) {
      std::string b = body;
      for (const char* l : {"entailment", "neutral", "contradiction"})
        if (auto p = b.find(l); p != std::string::npos) b.replace(p, std::string(l).size(), "unsure");
      return b;
    };
    FakeSidecar sidecar(opt);
    const RemoteBackend remote(config_for(sidecar));
    CHECK(kind_of([&] { remote.nli("a b", "a b"); }) == BackendErrorKind::kProtocol);
  }
  SECTION("negative counts") {
    FakeOptions opt;
    opt.rewrite = [](const std::string&, const std::string& body) {
      auto j = nlohmann::json::parse(protocol::split_lines(body).front());
      j["result"]["spelling"] = -3;
      return j.dump() + "\n";
    };
    FakeSidecar sidecar(opt);
    const RemoteBackend remote(config_for(sidecar));
    CHECK(kind_of([&] { remote.grammar("x"); }) == BackendErrorKind::kProtocol);
  }
  SECTION("dimension changes between calls") {
    std::atomic<int> calls{0};
    FakeOptions opt;
    opt.rewrite = [&calls](const std::string& path, const std::string& body) {
      if (path != "/v1/embed_sentence" || calls++ == 0) return body;
      auto j = nlohmann::json::parse(protocol::split_lines(body).front());
      j["result"]["vector"].push_back(0.0);
      return j.dump() + "\n";
    };
    FakeSidecar sidecar(opt);
    const RemoteBackend remote(config_for(sidecar));
    CHECK(remote.embed_sentence("one").size() == 256);
    CHECK(kind_of([&] { remote.embed_sentence("two"); }) == BackendErrorKind::kProtocol);
  }
  SECTION("missing response line") {
    FakeOptions opt;
    opt.rewrite = [](const std::string&, const std::string&) { return std::string(); };
    FakeSidecar sidecar(opt);
    const RemoteBackend remote(config_for(sidecar));
    CHECK(kind_of([&] { remote.parse("x"); }) == BackendErrorKind::kProtocol);
  }
  SECTION("sidecar-side error") {
    FakeOptions opt;
    opt.rewrite = [](const std::string&, const std::string& body) {
      auto j = nlohmann::json::parse(protocol::split_lines(body).front());
      j.erase("result");
      j["ok"] = false;
      j["error"] = {{"kind", "upstream"}, {"message", "model not loaded"}};
      return j.dump() + "\n";
    };
    FakeSidecar sidecar(opt);
    const RemoteBackend remote(config_for(sidecar));
    try {
      remote.parse("x");
      FAIL("no error");
    } catch (const BackendError& e) {
      CHECK(e.kind == BackendErrorKind::kRemote);
      CHECK(std::string(e.what()).find("upstream") != std::string::npos);
    }
  }
  SECTION("http error status") {
    FakeOptions opt;
    opt.status = 503;
    FakeSidecar sidecar(opt);
    const RemoteBackend remote(config_for(sidecar));
    CHECK(kind_of([&] { remote.parse("x"); }) == BackendErrorKind::kRemote);
  }
}

TEST_CASE("timeouts", "[remote]") {
  FakeOptions opt;
  opt.delay = std::chrono::milliseconds(1500);
  FakeSidecar sidecar(opt);
  RemoteConfig c = config_for(sidecar);
  c.timeout_seconds = 0.3;
  const RemoteBackend remote(c);
  CHECK(kind_of([&] { remote.parse("slow"); }) == BackendErrorKind::kTimeout);
}

TEST_CASE("a listener that never accepts times out", "[remote]") {
  httplib::Server s;
  const int port = s.bind_to_any_port("127.0.0.1");
  RemoteConfig c;
  c.url = "http://127.0.0.1:" + std::to_string(port);
  c.timeout_seconds = 0.3;
  CHECK(kind_of([&] { RemoteBackend r(c); }) == BackendErrorKind::kTimeout);
}

TEST_CASE("unreachable sidecar names the endpoint", "[remote]") {
  RemoteConfig c;
  c.url = "http://127.0.0.1:" + std::to_string(testing::dead_port());
  c.timeout_seconds = 2.0;
  try {
    RemoteBackend r(c);
    FAIL("connected to a dead port");
  } catch (const BackendError& e) {
    CHECK(e.kind == BackendErrorKind::kTransport);
    CHECK(std::string(e.what()).find(c.url + "/v1/info") != std::string::npos);
  }
}

TEST_CASE("backend url parsing", "[remote]") {
  CHECK(parse_backend_url("http://h:8080").origin == "http://h:8080");
  CHECK(parse_backend_url("http://h:8080").prefix == "");
  CHECK(parse_backend_url("http://h:8080/api/").prefix == "/api");
  CHECK_THROWS_AS(parse_backend_url("https://h"), ConfigError);
  CHECK_THROWS_AS(parse_backend_url("ftp://h"), ConfigError);
  CHECK_THROWS_AS(parse_backend_url("http://"), ConfigError);
}
