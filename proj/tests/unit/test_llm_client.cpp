// Copyright 2026 The Halluspan Authors.
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

#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <mutex>

#include "doctest.h"
#include "halluspan/chat_client.hpp"
#include "halluspan/error.hpp"
#include "halluspan/llm_detection.hpp"
#include "halluspan/prompts.hpp"
#include "halluspan/tagged_text.hpp"

using namespace halluspan;
namespace fs = std::filesystem;

namespace {

class FakeTransport : public Transport {
 public:
  std::deque<HttpReply> replies;
  std::vector<std::string> bodies;
  std::vector<std::map<std::string, std::string>> headers;
  int failures_before_reply = 0;

  HttpReply post(const std::string&, const std::string&, const std::map<std::string, std::string>& h,
                 const std::string& body, std::chrono::seconds) override {
    std::lock_guard<std::mutex> lock(mu_);
    bodies.push_back(body);
    headers.push_back(h);
    if (failures_before_reply > 0) {
      --failures_before_reply;
      throw Error(ErrorCode::kTransport, "connection refused");
    }
    HttpReply r = replies.front();
    if (replies.size() > 1) replies.pop_front();
    return r;
  }

 private:
  std::mutex mu_;
};

std::string completion(const std::string& text) {
  nlohmann::json js;
  js["choices"] = nlohmann::json::array({{{"message", {{"role", "assistant"}, {"content", text}}}}});
  js["usage"] = {{"prompt_tokens", 10}, {"completion_tokens", 5}, {"total_tokens", 15}};
  return js.dump();
}

fs::path temp_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("halluspan_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const DocumentPair kDoc{"d1", "Patient admitted with chest pain. Troponin negative.",
                        "You were admitted for chest pain. Your heart tests were normal."};

struct CredentialGuard {
  explicit CredentialGuard(const char* value) {
    if (value) {
      setenv("HALLUSPAN_TEST_KEY", value, 1);
    } else {
      unsetenv("HALLUSPAN_TEST_KEY");
    }
  }
  ~CredentialGuard() { unsetenv("HALLUSPAN_TEST_KEY"); }
};

EndpointConfig test_endpoint() {
  EndpointConfig cfg;
  cfg.api_key_env = "HALLUSPAN_TEST_KEY";
  return cfg;
}

}  // namespace

TEST_CASE("embedded templates match the template files") {
  const auto embedded = PromptTemplates::embedded();
  const auto files = PromptTemplates::load(fs::path(HALLUSPAN_SOURCE_DIR) / "templates");
  CHECK(embedded.system == files.system);
  CHECK(embedded.detection_guidelines == files.detection_guidelines);
  CHECK(embedded.summarization_instruction == files.summarization_instruction);
  CHECK_THROWS_AS(PromptTemplates::load(fs::path(HALLUSPAN_SOURCE_DIR) / "no_such_dir"), Error);
}

TEST_CASE("zero-shot detection prompt") {
  const auto t = PromptTemplates::embedded();
  DetectionPromptSpec spec;
  const auto msgs = build_detection_prompt(spec, kDoc, t);
  REQUIRE(msgs.size() == 2);
  CHECK(msgs[0].role == "system");
  CHECK(msgs[0].content == t.system);
  CHECK(msgs[1].role == "user");
  const std::string& u = msgs[1].content;
  CHECK(u.rfind(t.detection_guidelines, 0) == 0);
  CHECK(u.find("### Example 1\n\nBHC:\n" + kDoc.context + "\n\nAVS:\n" + kDoc.summary + "\n\nERROR:") !=
        std::string::npos);
  CHECK(u.size() >= 6);
  CHECK(u.substr(u.size() - 6) == "ERROR:");
  CHECK(u.find("AVS WITH ERRORS LABELED") == std::string::npos);
  CHECK(u.find("Your pacemaker rate was increased to") != std::string::npos);
}

TEST_CASE("exemplar blocks reproduce the rendered tags") {
  const auto t = PromptTemplates::embedded();
  DetectionExemplar shot{{"x", "On aspirin.", "Take aspirin and warfarin."},
                         {{17, 25, HallucinationClass::kUnsupportedMedication}}, ""};
  DetectionPromptSpec spec;
  spec.shots = {shot};
  const auto aware = build_detection_prompt(spec, kDoc, t)[1].content;
  const std::string tagged = render_tagged(shot.doc.summary, shot.spans);
  CHECK(tagged == R"(Take aspirin and <error class="unsupported_medication">warfarin</error>.)");
  CHECK(aware.find("AVS WITH ERRORS LABELED:\n" + tagged + "\n\n### Example 2") != std::string::npos);
  CHECK(aware.find("ERRORS:\n") == std::string::npos);
  // The labeled block parses back to the exemplar's spans.
  const auto start = aware.find("AVS WITH ERRORS LABELED:\n") + 25;
  const auto block = aware.substr(start, aware.find("\n\n", start) - start);
  CHECK(parse_tagged(block, LabelMode::kClassAware).spans == shot.spans);

  spec.cot = true;
  const auto cot = build_detection_prompt(spec, kDoc, t)[1].content;
  CHECK(cot.find("ERRORS:\n- \"warfarin\" (unsupported_medication)\n\nAVS WITH ERRORS LABELED:") != std::string::npos);

  spec.mode = LabelMode::kClassAgnostic;
  const auto agnostic = build_detection_prompt(spec, kDoc, t)[1].content;
  CHECK(agnostic.find("Take aspirin and <error>warfarin</error>.") != std::string::npos);
  CHECK(agnostic.find("class=\"unsupported_medication\">warfarin") == std::string::npos);
  CHECK(agnostic.find("plain <error></error> tag") != std::string::npos);

  CHECK(build_detection_prompt(spec, kDoc, t) == build_detection_prompt(spec, kDoc, t));
}

TEST_CASE("missing guideline text raises TemplateMissing") {
  PromptTemplates empty;
  try {
    build_detection_prompt({}, kDoc, empty);
    FAIL("expected TemplateMissing");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTemplateMissing);
  }
}

TEST_CASE("summarization prompt") {
  const auto t = PromptTemplates::embedded();
  CHECK(t.summarization_instruction.find("you MUST start the summary with \"You were admitted\"") != std::string::npos);
  const auto zero = build_summarization_prompt({}, kDoc, t);
  CHECK(zero[1].content == t.summarization_instruction + "\n\nDOCUMENT: " + kDoc.context);

  std::vector<SummaryExemplar> shots;
  for (int i = 0; i < 5; ++i) shots.push_back({"doc " + std::to_string(i), "sum " + std::to_string(i)});
  const auto five = build_summarization_prompt(shots, kDoc, t)[1].content;
  std::size_t pairs = 0;
  for (auto at = five.find("DOCUMENT:\n"); at != std::string::npos; at = five.find("DOCUMENT:\n", at + 1)) ++pairs;
  CHECK(pairs == 5);
  CHECK(five.find("Here are some examples:\nDOCUMENT:\ndoc 0\nSUMMARY:\nsum 0\n") != std::string::npos);
  CHECK(five.rfind("DOCUMENT: " + kDoc.context) > five.rfind("SUMMARY:\nsum 4"));
  shots.push_back({"doc 5", "sum 5"});
  CHECK_THROWS_AS(build_summarization_prompt(shots, kDoc, t), Error);
}

TEST_CASE("request bodies carry the decoding defaults") {
  const Messages msgs = {{"system", "s"}, {"user", "u"}};
  const auto body = request_body(msgs, EndpointConfig{});
  CHECK(body["model"] == "gpt-4");
  CHECK(body["max_tokens"] == 600);
  CHECK(body["temperature"] == 0.0);
  CHECK(body["messages"].size() == 2);
  CHECK(fixture_key(msgs).size() == 64);
  CHECK(fixture_key(msgs) == fixture_key(Messages{{"system", "s"}, {"user", "u"}}));
  CHECK(fixture_key(msgs) != fixture_key(Messages{{"system", "s"}, {"user", "v"}}));
}

TEST_CASE("live mode needs the credential before any request") {
  CredentialGuard unset(nullptr);
  auto transport = std::make_shared<FakeTransport>();
  try {
    ChatClient client(test_endpoint(), ClientMode::kLive, {}, transport);
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfigError);
  }
  CHECK(transport->bodies.empty());
}

TEST_CASE("live mode sends auth headers and parses the first choice") {
  CredentialGuard key("sk-test");
  auto transport = std::make_shared<FakeTransport>();
  transport->replies.push_back({200, completion("hello")});
  ChatClient client(test_endpoint(), ClientMode::kLive, {}, transport);
  const auto r = client.complete({{"user", "hi"}});
  CHECK(r.text == "hello");
  REQUIRE(r.usage.has_value());
  CHECK(r.usage->total_tokens == 15);
  CHECK(transport->headers[0].at("Authorization") == "Bearer sk-test");
  CHECK(nlohmann::json::parse(transport->bodies[0])["temperature"] == 0.0);

  auto cfg = test_endpoint();
  cfg.auth_style = "api-key";
  ChatClient azure(cfg, ClientMode::kLive, {}, transport);
  azure.complete({{"user", "hi"}});
  CHECK(transport->headers[1].at("api-key") == "sk-test");
}

TEST_CASE("retries use capped exponential backoff") {
  CredentialGuard key("sk-test");
  auto transport = std::make_shared<FakeTransport>();
  transport->replies = {{503, "busy"}, {429, "slow down"}, {200, completion("ok")}};
  std::vector<long long> waits;
  auto cfg = test_endpoint();
  cfg.initial_backoff = std::chrono::milliseconds(100);
  cfg.max_backoff = std::chrono::milliseconds(150);
  ChatClient client(cfg, ClientMode::kLive, {}, transport,
                    [&](std::chrono::milliseconds d) { waits.push_back(d.count()); });
  CHECK(client.complete({{"user", "x"}}).text == "ok");
  CHECK(waits == std::vector<long long>{100, 150});
  CHECK(client.network_calls() == 3);
}

TEST_CASE("persistent rate limiting and transport failure") {
  CredentialGuard key("sk-test");
  auto cfg = test_endpoint();
  cfg.max_retries = 2;
  auto limited = std::make_shared<FakeTransport>();
  limited->replies = {{429, "slow down"}};
  ChatClient a(cfg, ClientMode::kLive, {}, limited, [](std::chrono::milliseconds) {});
  try {
    a.complete({{"user", "x"}});
    FAIL("expected RateLimited");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kRateLimited);
  }
  CHECK(a.network_calls() == 3);

  auto down = std::make_shared<FakeTransport>();
  down->failures_before_reply = 100;
  down->replies = {{200, completion("never")}};
  ChatClient b(cfg, ClientMode::kLive, {}, down, [](std::chrono::milliseconds) {});
  try {
    b.complete({{"user", "x"}});
    FAIL("expected Transport");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTransport);
  }

  auto client_error = std::make_shared<FakeTransport>();
  client_error->replies = {{400, "bad request"}};
  ChatClient c(cfg, ClientMode::kLive, {}, client_error, [](std::chrono::milliseconds) {});
  CHECK_THROWS_AS(c.complete({{"user", "x"}}), Error);
  CHECK(c.network_calls() == 1);
}

TEST_CASE("record then replay without network") {
  const auto dir = temp_dir("record");
  const Messages msgs = {{"system", "s"}, {"user", "label this"}};
  {
    CredentialGuard key("sk-test");
    auto transport = std::make_shared<FakeTransport>();
    transport->replies = {{200, completion("AVS WITH ERRORS LABELED:\nfine")}};
    ChatClient rec(test_endpoint(), ClientMode::kRecord, dir, transport);
    rec.complete(msgs);
    CHECK(fs::exists(dir / (fixture_key(msgs) + ".json")));
  }
  CredentialGuard unset(nullptr);
  ChatClient replay(test_endpoint(), ClientMode::kReplay, dir);
  const auto r = replay.complete(msgs);
  CHECK(r.text == "AVS WITH ERRORS LABELED:\nfine");
  CHECK(r.from_fixture);
  CHECK(replay.network_calls() == 0);
  try {
    replay.complete({{"user", "unseen"}});
    FAIL("expected FixtureMiss");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kFixtureMiss);
  }
  CHECK_THROWS_AS(ChatClient(test_endpoint(), ClientMode::kReplay, {}), Error);
  fs::remove_all(dir);
}

TEST_CASE("labeled region extraction") {
  auto r = extract_labeled_region("ERRORS:\n- \"x\"\n\nAVS WITH ERRORS LABELED:\nYou <error>had</error> it.\n### Example 3\nmore");
  CHECK(r.labeled == "You <error>had</error> it.");
  CHECK(r.errors_list == "- \"x\"");
  CHECK_FALSE(r.header_missing);
  r = extract_labeled_region("  You had it.  ");
  CHECK(r.header_missing);
  CHECK(r.labeled == "You had it.");
}

TEST_CASE("interpret_response projects, drops and reports") {
  auto r = interpret_response(kDoc, "AVS WITH ERRORS LABELED:\nYou were admitted for <error class=\"unsupported_condition\">chest pain</error>. Your heart tests were normal.",
                              LabelMode::kClassAware, "llm");
  CHECK(r.diagnostics.ok);
  REQUIRE(r.spans.spans.size() == 1);
  CHECK(r.spans.spans[0] == SpanAnnotation{22, 32, HallucinationClass::kUnsupportedCondition});
  CHECK(r.diagnostics.confidence == 1.0);
  CHECK(r.spans.annotator == "llm");

  r = interpret_response(kDoc, "AVS WITH ERRORS LABELED:\nYou were <error>admitted for", LabelMode::kClassAgnostic, "llm");
  CHECK_FALSE(r.diagnostics.ok);
  CHECK(r.diagnostics.error == ErrorCode::kMalformedTag);
  CHECK(r.spans.spans.empty());
  CHECK(r.spans.doc_id == "d1");

  r = interpret_response(kDoc, "Nothing to <error>see</error> here at all, sorry.", LabelMode::kClassAgnostic, "llm");
  CHECK_FALSE(r.diagnostics.ok);
  CHECK(r.diagnostics.error == ErrorCode::kLowConfidence);

  r = interpret_response(kDoc, "You were admitted for chest pain. Your heart tests were <error>very</error> normal.",
                         LabelMode::kClassAgnostic, "llm");
  CHECK(r.diagnostics.ok);
  CHECK(r.diagnostics.header_missing);
  CHECK(r.spans.spans.empty());
  CHECK(r.diagnostics.dropped.size() == 1);
  const auto js = to_json(r.diagnostics);
  CHECK(js["header_missing"] == true);
}

TEST_CASE("batch detection keeps order and records failures") {
  const auto dir = temp_dir("batch");
  std::vector<DocumentPair> docs;
  for (int i = 0; i < 6; ++i) {
    docs.push_back({"b" + std::to_string(i), "Context " + std::to_string(i) + ".",
                    "You were admitted on day " + std::to_string(i) + "."});
  }
  const auto t = PromptTemplates::embedded();
  LlmDetectorSettings settings;
  settings.prompt.mode = LabelMode::kClassAgnostic;
  for (int i = 0; i < 6; i += 2) {
    const auto msgs = build_detection_prompt(settings.prompt, docs[static_cast<std::size_t>(i)], t);
    nlohmann::json rec;
    rec["text"] = "AVS WITH ERRORS LABELED:\nYou were admitted on <error>day " + std::to_string(i) + "</error>.";
    std::ofstream(dir / (fixture_key(msgs) + ".json")) << rec.dump();
  }
  ChatClient client(EndpointConfig{}, ClientMode::kReplay, dir);
  const auto results = detect_batch(docs, settings, t, client, 3);
  REQUIRE(results.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(results[i].spans.doc_id == docs[i].id);
    if (i % 2 == 0) {
      CHECK(results[i].diagnostics.ok);
      REQUIRE(results[i].spans.spans.size() == 1);
      CHECK(results[i].spans.spans[0] == SpanAnnotation{21, 26, std::nullopt});
    } else {
      CHECK(results[i].diagnostics.error == ErrorCode::kFixtureMiss);
      CHECK(results[i].spans.spans.empty());
    }
  }
  CHECK(client.network_calls() == 0);
  fs::remove_all(dir);
}
