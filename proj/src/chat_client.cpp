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

#include "halluspan/chat_client.hpp"

#include <cstdlib>
#include <thread>

#include "halluspan/digest.hpp"
#include "halluspan/error.hpp"
#include "halluspan/jsonl.hpp"
#include "httplib.h"

namespace halluspan {
namespace {

class HttpTransport : public Transport {
 public:
  HttpReply post(const std::string& base_url, const std::string& path,
                 const std::map<std::string, std::string>& headers, const std::string& body,
                 std::chrono::seconds timeout) override {
    httplib::Client client(base_url);
    if (!client.is_valid()) {
      throw Error(ErrorCode::kConfigError, "invalid endpoint base URL", base_url);
    }
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);
    auto res = client.Post(path, h, body, "application/json");
    if (!res) {
      throw Error(ErrorCode::kTransport,
                  "request to " + base_url + path + " failed: " + httplib::to_string(res.error()));
    }
    return {res->status, res->body};
  }
};

bool retryable(int status) { return status == 429 || status == 408 || status >= 500; }

LlmResponse parse_completion(const std::string& body) {
  nlohmann::json raw;
  try {
    raw = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kTransport, std::string("response is not JSON: ") + e.what(), body);
  }
  LlmResponse r;
  const auto* text = raw.contains("choices") && raw["choices"].is_array() && !raw["choices"].empty()
                         ? &raw["choices"][0]
                         : nullptr;
  if (text == nullptr || !text->contains("message") || !(*text)["message"].contains("content") ||
      !(*text)["message"]["content"].is_string()) {
    throw Error(ErrorCode::kTransport, "response has no choices[0].message.content", body);
  }
  r.text = (*text)["message"]["content"].get<std::string>();
  if (raw.contains("usage") && raw["usage"].is_object()) {
    const auto& u = raw["usage"];
    r.usage = TokenUsage{u.value("prompt_tokens", 0LL), u.value("completion_tokens", 0LL),
                         u.value("total_tokens", 0LL)};
  }
  r.raw = std::move(raw);
  return r;
}

}  // namespace

std::string_view client_mode_name(ClientMode mode) {
  switch (mode) {
    case ClientMode::kLive: return "live";
    case ClientMode::kReplay: return "replay";
    case ClientMode::kRecord: return "record";
  }
  return "live";
}

std::optional<ClientMode> parse_client_mode(std::string_view name) {
  if (name == "live") return ClientMode::kLive;
  if (name == "replay") return ClientMode::kReplay;
  if (name == "record") return ClientMode::kRecord;
  return std::nullopt;
}

std::unique_ptr<Transport> make_http_transport() { return std::make_unique<HttpTransport>(); }

nlohmann::ordered_json request_body(const Messages& messages, const EndpointConfig& cfg) {
  nlohmann::ordered_json body;
  body["model"] = cfg.model;
  body["messages"] = to_json(messages);
  body["max_tokens"] = cfg.max_tokens;
  body["temperature"] = cfg.temperature;
  return body;
}

std::string fixture_key(const Messages& messages) {
  return sha256_hex(to_json(messages).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace));
}

ChatClient::ChatClient(EndpointConfig cfg, ClientMode mode, std::filesystem::path fixture_dir,
                       std::shared_ptr<Transport> transport, Sleeper sleeper)
    : cfg_(std::move(cfg)),
      mode_(mode),
      fixture_dir_(std::move(fixture_dir)),
      transport_(std::move(transport)),
      sleeper_(std::move(sleeper)) {
  if (mode_ != ClientMode::kLive && fixture_dir_.empty()) {
    throw Error(ErrorCode::kConfigError, "replay and record modes need a fixture directory");
  }
  if (mode_ != ClientMode::kReplay) {
    const char* key = std::getenv(cfg_.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw Error(ErrorCode::kConfigError,
                  "credential environment variable " + cfg_.api_key_env + " is not set");
    }
    credential_ = key;
    if (!transport_) transport_ = make_http_transport();
  }
  if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

LlmResponse ChatClient::call_endpoint(const Messages& messages) {
  const std::string body = request_body(messages, cfg_).dump();
  std::map<std::string, std::string> headers;
  if (cfg_.auth_style == "api-key") {
    headers["api-key"] = credential_;
  } else {
    headers["Authorization"] = "Bearer " + credential_;
  }
  auto backoff = cfg_.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    HttpReply reply;
    bool transport_failed = false;
    std::string failure;
    try {
      ++network_calls_;
      reply = transport_->post(cfg_.base_url, cfg_.path, headers, body, cfg_.timeout);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTransport) throw;
      transport_failed = true;
      failure = e.what();
    }
    if (!transport_failed && reply.status >= 200 && reply.status < 300) {
      return parse_completion(reply.body);
    }
    const bool again = transport_failed || retryable(reply.status);
    if (!again || attempt >= cfg_.max_retries) {
      if (!transport_failed && reply.status == 429) {
        throw Error(ErrorCode::kRateLimited,
                    "rate limited after " + std::to_string(attempt + 1) + " attempts", reply.body);
      }
      if (transport_failed) throw Error(ErrorCode::kTransport, failure);
      throw Error(ErrorCode::kTransport, "endpoint returned HTTP " + std::to_string(reply.status),
                  reply.body);
    }
    sleeper_(backoff);
    backoff = std::min(backoff * 2, cfg_.max_backoff);
  }
}

LlmResponse ChatClient::complete(const Messages& messages) {
  const std::string key = fixture_key(messages);
  const auto path = fixture_dir_ / (key + ".json");
  if (mode_ == ClientMode::kReplay) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
      throw Error(ErrorCode::kFixtureMiss, "no fixture for request " + key, path.string());
    }
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kSchemaError, "fixture " + path.string() + ": " + e.what());
    }
    if (!rec.contains("text") || !rec["text"].is_string()) {
      throw Error(ErrorCode::kSchemaError, "fixture " + path.string() + " lacks a 'text' field");
    }
    LlmResponse r;
    r.text = rec["text"].get<std::string>();
    r.raw = rec.value("raw", nlohmann::json());
    r.from_fixture = true;
    return r;
  }
  LlmResponse r = call_endpoint(messages);
  if (mode_ == ClientMode::kRecord) {
    nlohmann::ordered_json rec;
    rec["key"] = key;
    rec["model"] = cfg_.model;
    rec["messages"] = to_json(messages);
    rec["text"] = r.text;
    rec["raw"] = r.raw;
    write_file(path, rec.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n");
  }
  return r;
}

}  // namespace halluspan
