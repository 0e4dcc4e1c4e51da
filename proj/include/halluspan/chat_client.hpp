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

#ifndef HALLUSPAN_CHAT_CLIENT_HPP_
#define HALLUSPAN_CHAT_CLIENT_HPP_

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "halluspan/prompts.hpp"
#include "json.hpp"

namespace halluspan {

// OpenAI-compatible chat-completions endpoint.
struct EndpointConfig {
  std::string base_url = "https://api.openai.com";
  std::string path = "/v1/chat/completions";
  std::string model = "gpt-4";
  std::string api_key_env = "OPENAI_API_KEY";
  // "bearer" sends `Authorization: Bearer <key>`, "api-key" sends
  // `api-key: <key>` as Azure deployments expect.
  std::string auth_style = "bearer";
  int max_tokens = 600;
  double temperature = 0.0;
  int max_retries = 4;
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::milliseconds max_backoff{8000};
  std::chrono::seconds timeout{120};
};

enum class ClientMode { kLive, kReplay, kRecord };

std::string_view client_mode_name(ClientMode mode);
std::optional<ClientMode> parse_client_mode(std::string_view name);

struct TokenUsage {
  long long prompt_tokens = 0;
  long long completion_tokens = 0;
  long long total_tokens = 0;
};

struct LlmResponse {
  std::string text;
  nlohmann::json raw;
  std::optional<TokenUsage> usage;
  bool from_fixture = false;
};

struct HttpReply {
  int status = 0;
  std::string body;
};

// One HTTP POST. Connection-level failures raise Error(kTransport).
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpReply post(const std::string& base_url, const std::string& path,
                         const std::map<std::string, std::string>& headers, const std::string& body,
                         std::chrono::seconds timeout) = 0;
};

std::unique_ptr<Transport> make_http_transport();

// Request body sent for `messages`.
nlohmann::ordered_json request_body(const Messages& messages, const EndpointConfig& cfg);

// Fixture key: SHA-256 of the compact JSON serialization of the messages.
std::string fixture_key(const Messages& messages);

// Thread-safe. Replay mode never touches the transport; live and record mode
// need the credential environment variable, checked on construction.
class ChatClient {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  ChatClient(EndpointConfig cfg, ClientMode mode, std::filesystem::path fixture_dir = {},
             std::shared_ptr<Transport> transport = nullptr, Sleeper sleeper = nullptr);

  LlmResponse complete(const Messages& messages);

  const EndpointConfig& config() const { return cfg_; }
  ClientMode mode() const { return mode_; }
  std::size_t network_calls() const { return network_calls_.load(); }

 private:
  LlmResponse call_endpoint(const Messages& messages);

  EndpointConfig cfg_;
  ClientMode mode_;
  std::filesystem::path fixture_dir_;
  std::shared_ptr<Transport> transport_;
  Sleeper sleeper_;
  std::string credential_;
  std::atomic<std::size_t> network_calls_{0};
};

}  // namespace halluspan

#endif  // HALLUSPAN_CHAT_CLIENT_HPP_
