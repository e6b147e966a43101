#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "docgen/clipbank.hpp"
#include "docgen/generator.hpp"

namespace docgen {

inline constexpr const char* kSessionHeader = "X-DocGen-Session";
inline constexpr const char* kBankPathEnv = "DOCGEN_BANK_PATH";

struct ServiceConfig {
  std::filesystem::path bank_path;
  std::string listen_address = "127.0.0.1:8080";
  std::optional<std::filesystem::path> media_root;
  std::optional<std::filesystem::path> ui_root;
  std::filesystem::path session_dir = "sessions";
  GenerationConstraints default_constraints;
};

// DOCGEN_BANK_PATH, when set, replaces config.bank_path.
ServiceConfig apply_environment(ServiceConfig config);

struct HostPort {
  std::string host;
  int port = 0;
};

// Parses "host:port"; nullopt unless the port is 0-65535 and host non-empty.
std::optional<HostPort> parse_listen_address(const std::string& text);

struct ApiRequest {
  std::string method;
  std::string path;
  std::string body;
  std::string session_id;  // from the session header, may be empty
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
  std::string session_id;  // echoed in the session header when set
};

// Transport-independent request handling for the /api endpoints. Handlers only
// translate between JSON and the library operations.
class ApiService {
 public:
  using SeedSource = std::function<std::uint64_t()>;

  // Loads the bank from config.bank_path; throws docgen::Error on failure.
  explicit ApiService(ServiceConfig config);
  ApiService(ClipBank bank, ServiceConfig config);

  ApiResponse handle(const ApiRequest& request);

  const ClipBank& bank() const noexcept { return bank_; }
  const ServiceConfig& config() const noexcept { return config_; }

  // Replaces the entropy used for omitted seeds and new session ids.
  void set_seed_source(SeedSource source);

  std::filesystem::path session_log_path(const std::string& session_id) const;

 private:
  ApiResponse get_topics() const;
  ApiResponse post_generate(const ApiRequest& request);
  ApiResponse get_clip(const std::string& id) const;
  ApiResponse get_coverage(const std::string& session_id);

  std::mutex& session_mutex(const std::string& session_id);
  std::uint64_t draw_seed();

  ClipBank bank_;
  ServiceConfig config_;
  SeedSource seed_source_;
  std::mutex seed_mutex_;
  std::mutex sessions_mutex_;
  std::map<std::string, std::unique_ptr<std::mutex>> session_mutexes_;
};

// Session ids are 1-64 characters of [A-Za-z0-9_-].
bool is_valid_session_id(const std::string& id);

// cpp-httplib front end: /api/* via ApiService, /media/* from media_root and
// the web UI bundle from ui_root when configured.
class HttpServer {
 public:
  explicit HttpServer(ApiService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds host:port (port 0 picks a free one) and returns the bound port, or
  // -1 on failure.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace docgen
