#include "docgen/service.hpp"

#include <cstdlib>
#include <limits>
#include <random>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "docgen/export.hpp"
#include "docgen/session.hpp"

namespace docgen {

namespace {

using Json = nlohmann::ordered_json;

ApiResponse json_response(int status, std::string body) {
  ApiResponse r;
  r.status = status;
  r.body = std::move(body);
  return r;
}

ApiResponse error_response(int status, std::string_view error, const std::string& message,
                           const std::string& subject = {}) {
  Json j;
  j["error"] = std::string(error);
  j["message"] = message;
  if (!subject.empty()) j["subject"] = subject;
  return json_response(status, j.dump());
}

ApiResponse not_found(const std::string& what) { return error_response(404, "NotFound", what + " not found", what); }

std::uint64_t default_entropy() {
  static thread_local std::random_device device;
  return (std::uint64_t{device()} << 32) ^ device();
}

std::string hex_token(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[value & 0xF];
    value >>= 4;
  }
  return out;
}

// Parses the generate request body. Returns an error response on bad input.
std::optional<ApiResponse> parse_generate_body(const std::string& body, FilterSelection& selection,
                                               std::optional<std::uint64_t>& seed,
                                               GenerationConstraints& constraints) {
  Json j;
  try {
    j = Json::parse(body);
  } catch (const Json::parse_error& e) {
    return error_response(400, "MalformedBody", std::string("body is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) return error_response(400, "MalformedBody", "body must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "topics" && key != "seed" && key != "constraints") {
      return error_response(400, "MalformedBody", "unknown field \"" + key + "\"", key);
    }
  }
  auto topics = j.find("topics");
  if (topics == j.end() || !topics->is_array()) {
    return error_response(400, "MalformedBody", "\"topics\" must be an array of strings");
  }
  for (const auto& t : *topics) {
    if (!t.is_string()) return error_response(400, "MalformedBody", "\"topics\" must be an array of strings");
    selection.topics.push_back(t.get<std::string>());
  }
  if (auto s = j.find("seed"); s != j.end() && !s->is_null()) {
    if (!s->is_number_unsigned()) {
      return error_response(400, "MalformedBody", "\"seed\" must be a non-negative 64-bit integer");
    }
    seed = s->get<std::uint64_t>();
  }
  if (auto c = j.find("constraints"); c != j.end() && !c->is_null()) {
    if (!c->is_object()) return error_response(400, "MalformedBody", "\"constraints\" must be an object");
    for (const auto& [key, value] : c->items()) {
      int* target = key == "min_total_s"             ? &constraints.min_total_s
                    : key == "max_total_s"           ? &constraints.max_total_s
                    : key == "max_clips_per_speaker" ? &constraints.max_clips_per_speaker
                    : key == "max_restarts"          ? &constraints.max_restarts
                                                     : nullptr;
      if (target) {
        if (!value.is_number_integer()) {
          return error_response(400, "MalformedBody", "constraint \"" + key + "\" must be an integer", key);
        }
        const auto v = value.get<std::int64_t>();
        if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
          return error_response(400, "MalformedBody", "constraint \"" + key + "\" out of range", key);
        }
        *target = static_cast<int>(v);
      } else if (key == "require_topic_coverage") {
        if (!value.is_boolean()) {
          return error_response(400, "MalformedBody", "\"require_topic_coverage\" must be a boolean", key);
        }
        constraints.require_topic_coverage = value.get<bool>();
      } else {
        return error_response(400, "MalformedBody", "unknown constraint \"" + key + "\"", key);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

ServiceConfig apply_environment(ServiceConfig config) {
  if (const char* path = std::getenv(kBankPathEnv); path && *path) config.bank_path = path;
  return config;
}

std::optional<HostPort> parse_listen_address(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) return std::nullopt;
  HostPort out;
  out.host = text.substr(0, colon);
  long port = 0;
  for (std::size_t i = colon + 1; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') return std::nullopt;
    port = port * 10 + (text[i] - '0');
    if (port > 65535) return std::nullopt;
  }
  out.port = static_cast<int>(port);
  return out;
}

bool is_valid_session_id(const std::string& id) {
  if (id.empty() || id.size() > 64) return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '_';
    if (!ok) return false;
  }
  return true;
}

ApiService::ApiService(ServiceConfig config) : ApiService(load_bank(config.bank_path), config) {}

ApiService::ApiService(ClipBank bank, ServiceConfig config)
    : bank_(std::move(bank)), config_(std::move(config)), seed_source_(default_entropy) {
  config_.default_constraints.validate();
}

void ApiService::set_seed_source(SeedSource source) {
  std::lock_guard lock(seed_mutex_);
  seed_source_ = std::move(source);
}

std::uint64_t ApiService::draw_seed() {
  std::lock_guard lock(seed_mutex_);
  return seed_source_();
}

std::filesystem::path ApiService::session_log_path(const std::string& session_id) const {
  return config_.session_dir / (session_id + ".ndjson");
}

std::mutex& ApiService::session_mutex(const std::string& session_id) {
  std::lock_guard lock(sessions_mutex_);
  auto& slot = session_mutexes_[session_id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

ApiResponse ApiService::handle(const ApiRequest& request) {
  std::string path = request.path.substr(0, request.path.find('?'));
  try {
    if (path == "/api/topics") {
      if (request.method != "GET") return error_response(405, "MethodNotAllowed", "use GET");
      return get_topics();
    }
    if (path == "/api/generate") {
      if (request.method != "POST") return error_response(405, "MethodNotAllowed", "use POST");
      return post_generate(request);
    }
    static constexpr std::string_view kClips = "/api/clips/";
    if (path.starts_with(kClips)) {
      if (request.method != "GET") return error_response(405, "MethodNotAllowed", "use GET");
      return get_clip(path.substr(kClips.size()));
    }
    static constexpr std::string_view kSessions = "/api/sessions/";
    static constexpr std::string_view kCoverage = "/coverage";
    if (path.starts_with(kSessions) && path.ends_with(kCoverage) &&
        path.size() > kSessions.size() + kCoverage.size()) {
      if (request.method != "GET") return error_response(405, "MethodNotAllowed", "use GET");
      return get_coverage(path.substr(kSessions.size(), path.size() - kSessions.size() - kCoverage.size()));
    }
    return not_found(path);
  } catch (const Error& e) {
    return error_response(500, to_string(e.code()), e.what(), e.subject());
  }
}

ApiResponse ApiService::get_topics() const { return json_response(200, topics_json(bank_)); }

ApiResponse ApiService::get_clip(const std::string& id) const {
  auto idx = bank_.clip_index(id);
  if (!idx) return not_found(id);
  return json_response(200, bank_.source_record(*idx));
}

ApiResponse ApiService::post_generate(const ApiRequest& request) {
  FilterSelection selection;
  std::optional<std::uint64_t> seed;
  GenerationConstraints constraints = config_.default_constraints;
  if (auto bad = parse_generate_body(request.body, selection, seed, constraints)) return *bad;

  std::string session_id = request.session_id;
  if (session_id.empty()) {
    session_id = "s" + hex_token(draw_seed());
  } else if (!is_valid_session_id(session_id)) {
    return error_response(400, "BadSession", "session id must be 1-64 characters of [A-Za-z0-9_-]");
  }
  if (!seed) seed = draw_seed();

  Documentary doc;
  try {
    doc = generate(bank_, selection, constraints, *seed);
  } catch (const InfeasibleError& e) {
    Json j;
    j["error"] = "Infeasible";
    j["reason"] = std::string(to_string(e.reason()));
    j["message"] = e.what();
    j["seed"] = *seed;
    ApiResponse r = json_response(422, j.dump());
    r.session_id = session_id;
    return r;
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::kEmptySelection: return error_response(400, "EmptySelection", e.what());
      case ErrorCode::kUnknownTopic: return error_response(404, "UnknownTopic", e.what(), e.subject());
      case ErrorCode::kInvalidConstraints: return error_response(400, "InvalidConstraints", e.what());
      default: throw;
    }
  }

  {
    std::lock_guard lock(session_mutex(session_id));
    const auto log_path = session_log_path(session_id);
    SessionLog log;
    log.session_id = session_id;
    if (std::filesystem::exists(log_path)) log = load_session_log(log_path, session_id);
    log = record_generation(log, doc, bank_);
    append_session_entry(log_path, log, log.entries.back());
  }

  Json sid = session_id;
  ApiResponse r = json_response(200, "{\"session_id\":" + sid.dump() +
                                         ",\"documentary\":" + documentary_manifest_json(doc, bank_) + "}");
  r.session_id = session_id;
  return r;
}

ApiResponse ApiService::get_coverage(const std::string& session_id) {
  if (!is_valid_session_id(session_id)) return not_found(session_id);
  const auto log_path = session_log_path(session_id);
  SessionLog log;
  {
    std::lock_guard lock(session_mutex(session_id));
    if (!std::filesystem::exists(log_path)) return not_found(session_id);
    log = load_session_log(log_path, session_id);
  }
  if (log.entries.empty()) return error_response(404, "EmptyLog", "session has no generations", session_id);
  return json_response(200, coverage_report_json(coverage_report(log, bank_)));
}

struct HttpServer::Impl {
  ApiService& service;
  httplib::Server server;

  explicit Impl(ApiService& s) : service(s) {
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
      ApiRequest request{req.method, req.path, req.body, req.get_header_value(kSessionHeader)};
      ApiResponse response = service.handle(request);
      res.status = response.status;
      if (!response.session_id.empty()) res.set_header(kSessionHeader, response.session_id);
      res.set_content(response.body, response.content_type);
    };
    server.Get(R"(/api/.*)", forward);
    server.Post(R"(/api/.*)", forward);
    if (const auto& media = service.config().media_root) server.set_mount_point("/media", media->string());
    if (const auto& ui = service.config().ui_root) server.set_mount_point("/", ui->string());
  }
};

HttpServer::HttpServer(ApiService& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace docgen
