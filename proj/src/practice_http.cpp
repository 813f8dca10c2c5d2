#include "sqlrepair/practice_http.hpp"

#include <cstdlib>
#include <iostream>

#include <httplib.h>

#include "sqlrepair/problem_io.hpp"

namespace sqlrepair {

namespace {

void send(httplib::Response& res, const Response& r) {
  res.status = r.status;
  if (r.status != 204) res.set_content(r.body.dump(), "application/json");
}

template <typename Handler>
httplib::Server::Handler with_participant(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    const std::string participant = req.get_header_value(kParticipantHeader);
    if (participant.empty()) {
      send(res, {401, {{"error", "missing X-Participant header"}}});
      return;
    }
    send(res, handler(participant, req));
  };
}

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

}  // namespace

std::unique_ptr<httplib::Server> make_server(PracticeService& service, const std::string& static_dir) {
  auto server = std::make_unique<httplib::Server>();
  PracticeService* svc = &service;

  server->Post("/session", [svc](const httplib::Request&, httplib::Response& res) {
    send(res, svc->create_session());
  });
  server->Get("/problems", with_participant([svc](const std::string& p, const httplib::Request&) {
    return svc->list_problems(p);
  }));
  server->Get(R"(/problems/([^/]+))", with_participant([svc](const std::string& p, const httplib::Request& req) {
    return svc->get_problem(p, req.matches[1]);
  }));
  server->Post(R"(/problems/([^/]+)/attempts)",
               with_participant([svc](const std::string& p, const httplib::Request& req) {
                 return svc->submit_attempt(p, req.matches[1], req.body);
               }));
  server->Post(R"(/problems/([^/]+)/vote-options)",
               with_participant([svc](const std::string& p, const httplib::Request& req) {
                 return svc->vote_options(p, req.matches[1]);
               }));
  server->Get(R"(/problems/([^/]+)/ratings)",
              with_participant([svc](const std::string& p, const httplib::Request& req) {
                return svc->ratings(p, req.matches[1]);
              }));
  server->Post("/ratings", with_participant([svc](const std::string& p, const httplib::Request& req) {
    return svc->rate(p, req.body);
  }));
  if (!static_dir.empty()) server->set_mount_point("/", static_dir);
  return server;
}

int serve_from_env() {
  const std::filesystem::path data = env_or("SQLREPAIR_DATA_DIR", "data");
  const std::filesystem::path problems_dir = env_or("SQLREPAIR_PROBLEMS", (data / "problems").string());
  const std::filesystem::path pool_path = env_or("SQLREPAIR_POOL", (data / "pool.json").string());
  const int port = std::atoi(env_or("SQLREPAIR_PORT", "8080").c_str());

  PracticeOptions options;
  try {
    options.problems = load_problem_dir(problems_dir);
    if (std::filesystem::exists(pool_path)) options.pool = load_pool(pool_path);
    options.log_path = data / "events.jsonl";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  std::unique_ptr<PracticeService> service;
  try {
    service = std::make_unique<PracticeService>(std::move(options));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  auto server = make_server(*service, env_or("SQLREPAIR_STATIC", ""));
  std::cerr << "listening on port " << port << '\n';
  if (!server->listen("0.0.0.0", port)) {
    std::cerr << "error: cannot listen on port " << port << '\n';
    return 1;
  }
  return 0;
}

}  // namespace sqlrepair
