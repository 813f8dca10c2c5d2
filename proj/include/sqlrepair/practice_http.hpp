#pragma once

#include <memory>
#include <string>

#include "sqlrepair/practice.hpp"

namespace httplib {
class Server;
}

namespace sqlrepair {

inline constexpr const char* kParticipantHeader = "X-Participant";

/// Routes:
///   POST /session                      -> 201 {participant}
///   GET  /problems                     -> problem list
///   GET  /problems/{id}                -> revealed pairs only
///   POST /problems/{id}/attempts       -> verdict and feedback
///   POST /problems/{id}/vote-options   -> up to four labelled queries
///   GET  /problems/{id}/ratings        -> this participant's ratings
///   POST /ratings                      -> 204
/// Everything except POST /session needs the X-Participant header.
/// `static_dir`, when non-empty, is served at `/`.
std::unique_ptr<httplib::Server> make_server(PracticeService& service, const std::string& static_dir = "");

/// Reads SQLREPAIR_PORT (8080), SQLREPAIR_DATA_DIR (./data), SQLREPAIR_PROBLEMS
/// (<data>/problems), SQLREPAIR_POOL (<data>/pool.json, optional) and
/// SQLREPAIR_STATIC (optional), then serves until killed.
int serve_from_env();

}  // namespace sqlrepair
