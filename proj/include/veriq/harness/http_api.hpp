#pragma once

#include <string>

// Before httplib: <resolv.h> defines a _res macro that breaks Eigen.
#include "veriq/harness/sessions.hpp"

#include <httplib.h>

namespace veriq::harness {

// HTTP status for an error code: 404 not found, 409 conflict, 422 invalid
// argument or unknown concepts, 500 solver failures, 400 otherwise.
int HttpStatus(ErrorCode code);

// Installs the session routes on `server`. The manager must outlive it.
//   GET  /healthz
//   POST /sessions                     {"pool", "norms", "age", "discontinue_run"?}
//   GET  /sessions/{id}/current
//   POST /sessions/{id}/scores         {"item_id", "clue"?, "scores": [...]}
//   POST /sessions/{id}/advance
//   GET  /sessions/{id}/report?age=A&composition=C
//   GET  /sessions/{id}/transcript
void InstallRoutes(httplib::Server& server, SessionManager& sessions);

// "host:port" -> (host, port). Throws kInvalidArgument.
std::pair<std::string, int> ParseListenAddress(const std::string& address);

}  // namespace veriq::harness
