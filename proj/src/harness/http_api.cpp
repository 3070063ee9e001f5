#include "veriq/harness/http_api.hpp"

#include <charconv>

#include "veriq/error.hpp"

namespace veriq::harness {

using nlohmann::json;

int HttpStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kConflict:
      return 409;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kUnknownConcepts:
    case ErrorCode::kNoConcepts:
      return 422;
    case ErrorCode::kSolver:
      return 500;
    default:
      return 400;
  }
}

namespace {

void SendJson(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump() + "\n", "application/json");
}

void SendError(httplib::Response& res, ErrorCode code, const std::string& message) {
  SendJson(res, HttpStatus(code), {{"code", ErrorCodeName(code)}, {"message", message}});
}

template <typename Handler>
httplib::Server::Handler Guarded(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const Error& e) {
      SendError(res, e.code(), e.what());
    } catch (const json::exception& e) {
      SendError(res, ErrorCode::kFormat, std::string("invalid request body: ") + e.what());
    } catch (const std::exception& e) {
      res.status = 500;
      res.set_content(json{{"code", "internal"}, {"message", e.what()}}.dump() + "\n", "application/json");
    }
  };
}

json ParseBody(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kFormat, std::string("request body is not JSON: ") + e.what());
  }
}

}  // namespace

void InstallRoutes(httplib::Server& server, SessionManager& sessions) {
  server.Get("/healthz", Guarded([](const httplib::Request&, httplib::Response& res) {
               SendJson(res, 200, {{"status", "ok"}});
             }));

  server.Post("/sessions", Guarded([&sessions](const httplib::Request& req, httplib::Response& res) {
                const auto id = sessions.Create(SessionSpec::FromJson(ParseBody(req)));
                SendJson(res, 201, {{"id", id}});
              }));

  server.Get(R"(/sessions/([^/]+)/current)", Guarded([&sessions](const httplib::Request& req, httplib::Response& res) {
               SendJson(res, 200, sessions.Current(req.matches[1]));
             }));

  server.Post(R"(/sessions/([^/]+)/scores)", Guarded([&sessions](const httplib::Request& req, httplib::Response& res) {
                const std::string id = req.matches[1];
                if (!sessions.Exists(id)) throw Error(ErrorCode::kNotFound, "unknown session '" + id + "'");
                const auto body = ParseBody(req);
                if (!body.is_object() || !body.contains("item_id") || !body.contains("scores")) {
                  throw Error(ErrorCode::kFormat, "scores request needs item_id and scores");
                }
                const auto& raw = body.at("scores");
                if (!raw.is_array()) throw Error(ErrorCode::kInvalidArgument, "scores must be an array");
                std::vector<int> scores;
                for (const auto& s : raw) {
                  if (!s.is_number_integer()) throw Error(ErrorCode::kInvalidArgument, "scores must be integers");
                  scores.push_back(s.get<int>());
                }
                std::optional<std::size_t> clue;
                if (body.contains("clue") && !body.at("clue").is_null()) clue = body.at("clue").get<std::size_t>();
                SendJson(res, 200, sessions.Score(id, body.at("item_id").get<std::string>(), clue, scores));
              }));

  server.Post(R"(/sessions/([^/]+)/advance)", Guarded([&sessions](const httplib::Request& req, httplib::Response& res) {
                SendJson(res, 200, sessions.Advance(req.matches[1]));
              }));

  server.Get(R"(/sessions/([^/]+)/report)", Guarded([&sessions](const httplib::Request& req, httplib::Response& res) {
               std::optional<psych::Age> age;
               std::optional<std::string> composition;
               if (req.has_param("age")) age = psych::Age::Parse(req.get_param_value("age"));
               if (req.has_param("composition")) composition = req.get_param_value("composition");
               SendJson(res, 200, sessions.Report(req.matches[1], age, composition));
             }));

  server.Get(R"(/sessions/([^/]+)/transcript)",
             Guarded([&sessions](const httplib::Request& req, httplib::Response& res) {
               res.status = 200;
               res.set_content(sessions.GetTranscript(req.matches[1]).Serialize(), "application/x-ndjson");
             }));
}

std::pair<std::string, int> ParseListenAddress(const std::string& address) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos) throw Error(ErrorCode::kInvalidArgument, "listen address must be host:port");
  int port = 0;
  const auto digits = std::string_view(address).substr(colon + 1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || port < 0 || port > 65535) {
    throw Error(ErrorCode::kInvalidArgument, "bad port in listen address '" + address + "'");
  }
  return {address.substr(0, colon), port};
}

}  // namespace veriq::harness
